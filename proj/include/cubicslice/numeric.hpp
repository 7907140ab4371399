#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <string_view>
#include <vector>

namespace cubicslice {

template <class T>
using cplx = std::complex<T>;

enum class Precision { double_, high };
Precision parse_precision(std::string_view s);
std::string_view to_string(Precision p);

// First-order jet: value and derivative with respect to one complex variable.
template <class C>
struct Jet {
  C v{}, d{};
  Jet() = default;
  Jet(C value) : v(value), d(0) {}
  Jet(C value, C deriv) : v(value), d(deriv) {}

  Jet& operator+=(const Jet& o) { v += o.v; d += o.d; return *this; }
  Jet& operator-=(const Jet& o) { v -= o.v; d -= o.d; return *this; }
  Jet& operator*=(const Jet& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Jet& operator/=(const Jet& o) {
    C inv = C(1) / o.v;
    d = (d - v * inv * o.d) * inv;
    v *= inv;
    return *this;
  }
  friend Jet operator+(Jet x, const Jet& y) { return x += y; }
  friend Jet operator-(Jet x, const Jet& y) { return x -= y; }
  friend Jet operator*(Jet x, const Jet& y) { return x *= y; }
  friend Jet operator/(Jet x, const Jet& y) { return x /= y; }
  friend Jet operator-(const Jet& x) { return Jet(-x.v, -x.d); }
};

template <class C> C value_of(const C& x) { return x; }
template <class C> C value_of(const Jet<C>& x) { return x.v; }

// log(1 + x) with a series near 0 so that tiny arguments keep full precision.
template <class T>
cplx<T> log1p_c(const cplx<T>& x) {
  if (std::abs(x) < T(0.0625)) {
    cplx<T> term = x, sum = 0;
    for (int n = 1; n < 80; ++n) {
      cplx<T> add = term / T(n);
      sum += (n % 2 ? add : -add);
      if (std::abs(add) <= std::numeric_limits<T>::epsilon() * std::abs(sum)) break;
      term *= x;
    }
    return sum;
  }
  return std::log(cplx<T>(1) + x);
}

template <class C>
Jet<C> log1p_c(const Jet<C>& x) { return Jet<C>(log1p_c(x.v), x.d / (C(1) + x.v)); }

template <class T>
cplx<T> log_c(const cplx<T>& x) { return std::log(x); }
template <class C>
Jet<C> log_c(const Jet<C>& x) { return Jet<C>(std::log(x.v), x.d / x.v); }

// Reduce the imaginary part into (-pi, pi].
template <class T>
cplx<T> wrap_imag(cplx<T> z) {
  const T two_pi = T(2) * std::acos(T(-1));
  T im = std::remainder(z.imag(), two_pi);
  return {z.real(), im};
}

template <class T>
constexpr T pi_v() { return std::acos(T(-1)); }

// Horner evaluation, coefficients from lowest degree.
template <class T>
cplx<T> poly_eval(const std::vector<cplx<T>>& c, cplx<T> z) {
  cplx<T> s = 0;
  for (std::size_t i = c.size(); i-- > 0;) s = s * z + c[i];
  return s;
}

// All roots of a polynomial (coefficients from lowest degree) by the
// Aberth-Ehrlich iteration.
template <class T>
std::vector<cplx<T>> polynomial_roots(const std::vector<cplx<T>>& coeffs, int max_iter = 500);

template <class T>
std::vector<cplx<T>> poly_mul(const std::vector<cplx<T>>& p, const std::vector<cplx<T>>& q);

// Default worker count: CUBICSLICE_THREADS env var, else hardware concurrency.
unsigned default_threads();
void set_default_threads(unsigned n);

// Runs fn(i) for i in [0, n). Work is split by index so results written to
// slot i are independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads = 0);

}  // namespace cubicslice
