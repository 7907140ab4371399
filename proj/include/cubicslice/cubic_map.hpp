#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>

#include "cubicslice/numeric.hpp"

namespace cubicslice {

// z^3 - 3a^2 z + 2a^3 + v, generic over complex scalars and jets.
template <class S>
S cubic_eval(const S& a, const S& v, const S& z) {
  S a2 = a * a;
  return z * z * z - S(3) * a2 * z + S(2) * a2 * a + v;
}

template <class T>
struct CubicMap {
  cplx<T> a{}, v{};

  cplx<T> operator()(const cplx<T>& z) const { return cubic_eval(a, v, z); }
  cplx<T> derivative(const cplx<T>& z) const { return T(3) * (z * z - a * a); }
  cplx<T> critical_value_free() const { return (*this)(-a); }
  cplx<T> cocritical() const { return T(2) * a; }

  // For |z| >= R, |z^3| beats the lower-order terms by a factor of two.
  T escape_radius() const {
    T ra = std::abs(a), rv = std::abs(v);
    return std::max(T(4), T(2) * (ra * ra + ra + rv + T(1)));
  }

  template <class U>
  CubicMap<U> cast() const {
    return {cplx<U>(U(a.real()), U(a.imag())), cplx<U>(U(v.real()), U(v.imag()))};
  }
};

// log of the Boettcher coordinate for |w| >= R:
//   log w + sum_n 3^{-(n+1)} log(1 + g(w_n)),  g(w) = (-3a^2 w + 2a^3 + v) / w^3.
// Generic so the same code yields derivatives through jets.
template <class S>
S log_boettcher_far(const S& a, const S& v, S w) {
  using C = decltype(value_of(w));
  using T = typename C::value_type;
  const T eps = std::numeric_limits<T>::epsilon();
  S a2 = a * a;
  S lead = -S(3) * a2, tail = S(2) * a2 * a + v;
  S out = log_c(w);
  T weight = T(1) / T(3);
  for (int n = 0; n < 64; ++n) {
    S w2 = w * w;
    S g = (lead * w + tail) / (w2 * w);
    T mag = std::abs(value_of(g));
    if (mag == T(0)) break;
    out += S(C(weight)) * log1p_c(g);
    if (weight * mag < eps * T(1e-3)) break;
    w = w2 * w * (S(1) + g);
    weight /= T(3);
  }
  return out;
}

struct EscapeResult {
  bool escaped = false;
  int steps = 0;  // first n with |f^n(z)| > R when escaped
};

template <class T>
EscapeResult escape_classification(const CubicMap<T>& f, cplx<T> z, int budget);

// Green's function; nullopt when the orbit stays inside R for `budget` steps.
template <class T>
std::optional<T> green(const CubicMap<T>& f, cplx<T> z, int budget = 2000);

// Largest Green value among escaping critical points, 0 if both are bounded.
template <class T>
T critical_green(const CubicMap<T>& f, int budget = 2000);

// Value of log B_far at the first iterate outside R, together with its
// derivative in z and the number of iterations used. log B(z) is
// (value + 2 pi i j) / 3^k for some integer j.
template <class T>
struct FarLog {
  int k = 0;
  cplx<T> value, deriv;
};

template <class T>
std::optional<FarLog<T>> far_log(const CubicMap<T>& f, cplx<T> z, int budget = 2000);

enum class BoettcherStatus { ok, undefined_here, bounded, continuation_failed };
std::string_view to_string(BoettcherStatus s);

template <class T>
struct BoettcherResult {
  BoettcherStatus status = BoettcherStatus::ok;
  cplx<T> log_value;  // a continuous lift of log B(z)
  cplx<T> value;      // B(z)
  T potential = 0;
};

// Boettcher coordinate at an escaping point, continued from infinity along
// the gradient line of the Green's function through z.
template <class T>
BoettcherResult<T> boettcher_external(const CubicMap<T>& f, cplx<T> z);

// Roots of f^p(z) = z (all periods dividing p), with multiplicity.
template <class T>
std::vector<cplx<T>> periodic_points(const CubicMap<T>& f, unsigned p);

}  // namespace cubicslice
