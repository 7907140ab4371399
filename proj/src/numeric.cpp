#include "cubicslice/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace cubicslice {

Precision parse_precision(std::string_view s) {
  if (s == "double") return Precision::double_;
  if (s == "high") return Precision::high;
  throw std::invalid_argument("precision must be 'double' or 'high', got '" + std::string(s) + "'");
}

std::string_view to_string(Precision p) { return p == Precision::high ? "high" : "double"; }

template <class T>
std::vector<cplx<T>> poly_mul(const std::vector<cplx<T>>& p, const std::vector<cplx<T>>& q) {
  std::vector<cplx<T>> r(p.size() + q.size() - 1);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

template <class T>
std::vector<cplx<T>> polynomial_roots(const std::vector<cplx<T>>& coeffs_in, int max_iter) {
  std::vector<cplx<T>> c = coeffs_in;
  while (c.size() > 1 && c.back() == cplx<T>(0)) c.pop_back();
  const std::size_t n = c.size() - 1;
  if (n == 0) return {};
  for (auto& x : c) x /= coeffs_in[n];
  std::vector<cplx<T>> dc(n);
  for (std::size_t i = 1; i <= n; ++i) dc[i - 1] = c[i] * T(i);

  // Cauchy bound for the initial circle.
  T bound = 0;
  for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, std::abs(c[i]));
  T radius = std::min(T(1) + bound, T(2) * std::pow(bound + T(1), T(1) / T(n)));
  std::vector<cplx<T>> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    T ang = T(2) * pi_v<T>() * (T(k) + T(0.4)) / T(n) + T(0.25);
    z[k] = std::polar(radius * T(0.7), ang);
  }
  const T eps = std::numeric_limits<T>::epsilon();
  for (int it = 0; it < max_iter; ++it) {
    T worst = 0;
    for (std::size_t k = 0; k < n; ++k) {
      cplx<T> p = poly_eval(c, z[k]), dp = poly_eval(dc, z[k]);
      if (p == cplx<T>(0)) continue;
      cplx<T> ratio = p / dp;
      cplx<T> s = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) s += cplx<T>(1) / (z[k] - z[j]);
      cplx<T> step = ratio / (cplx<T>(1) - ratio * s);
      z[k] -= step;
      worst = std::max(worst, std::abs(step) / std::max(T(1), std::abs(z[k])));
    }
    if (worst < 16 * eps) break;
  }
  return z;
}

template std::vector<cplx<double>> polynomial_roots(const std::vector<cplx<double>>&, int);
template std::vector<cplx<long double>> polynomial_roots(const std::vector<cplx<long double>>&, int);
template std::vector<cplx<double>> poly_mul(const std::vector<cplx<double>>&, const std::vector<cplx<double>>&);
template std::vector<cplx<long double>> poly_mul(const std::vector<cplx<long double>>&,
                                                 const std::vector<cplx<long double>>&);

namespace {
std::atomic<unsigned> g_threads{0};
}

unsigned default_threads() {
  if (unsigned n = g_threads.load()) return n;
  if (const char* env = std::getenv("CUBICSLICE_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_default_threads(unsigned n) { g_threads = n; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads) {
  if (threads == 0) threads = default_threads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace cubicslice
