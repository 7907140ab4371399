#include "cubicslice/cubic_map.hpp"

#include <algorithm>
#include <vector>

namespace cubicslice {

std::string_view to_string(BoettcherStatus s) {
  switch (s) {
    case BoettcherStatus::ok: return "ok";
    case BoettcherStatus::undefined_here: return "undefined_here";
    case BoettcherStatus::bounded: return "bounded";
    case BoettcherStatus::continuation_failed: return "continuation_failed";
  }
  return "?";
}

template <class T>
EscapeResult escape_classification(const CubicMap<T>& f, cplx<T> z, int budget) {
  const T r2 = f.escape_radius() * f.escape_radius();
  for (int n = 0; n <= budget; ++n) {
    if (std::norm(z) > r2) return {true, n};
    z = f(z);
  }
  return {false, budget};
}

template <class T>
std::optional<FarLog<T>> far_log(const CubicMap<T>& f, cplx<T> z, int budget) {
  using J = Jet<cplx<T>>;
  const T R = f.escape_radius();
  J a(f.a), v(f.v), w(z, cplx<T>(1));
  int k = 0;
  while (std::abs(w.v) < R) {
    if (k >= budget) return std::nullopt;
    w = cubic_eval(a, v, w);
    ++k;
  }
  J L = log_boettcher_far(a, v, w);
  return FarLog<T>{k, L.v, L.d};
}

template <class T>
std::optional<T> green(const CubicMap<T>& f, cplx<T> z, int budget) {
  const T R = f.escape_radius();
  int k = 0;
  while (std::abs(z) < R) {
    if (k >= budget) return std::nullopt;
    z = f(z);
    ++k;
  }
  T g = log_boettcher_far(f.a, f.v, z).real();
  for (int i = 0; i < k; ++i) g /= T(3);
  return g;
}

template <class T>
T critical_green(const CubicMap<T>& f, int budget) {
  T best = 0;
  for (cplx<T> c : {f.a, -f.a})
    if (auto g = green(f, c, budget)) best = std::max(best, *g);
  return best;
}

namespace {

template <class T>
T pow3(int k) {
  T p = 1;
  for (int i = 0; i < k; ++i) p *= T(3);
  return p;
}

template <class T>
std::optional<BoettcherResult<T>> continue_from_infinity(const CubicMap<T>& f, cplx<T> z, T eta) {
  const T R = f.escape_radius();
  const T two_pi = T(2) * pi_v<T>();
  struct Node {
    cplx<T> z;
    FarLog<T> fl;
  };
  auto node = [&](cplx<T> p) -> std::optional<Node> {
    auto fl = far_log(f, p);
    if (!fl) return std::nullopt;
    return Node{p, *fl};
  };
  auto grad_dir = [&](const Node& n) {
    cplx<T> D = n.fl.deriv / pow3<T>(n.fl.k);
    return std::conj(D) / std::norm(D);  // moves G up by one unit per unit parameter
  };
  auto pot = [&](const Node& n) { return n.fl.value.real() / pow3<T>(n.fl.k); };

  std::vector<Node> path;
  auto first = node(z);
  if (!first) return std::nullopt;
  path.push_back(*first);
  for (int guard = 0; std::abs(path.back().z) < R * T(1.01) || path.back().fl.k > 0; ++guard) {
    if (guard > 20000) return std::nullopt;
    const Node& cur = path.back();
    T G = pot(cur);
    T dG = eta * std::max(G, T(1e-300));
    // Midpoint rule on dz/dG = conj(D) / |D|^2.
    auto mid = node(cur.z + grad_dir(cur) * (dG / 2));
    if (!mid) return std::nullopt;
    auto next = node(cur.z + grad_dir(*mid) * dG);
    if (!next) return std::nullopt;
    path.push_back(*next);
  }

  cplx<T> L = path.back().fl.value;
  for (std::size_t i = path.size() - 1; i-- > 0;) {
    const Node& lo = path[i];
    const Node& hi = path[i + 1];
    cplx<T> Dlo = lo.fl.deriv / pow3<T>(lo.fl.k), Dhi = hi.fl.deriv / pow3<T>(hi.fl.k);
    cplx<T> pred = L - (Dlo + Dhi) / T(2) * (hi.z - lo.z);
    T scale = pow3<T>(lo.fl.k);
    cplx<T> diff = pred * scale - lo.fl.value;
    T j = std::round(diff.imag() / two_pi);
    T resid = std::abs(diff - cplx<T>(0, two_pi * j));
    if (resid > T(0.5)) return std::nullopt;
    L = (lo.fl.value + cplx<T>(0, two_pi * j)) / scale;
  }
  BoettcherResult<T> out;
  out.log_value = L;
  out.value = std::exp(L);
  out.potential = L.real();
  return out;
}

}  // namespace

template <class T>
BoettcherResult<T> boettcher_external(const CubicMap<T>& f, cplx<T> z) {
  BoettcherResult<T> out;
  auto G = green(f, z);
  if (!G) {
    out.status = BoettcherStatus::bounded;
    return out;
  }
  out.potential = *G;
  T gc = critical_green(f);
  if (*G < gc * (T(1) - T(1e-9))) {
    out.status = BoettcherStatus::undefined_here;
    return out;
  }
  for (T eta : {T(0.1), T(0.03), T(0.01)}) {
    if (auto r = continue_from_infinity(f, z, eta)) return *r;
  }
  out.status = BoettcherStatus::continuation_failed;
  return out;
}

template <class T>
std::vector<cplx<T>> periodic_points(const CubicMap<T>& f, unsigned p) {
  std::vector<cplx<T>> P{f.v + T(2) * f.a * f.a * f.a, -T(3) * f.a * f.a, 0, 1};
  std::vector<cplx<T>> Q = P;
  for (unsigned i = 1; i < p; ++i) {
    auto Q3 = poly_mul(poly_mul(Q, Q), Q);
    for (std::size_t j = 0; j < Q.size(); ++j) Q3[j] += -T(3) * f.a * f.a * Q[j];
    Q3[0] += f.v + T(2) * f.a * f.a * f.a;
    Q = Q3;
  }
  Q[1] -= cplx<T>(1);
  return polynomial_roots(Q);
}

#define CUBICSLICE_INSTANTIATE(T)                                                         \
  template EscapeResult escape_classification(const CubicMap<T>&, cplx<T>, int);          \
  template std::optional<T> green(const CubicMap<T>&, cplx<T>, int);                      \
  template T critical_green(const CubicMap<T>&, int);                                     \
  template std::optional<FarLog<T>> far_log(const CubicMap<T>&, cplx<T>, int);            \
  template BoettcherResult<T> boettcher_external(const CubicMap<T>&, cplx<T>);          \
  template std::vector<cplx<T>> periodic_points(const CubicMap<T>&, unsigned);

CUBICSLICE_INSTANTIATE(double)
CUBICSLICE_INSTANTIATE(long double)

}  // namespace cubicslice
