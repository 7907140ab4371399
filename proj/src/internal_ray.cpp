#include "cubicslice/internal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "internal_detail.hpp"

namespace cubicslice {

template <class T>
std::optional<cplx<T>> component_centre(const CubicMap<T>& f, const BasinComponent& comp,
                                        std::string* error) {
  cplx<T> c = f.a;
  for (int label : comp.address) {
    // f(z) - c = z^3 - 3a^2 z + 2a^3 + v - c
    std::vector<cplx<T>> P{f.v + T(2) * f.a * f.a * f.a - c, -T(3) * f.a * f.a, 0, 1};
    auto roots = polynomial_roots(P);
    std::vector<cplx<T>> distinct;
    for (auto r : roots) {
      bool dup = false;
      for (auto d : distinct) dup = dup || std::abs(r - d) < T(1e-7) * std::max(T(1), std::abs(d));
      if (!dup) distinct.push_back(r);
    }
    auto key = [](cplx<T> z) {
      T t = std::arg(z);
      return t < 0 ? t + T(2) * pi_v<T>() : t;
    };
    std::sort(distinct.begin(), distinct.end(), [&](auto x, auto y) { return key(x) < key(y); });
    if (label < 0 || static_cast<std::size_t>(label) >= distinct.size()) {
      if (error) *error = "address label out of range";
      return std::nullopt;
    }
    c = distinct[static_cast<std::size_t>(label)];
  }
  return c;
}

namespace detail {

template <class T>
FlowResult<T> basin_flow(const CubicMap<T>& f, cplx<T> z) {
  FlowResult<T> out;
  NearMap<T> nm(f);
  using J = Jet<cplx<T>>;
  const T eta = T(0.1);
  for (int it = 0; it < 4000; ++it) {
    auto k = nm.level_of(z, 400);
    if (!k) return out;
    if (*k == 0) {
      out.in_immediate = true;
      out.log_phi = nm.log_phi(cplx<T>(f.a), z);
      out.ok = true;
      return out;
    }
    const T scale = std::pow(T(nm.deg), T(*k));
    auto eval = [&](cplx<T> p) {
      J w(p, cplx<T>(1));
      for (int i = 0; i < *k; ++i) w = cubic_eval(J(f.a), J(f.v), w);
      return nm.log_phi(J(f.a), w);
    };
    J L = eval(z);
    T g = -L.v.real() / scale;
    if (g > T(60)) {
      // Converges to a strict preimage of a.
      out.depth = *k;
      out.ok = true;
      return out;
    }
    // Move down the internal ray: lower log|phi| by eta g, argument fixed.
    cplx<T> target = L.v - cplx<T>(eta * g * scale, 0);
    cplx<T> zn = z - cplx<T>(eta * g * scale, 0) / L.d;
    for (int c = 0; c < 4; ++c) {
      J Ln = eval(zn);
      cplx<T> r = Ln.v - target;
      r = cplx<T>(r.real(), std::remainder(r.imag(), T(2) * pi_v<T>()));
      zn -= r / Ln.d;
    }
    if (!std::isfinite(std::abs(zn))) return out;
    z = zn;
  }
  return out;
}

template <class T>
std::optional<T> immediate_critical_level(const CubicMap<T>& f) {
  if (f.a == cplx<T>(0)) return std::nullopt;
  cplx<T> w = f(-f.a);
  auto r = basin_flow(f, w);
  if (!r.ok || !r.in_immediate) return std::nullopt;
  NearMap<T> nm(f);
  auto k = nm.level_of(w, 400);
  cplx<T> x = w;
  for (int i = 0; i < *k; ++i) x = f(x);
  T gw = -nm.log_phi(cplx<T>(f.a), x).real() / std::pow(T(2), T(*k));
  return gw / T(2);
}

}  // namespace detail

namespace {

using detail::NearMap;

template <class T>
struct InternalSolver {
  const CubicMap<T>& f;
  const NearMap<T>& nm;
  unsigned n;  // depth of the component
  T tol;

  // Newton for log phi(f^{n+k}(z)) = -d^k g + 2 pi i t_k (mod 2 pi i).
  std::optional<cplx<T>> solve(cplx<T> z, T g, int k, T t_k) const {
    using J = Jet<cplx<T>>;
    const cplx<T> tau(-std::pow(T(nm.deg), T(k)) * g, T(2) * pi_v<T>() * t_k);
    for (int it = 0; it < 60; ++it) {
      J w(z, cplx<T>(1));
      for (unsigned i = 0; i < n + static_cast<unsigned>(k); ++i) w = cubic_eval(J(f.a), J(f.v), w);
      if (!nm.valid(w.v)) return std::nullopt;
      J L = nm.log_phi(J(f.a), w);
      cplx<T> r = wrap_imag(L.v - tau);
      cplx<T> dz = r / L.d;
      if (!std::isfinite(std::abs(dz))) return std::nullopt;
      z -= dz;
      if (std::abs(dz) <= tol * std::max(T(1), std::abs(z))) return z;
    }
    return std::nullopt;
  }
};

}  // namespace

template <class T>
RayTrace internal_ray_basin(const CubicMap<T>& f, const BasinComponent& comp, const Angle& t,
                            const InternalOptions& opts) {
  RayTrace out;
  out.angle = t;
  NearMap<T> nm(f);
  const T eps = std::numeric_limits<T>::epsilon();
  const unsigned n = static_cast<unsigned>(comp.address.size());
  const int S = std::max(2, opts.steps_per_level);
  const T d = T(nm.deg);

  std::optional<T> gc = detail::immediate_critical_level(f);
  if (gc && n > 0) {
    out.diagnostic = "-a lies in the immediate basin, which is then its own full preimage";
    return out;
  }
  std::string err;
  auto centre = component_centre(f, comp, &err);
  if (!centre) {
    out.diagnostic = err;
    return out;
  }

  InternalSolver<T> solver{f, nm, n, T(256) * eps};
  auto t_at = [&](int k) {
    Angle s = t;
    for (int i = 0; i < k; ++i) s = s.times(static_cast<std::uint64_t>(nm.deg));
    return static_cast<T>(s.to_long_double());
  };
  auto level_for = [&](T g) {
    const T need = std::log(T(2) / nm.rho);
    int k = 0;
    while (g * std::pow(d, T(k)) < need) ++k;
    return k;
  };

  // Seed: f^n(z) - a ~ (f^n)'(c) (z - c), and phi ~ u near a.
  const T g0 = std::log(T(4) / nm.rho);
  cplx<T> phi0 = std::polar(std::exp(-g0), T(2) * pi_v<T>() * static_cast<T>(t.to_long_double()));
  cplx<T> deriv = 1;
  {
    cplx<T> x = *centre;
    for (unsigned i = 0; i < n; ++i) {
      deriv *= f.derivative(x);
      x = f(x);
    }
  }
  if (std::abs(deriv) < T(1e-12)) {
    out.diagnostic = "the component maps onto the basin with degree > 1 (critical centre)";
    return out;
  }
  cplx<T> du = nm.deg == 3 ? cplx<T>(1) : T(3) * f.a;
  cplx<T> z = *centre + phi0 / (du * deriv);
  {
    auto s = solver.solve(z, g0, 0, t_at(0));
    if (!s) {
      out.diagnostic = "initial Newton failed";
      return out;
    }
    z = *s;
  }
  auto push = [&](cplx<T> p, T g) {
    if (opts.keep_samples)
      out.samples.push_back({std::complex<double>(double(p.real()), double(p.imag())), double(g)});
  };
  push(z, g0);

  const T Gfloor = std::max(T(opts.floor_potential), gc ? *gc * T(1.02) : T(0));
  const T ratio = std::pow(d, T(-1) / T(S));
  std::vector<cplx<T>> levels{z};
  std::vector<T> diffs;
  T g = g0;
  int k = 0;
  T tk = t_at(0);
  cplx<T> last_step = 0;
  long grid = 0;
  int steps = 0;

  auto try_refine = [&](cplx<T> zl) -> bool {
    if (!opts.refine || diffs.size() < 2) return false;
    T dd = diffs.back();
    T r = std::min(T(0.999), diffs.back() / diffs[diffs.size() - 2]);
    T predicted = dd * r / (T(1) - r);
    OrbitType ot = orbit_type(t, static_cast<unsigned>(nm.deg));
    auto w = refine_preperiodic(f, zl, n + ot.preperiod, ot.period);
    if (!w) return false;
    if (std::abs(*w - zl) > T(3) * predicted + T(1e3) * eps * std::max(T(1), std::abs(zl))) return false;
    out.endpoint = std::complex<double>(double(w->real()), double(w->imag()));
    out.refined = true;
    return true;
  };

  while (true) {
    if (++steps > opts.max_steps) {
      out.diagnostic += "step budget exhausted";
      break;
    }
    T gn = g0 * std::pow(ratio, T(grid + 1));
    if (gn < Gfloor) gn = Gfloor;
    std::optional<cplx<T>> zn;
    T gtry = gn;
    for (int sub = 0; sub < 12; ++sub) {
      int kk = level_for(gtry);
      T tkk = kk == k ? tk : t_at(kk);
      zn = solver.solve(z, gtry, kk, tkk);
      T frac = std::log(g / gtry) / std::log(T(1) / ratio);
      bool jump = zn && std::abs(last_step) > 0 &&
                  std::abs(*zn - z) > T(4) * std::abs(last_step) * frac + T(1e-12);
      if (zn && !jump) {
        k = kk;
        tk = tkk;
        break;
      }
      zn.reset();
      gtry = std::sqrt(g * gtry);
    }
    if (!zn) {
      out.diagnostic += "Newton continuation failed";
      break;
    }
    last_step = (*zn - z) * (std::log(T(1) / ratio) / std::log(g / gtry));
    z = *zn;
    const bool on_grid = gtry == gn;
    g = gtry;
    push(z, g);
    if (on_grid) ++grid;

    if (gc && g <= Gfloor * (T(1) + T(1e-12))) {
      out.status = RayStatus::crashed;
      out.endpoint = std::complex<double>(double(z.real()), double(z.imag()));
      std::ostringstream os;
      os << "obstruction: -a lies in the immediate basin at internal potential " << double(*gc);
      out.diagnostic += os.str();
      return out;
    }
    if (on_grid && grid % S == 0) {
      T dd = std::abs(z - levels.back());
      levels.push_back(z);
      diffs.push_back(dd);
      out.cauchy = double(dd);
      if (dd < T(opts.landing_tol)) {
        out.status = RayStatus::landed;
        out.endpoint = std::complex<double>(double(z.real()), double(z.imag()));
        try_refine(z);
        return out;
      }
      if (dd < T(1e-5) && try_refine(z)) {
        out.status = RayStatus::landed;
        return out;
      }
    }
    if (g <= T(opts.floor_potential)) {
      if (try_refine(z)) {
        out.status = RayStatus::landed;
        return out;
      }
      out.diagnostic += "floor potential reached before landing";
      break;
    }
  }
  out.status = RayStatus::budget_exhausted;
  out.endpoint = std::complex<double>(double(z.real()), double(z.imag()));
  return out;
}

#define CUBICSLICE_INSTANTIATE(T)                                                                 \
  template std::optional<cplx<T>> component_centre(const CubicMap<T>&, const BasinComponent&,     \
                                                   std::string*);                                  \
  template RayTrace internal_ray_basin(const CubicMap<T>&, const BasinComponent&, const Angle&,   \
                                       const InternalOptions&);                                    \
  template detail::FlowResult<T> detail::basin_flow(const CubicMap<T>&, cplx<T>);                 \
  template std::optional<T> detail::immediate_critical_level(const CubicMap<T>&);

CUBICSLICE_INSTANTIATE(double)
CUBICSLICE_INSTANTIATE(long double)

}  // namespace cubicslice
