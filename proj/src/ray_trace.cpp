#include "cubicslice/ray_trace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cubicslice {

std::string_view to_string(RayStatus s) {
  switch (s) {
    case RayStatus::landed: return "landed";
    case RayStatus::crashed: return "crashed";
    case RayStatus::budget_exhausted: return "budget_exhausted";
  }
  return "?";
}

std::string_view to_string(PortraitStatus s) {
  switch (s) {
    case PortraitStatus::ok: return "ok";
    case PortraitStatus::portrait_undefined: return "portrait_undefined";
    case PortraitStatus::tolerance_ambiguous: return "tolerance_ambiguous";
    case PortraitStatus::unresolved: return "unresolved";
  }
  return "?";
}

std::optional<unsigned> crash_depth(const Angle& theta, const Angle& t_c) {
  const Angle third(1, 3);
  const Angle lo = t_c - third, hi = t_c + third;
  OrbitType ot = orbit_type(theta, 3);
  Angle s = theta;
  for (unsigned n = 0; n < ot.preperiod + ot.period; ++n) {
    if (s == lo || s == hi) return n;
    s = s.times(3);
  }
  return std::nullopt;
}

std::optional<unsigned> crash_depth(const Angle& theta, double t_c, double tol) {
  OrbitType ot = orbit_type(theta, 3);
  Angle s = theta;
  for (unsigned n = 0; n < ot.preperiod + ot.period; ++n) {
    double x = s.to_double();
    for (double off : {1.0 / 3.0, -1.0 / 3.0}) {
      double d = std::remainder(x - t_c - off, 1.0);
      if (std::abs(d) < tol) return n;
    }
    s = s.times(3);
  }
  return std::nullopt;
}

namespace {

template <class T>
T pow3(int k) {
  T p = 1;
  for (int i = 0; i < k; ++i) p *= T(3);
  return p;
}

template <class T>
cplx<T> iterate(const CubicMap<T>& f, cplx<T> z, unsigned n) {
  for (unsigned i = 0; i < n; ++i) z = f(z);
  return z;
}

template <class T>
struct RaySolver {
  const CubicMap<T>& f;
  T R;
  T tol;

  // Newton for log B_far(f^k(z)) = 3^k G + 2 pi i theta_k (mod 2 pi i).
  std::optional<cplx<T>> solve(cplx<T> z, T G, int k, T theta_k) const {
    using J = Jet<cplx<T>>;
    const cplx<T> tau(pow3<T>(k) * G, T(2) * pi_v<T>() * theta_k);
    const T start_scale = std::max(T(1), std::abs(z));
    for (int it = 0; it < 60; ++it) {
      J a(f.a), v(f.v), w(z, cplx<T>(1));
      for (int i = 0; i < k; ++i) w = cubic_eval(a, v, w);
      if (!(std::abs(w.v) >= R)) return std::nullopt;
      J L = log_boettcher_far(a, v, w);
      cplx<T> r = wrap_imag(L.v - tau);
      cplx<T> dz = r / L.d;
      if (!std::isfinite(std::abs(dz)) || std::abs(dz) > T(0.5) * start_scale) return std::nullopt;
      z -= dz;
      if (std::abs(dz) <= tol * std::max(T(1), std::abs(z))) return z;
    }
    return std::nullopt;
  }
};

template <class T>
int level_for(T G, T R) {
  const T need = std::log(R) + T(1);
  int k = 0;
  T g = G;
  while (g < need) {
    g *= T(3);
    ++k;
  }
  return k;
}

}  // namespace

template <class T>
std::optional<cplx<T>> refine_preperiodic(const CubicMap<T>& f, cplx<T> w, unsigned m, unsigned p) {
  using J = Jet<cplx<T>>;
  const T eps = std::numeric_limits<T>::epsilon();
  J a(f.a), v(f.v);
  T last = std::numeric_limits<T>::infinity();
  T best = last;
  cplx<T> best_w = w;
  int slow = 0, since_best = 0;
  for (int it = 0; it < 200; ++it) {
    J x(w, cplx<T>(1));
    for (unsigned i = 0; i < m; ++i) x = cubic_eval(a, v, x);
    J y = x;
    for (unsigned i = 0; i < p; ++i) y = cubic_eval(a, v, y);
    J h = y - x;
    if (h.v == cplx<T>(0)) return w;
    cplx<T> dw = h.v / h.d;
    if (!std::isfinite(std::abs(dw)) || std::abs(dw) > T(0.25)) return std::nullopt;
    w -= dw;
    T step = std::abs(dw);
    if (step <= 64 * eps * std::max(T(1), std::abs(w))) return w;
    // Multiple roots (parabolic points) converge linearly and stall at the
    // square root of the working precision.
    if (step >= T(0.9) * last) ++slow; else slow = 0;
    if (slow > 3 && step < std::sqrt(eps)) return w;
    // Steps that stop shrinking far below sqrt(eps) are evaluation noise.
    if (step < best) {
      best = step;
      best_w = w;
      since_best = 0;
    } else if (++since_best > 6 && best < std::sqrt(eps) * std::max(T(1), std::abs(w))) {
      return best_w;
    }
    last = step;
  }
  return std::nullopt;
}

template <class T>
static RayTrace trace_once(const CubicMap<T>& f, const Angle& theta, const TraceOptions& opts) {
  RayTrace out;
  out.angle = theta;
  const T R = f.escape_radius();
  const T eps = std::numeric_limits<T>::epsilon();
  RaySolver<T> solver{f, R, opts.newton_tol > 0 ? T(opts.newton_tol) : T(256) * eps};
  const int S = std::max(2, opts.steps_per_level);

  // Crash detection.
  std::optional<unsigned> crash;
  T crash_potential = 0;
  if (auto gm = green(f, -f.a)) {
    if (opts.crash_angle) {
      crash = crash_depth(theta, *opts.crash_angle);
    } else {
      auto b = boettcher_external(f, f.cocritical());
      if (b.status == BoettcherStatus::ok) {
        double tc = static_cast<double>(std::arg(b.value) / (T(2) * pi_v<T>()));
        crash = crash_depth(theta, tc);
      } else {
        out.diagnostic = "crash check skipped: cocritical Boettcher value unavailable; ";
      }
    }
    if (crash) crash_potential = *gm / pow3<T>(static_cast<int>(*crash));
  }

  T G0 = opts.start_potential > 0 ? T(opts.start_potential)
                                  : std::max(std::log(T(64)), std::log(T(4) * R));
  const T Gfloor = std::max(T(opts.floor_potential), crash ? crash_potential * T(1.02) : T(0));

  auto theta_at = [&](int k) {
    Angle s = theta;
    for (int i = 0; i < k; ++i) s = s.times(3);
    return static_cast<T>(s.to_long_double());
  };

  int k = level_for(G0, R);
  T th = theta_at(k);
  cplx<T> z = std::exp(cplx<T>(G0, T(2) * pi_v<T>() * static_cast<T>(theta.to_long_double())));
  {
    auto s = solver.solve(z, G0, k, th);
    if (!s) {
      out.diagnostic += "initial Newton failed";
      return out;
    }
    z = *s;
  }
  auto push = [&](cplx<T> p, T G) {
    if (opts.keep_samples)
      out.samples.push_back({std::complex<double>(double(p.real()), double(p.imag())), double(G)});
  };
  push(z, G0);

  std::vector<cplx<T>> levels{z};
  std::vector<T> diffs;
  T G = G0;
  cplx<T> last_step = 0;
  const T ratio = std::pow(T(3), T(-1) / T(S));
  bool done = false;
  int steps = 0;
  long grid = 0;  // index of the last potential reached on the grid G0 3^{-j/S}

  auto try_refine = [&](cplx<T> zl) -> bool {
    if (!opts.refine || diffs.size() < 2) return false;
    T d = diffs.back();
    T r = std::min(T(0.999), std::max(diffs.back() / diffs[diffs.size() - 2],
                                      diffs.size() > 2 ? diffs[diffs.size() - 2] / diffs[diffs.size() - 3] : T(0)));
    T predicted = d * r / (T(1) - r);
    OrbitType ot = orbit_type(theta, 3);
    auto w = refine_preperiodic(f, zl, ot.preperiod, ot.period);
    if (!w) return false;
    if (std::abs(*w - zl) > T(3) * predicted + T(1e3) * eps * std::max(T(1), std::abs(zl))) return false;
    out.endpoint = std::complex<double>(double(w->real()), double(w->imag()));
    out.refined = true;
    return true;
  };

  while (!done) {
    if (++steps > opts.max_steps) {
      out.diagnostic += "step budget exhausted";
      break;
    }
    T Gn = G0 * std::pow(T(3), -T(grid + 1) / T(S));
    if (Gn < Gfloor) Gn = Gfloor;
    // Subdivide when Newton fails or jumps.
    std::optional<cplx<T>> zn;
    T Gtry = Gn;
    for (int sub = 0; sub < 12; ++sub) {
      int kk = level_for(Gtry, R);
      T thk = (kk == k) ? th : theta_at(kk);
      zn = solver.solve(z, Gtry, kk, thk);
      // Fraction of a full step, measured in log-potential.
      T frac = std::log(G / Gtry) / std::log(T(1) / ratio);
      bool jump = zn && std::abs(last_step) > 0 &&
                  std::abs(*zn - z) > T(4) * std::abs(last_step) * frac + T(1e-12);
      if (zn && !jump) {
        k = kk;
        th = thk;
        break;
      }
      zn.reset();
      Gtry = std::sqrt(G * Gtry);
    }
    if (!zn) {
      // Slow landings run out of conditioning before the Cauchy gate.
      if (try_refine(z)) {
        out.status = RayStatus::landed;
        out.diagnostic += "refined after Newton continuation failed";
        return out;
      }
      out.diagnostic += "Newton continuation failed";
      break;
    }
    last_step = (*zn - z) * (std::log(T(1) / ratio) / std::log(G / Gtry));
    z = *zn;
    const bool on_grid = (Gtry == Gn);
    G = Gtry;
    push(z, G);
    if (on_grid) ++grid;

    if (crash && G <= crash_potential * T(1.02) * (T(1) + T(1e-12))) {
      // Polish to the precritical point f^n(c) = -a.
      cplx<T> c = z;
      using J = Jet<cplx<T>>;
      for (int it = 0; it < 100; ++it) {
        J x(c, cplx<T>(1));
        for (unsigned i = 0; i < *crash; ++i) x = cubic_eval(J(f.a), J(f.v), x);
        cplx<T> dc = (x.v + f.a) / x.d;
        if (!std::isfinite(std::abs(dc))) break;
        c -= dc;
        if (std::abs(dc) < T(64) * eps * std::max(T(1), std::abs(c))) break;
      }
      out.status = RayStatus::crashed;
      out.endpoint = std::complex<double>(double(c.real()), double(c.imag()));
      std::ostringstream os;
      os << "hits a preimage of -a at depth " << *crash;
      out.diagnostic += os.str();
      return out;
    }

    // Level bookkeeping: compare points one tripling of the potential apart.
    if (on_grid && grid % S == 0) {
      T d = std::abs(z - levels.back());
      levels.push_back(z);
      diffs.push_back(d);
      out.cauchy = double(d);
      if (d < T(opts.landing_tol)) {
        out.status = RayStatus::landed;
        out.endpoint = std::complex<double>(double(z.real()), double(z.imag()));
        try_refine(z);
        return out;
      }
      if (d < T(1e-5) && try_refine(z)) {
        out.status = RayStatus::landed;
        return out;
      }
    }
    if (G <= T(opts.floor_potential)) {
      if (try_refine(z)) {
        out.status = RayStatus::landed;
        return out;
      }
      out.diagnostic += "floor potential reached before landing";
      done = true;
    }
  }
  out.status = RayStatus::budget_exhausted;
  out.endpoint = std::complex<double>(double(z.real()), double(z.imag()));
  return out;
}

// Residual of the orbit relation f^{m+p}(z) = f^m(z) at a landing point,
// against a bound that allows for the traced error amplified along the orbit.
// Long orbits are not checked.
template <class T>
bool landing_consistent(const CubicMap<T>& f, const RayTrace& r, double landing_tol, double* residual) {
  const OrbitType ot = orbit_type(r.angle, 3);
  const unsigned n = ot.preperiod + ot.period;
  if (r.status != RayStatus::landed || n > 12) return true;
  cplx<T> z(T(r.endpoint.real()), T(r.endpoint.imag())), zm = z, d = T(1);
  for (unsigned k = 0; k < n; ++k) {
    if (k == ot.preperiod) zm = z;
    if (k >= ot.preperiod) d *= f.derivative(z);
    z = f(z);
  }
  *residual = double(std::abs(z - zm));
  const double scale = std::max(1.0, std::abs(r.endpoint));
  return *residual <= 1e-3 * scale + double(std::abs(d)) * 10 * std::max(r.cauchy, landing_tol);
}

// A ray passing close to a precritical point can switch inverse branch
// between continuation steps and then fail to settle, or settle off the
// orbit of its angle. Retrying with finer steps restores continuity.
template <class T>
RayTrace trace_dynamical_ray(const CubicMap<T>& f, const Angle& theta, const TraceOptions& opts) {
  auto checked = [&](RayTrace r) {
    double residual = 0;
    if (!landing_consistent(f, r, opts.landing_tol, &residual)) {
      r.status = RayStatus::budget_exhausted;
      r.diagnostic += "landing point off the orbit of the angle (residual " + std::to_string(residual) + "); ";
    }
    return r;
  };
  RayTrace out = checked(trace_once(f, theta, opts));
  TraceOptions o = opts;
  while (out.status == RayStatus::budget_exhausted && o.steps_per_level < 256) {
    o.steps_per_level = std::max(2, o.steps_per_level) * 4;
    RayTrace retry = checked(trace_once(f, theta, o));
    if (retry.status != RayStatus::budget_exhausted) {
      retry.diagnostic += "landed with " + std::to_string(o.steps_per_level) + " steps per level; ";
      return retry;
    }
  }
  return out;
}

Clustering cluster_points(const std::vector<std::complex<double>>& pts, double tol) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(pts[i] - pts[j]) < tol) parent[find(i)] = find(j);
  Clustering out;
  out.label.assign(n, 0);
  std::vector<std::size_t> id(n, n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = find(i);
    if (id[r] == n) id[r] = next++;
    out.label[i] = id[r];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (out.label[i] != out.label[j] && std::abs(pts[i] - pts[j]) < 10 * tol) {
        out.ambiguous = true;
        std::ostringstream os;
        os << "points " << i << " and " << j << " are " << std::abs(pts[i] - pts[j])
           << " apart, inside the 10x guard band";
        out.detail = os.str();
      }
  return out;
}

// Indices of landed rays whose landing point is not sent by f to the landing
// point of the image ray, allowing for the traced error amplified by f'.
template <class T>
std::vector<std::size_t> inconsistent_images(const CubicMap<T>& f, const std::vector<RayTrace>& rays,
                                             const std::vector<std::size_t>& image, double landing_tol) {
  std::vector<char> flag(rays.size(), 0);
  for (std::size_t i = 0; i < rays.size(); ++i) {
    const RayTrace& a = rays[i];
    const RayTrace& b = rays[image[i]];
    if (a.status != RayStatus::landed || b.status != RayStatus::landed) continue;
    cplx<T> z(T(a.endpoint.real()), T(a.endpoint.imag()));
    cplx<T> w = f(z);
    const double residual = std::abs(std::complex<double>(double(w.real()), double(w.imag())) - b.endpoint);
    const double bound = 1e-3 * std::max(1.0, std::abs(b.endpoint)) +
                         10 * (double(std::abs(f.derivative(z))) * std::max(a.cauchy, landing_tol) +
                               std::max(b.cauchy, landing_tol));
    if (residual > bound) flag[i] = flag[image[i]] = 1;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rays.size(); ++i)
    if (flag[i]) out.push_back(i);
  return out;
}

template <class T>
OrbitPortraitResult orbit_portrait(const CubicMap<T>& f, unsigned q, double tol,
                                   const TraceOptions& opts, unsigned threads) {
  OrbitPortraitResult out;
  out.tolerance_used = tol;
  AngleSet ground = periodic_angles(q, 3);
  std::vector<RayTrace> rays(ground.size());
  TraceOptions o = opts;
  o.keep_samples = false;
  parallel_for(ground.size(), [&](std::size_t i) { rays[i] = trace_dynamical_ray(f, ground[i], o); },
               threads);
  // Both rays of an inconsistent pair are retraced with finer steps; one of
  // them may have landed on the wrong cycle.
  std::vector<std::size_t> image(ground.size());
  for (std::size_t i = 0; i < ground.size(); ++i) image[i] = *ground.index_of(ground[i].times(3));
  std::vector<std::size_t> bad;
  for (int round = 0;; ++round) {
    bad = inconsistent_images(f, rays, image, o.landing_tol);
    if (bad.empty() || round == 3) break;
    TraceOptions fine = o;
    fine.steps_per_level = std::max(2, o.steps_per_level) * (4 << (2 * round));
    parallel_for(bad.size(), [&](std::size_t k) { rays[bad[k]] = trace_dynamical_ray(f, ground[bad[k]], fine); },
                 threads);
  }
  out.landing.resize(ground.size());
  if (!bad.empty()) {
    out.status = PortraitStatus::unresolved;
    out.detail = "landing points not mapped onto each other by f for rays";
    for (auto i : bad) out.detail += " " + ground[i].str();
  }
  for (std::size_t i = 0; i < rays.size(); ++i) {
    out.landing[i] = rays[i].endpoint;
    if (rays[i].status == RayStatus::crashed) {
      out.status = PortraitStatus::portrait_undefined;
      out.detail = "ray " + ground[i].str() + " crashes: " + rays[i].diagnostic;
    } else if (rays[i].status != RayStatus::landed && out.status == PortraitStatus::ok) {
      out.status = PortraitStatus::unresolved;
      out.detail = "ray " + ground[i].str() + " did not land: " + rays[i].diagnostic;
    }
  }
  if (out.status != PortraitStatus::ok) {
    out.partition = AnglePartition::discrete(ground);
    return out;
  }
  Clustering cl = cluster_points(out.landing, tol);
  if (cl.ambiguous) {
    out.status = PortraitStatus::tolerance_ambiguous;
    out.detail = cl.detail;
  }
  std::size_t nclasses = 0;
  for (auto l : cl.label) nclasses = std::max(nclasses, l + 1);
  std::vector<std::vector<Angle>> classes(nclasses);
  for (std::size_t i = 0; i < ground.size(); ++i) classes[cl.label[i]].push_back(ground[i]);
  out.partition = AnglePartition(ground, classes);
  for (const auto& c : out.partition.classes())
    out.class_points.push_back(out.landing[*ground.index_of(c.front())]);
  return out;
}

template <class T>
AlphaResult find_alpha(const CubicMap<T>& f, const Angle& t_param, double tol, const TraceOptions& opts) {
  AlphaResult out;
  if (coperiod_status(t_param, 2) != CoperiodStatus::no) {
    out.detail = "parameter angle " + t_param.str() + " has coperiod 2";
    return out;
  }
  for (const Leaf& l : alpha_pairs(t_param)) {
    out.angles.push_back(l.a());
    out.angles.push_back(l.b());
  }
  std::sort(out.angles.begin(), out.angles.end());
  TraceOptions o = opts;
  o.keep_samples = false;
  if (!o.crash_angle) o.crash_angle = t_param;
  std::vector<std::complex<double>> pts;
  for (const Angle& a : out.angles) {
    RayTrace r = trace_dynamical_ray(f, a, o);
    if (r.status != RayStatus::landed) {
      out.detail = "ray " + a.str() + ": " + std::string(to_string(r.status)) + " " + r.diagnostic;
      return out;
    }
    pts.push_back(r.endpoint);
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      out.spread = std::max(out.spread, std::abs(pts[i] - pts[j]));
  std::complex<double> mean = 0;
  for (auto p : pts) mean += p;
  mean /= double(pts.size());
  // Polish as a fixed point.
  cplx<T> w(T(mean.real()), T(mean.imag()));
  if (auto r = refine_preperiodic(f, w, 0, 1)) w = *r;
  out.alpha = std::complex<double>(double(w.real()), double(w.imag()));
  out.fixed_residual = double(std::abs(f(w) - w));
  cplx<T> lam = f.derivative(w);
  out.multiplier = std::complex<double>(double(lam.real()), double(lam.imag()));
  if (out.spread >= tol) {
    out.detail = "alpha rays do not co-land within tolerance";
    return out;
  }
  if (std::abs(out.alpha - mean) > tol) {
    out.detail = "fixed-point polish moved away from the co-landing point";
    return out;
  }
  out.found = true;
  return out;
}

#define CUBICSLICE_INSTANTIATE(T)                                                                  \
  template RayTrace trace_dynamical_ray(const CubicMap<T>&, const Angle&, const TraceOptions&);    \
  template std::optional<cplx<T>> refine_preperiodic(const CubicMap<T>&, cplx<T>, unsigned,        \
                                                     unsigned);                                    \
  template OrbitPortraitResult orbit_portrait(const CubicMap<T>&, unsigned, double,                \
                                              const TraceOptions&, unsigned);                      \
  template AlphaResult find_alpha(const CubicMap<T>&, const Angle&, double, const TraceOptions&);

CUBICSLICE_INSTANTIATE(double)
CUBICSLICE_INSTANTIATE(long double)

}  // namespace cubicslice
