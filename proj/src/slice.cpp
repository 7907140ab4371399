#include "cubicslice/slice.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace cubicslice {

std::string_view to_string(Slice s) { return s == Slice::S1 ? "S1" : "S2"; }

std::string_view to_string(Sheet s) {
  switch (s) {
    case Sheet::none: return "none";
    case Sheet::plus: return "plus";
    case Sheet::minus: return "minus";
  }
  return "?";
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::E1: return "E1";
    case Region::E2B: return "E2B";
    case Region::E2D: return "E2D";
  }
  return "?";
}

Region parse_region(std::string_view s) {
  if (s == "E1") return Region::E1;
  if (s == "E2B") return Region::E2B;
  if (s == "E2D") return Region::E2D;
  throw std::invalid_argument("region must be E1, E2B or E2D, got '" + std::string(s) + "'");
}

std::string_view to_string(EscapeClass c) {
  switch (c) {
    case EscapeClass::E2B: return "E2B";
    case EscapeClass::E2D: return "E2D";
    case EscapeClass::not_escape: return "not_escape";
    case EscapeClass::unresolved: return "unresolved";
  }
  return "?";
}

namespace {

template <class T>
cplx<T> s2_root_t(cplx<T> a) {
  if (a == cplx<T>(0)) return cplx<T>(0, 2);
  return T(3) * a * std::sqrt(cplx<T>(1) - T(4) / (T(9) * a * a));
}

template <class T>
cplx<T> s2_nearest(cplx<T> a, cplx<T> v_prev) {
  cplx<T> s = s2_root_t(a);
  cplx<T> vp = (-a + s) / T(2), vm = (-a - s) / T(2);
  return std::abs(vp - v_prev) <= std::abs(vm - v_prev) ? vp : vm;
}

Sheet sheet_label(lcplx a, lcplx v) {
  lcplx s = s2_root_t(a);
  lcplx vp = (-a + s) / 2.0L, vm = (-a - s) / 2.0L;
  return std::abs(v - vp) <= std::abs(v - vm) ? Sheet::plus : Sheet::minus;
}

template <class T>
T pow3(int k) {
  T p = 1;
  for (int i = 0; i < k; ++i) p *= T(3);
  return p;
}

template <class T>
lcplx to_l(cplx<T> z) {
  return {static_cast<long double>(z.real()), static_cast<long double>(z.imag())};
}

template <class T>
cplx<T> from_l(lcplx z) {
  return {T(z.real()), T(z.imag())};
}

// A point on the slice carried along a continuation.
template <class T>
struct State {
  cplx<T> a, v;
};

template <class T>
struct ParamSolver {
  Region region;
  T tol;

  cplx<T> v_of(cplx<T> a, cplx<T> v_prev) const {
    return region == Region::E1 ? a : s2_nearest(a, v_prev);
  }
  cplx<T> dv_da(cplx<T> a, cplx<T> v) const {
    return region == Region::E1 ? cplx<T>(1) : (T(4) * a - v) / (T(2) * v + a);
  }
  T radius(const State<T>& s) const { return CubicMap<T>{s.a, s.v}.escape_radius(); }

  int level_for(T G, const State<T>& s) const {
    const T need = std::log(radius(s)) + T(1);
    int k = 1;
    T g = T(3) * G;
    while (g < need) {
      g *= T(3);
      ++k;
    }
    return k;
  }

  // Newton on log B_far(f^k(2a)) = 3^k (G + 2 pi i theta) mod 2 pi i.
  std::optional<State<T>> solve(State<T> s, T G, int k, T theta_k) const {
    using J = Jet<cplx<T>>;
    const cplx<T> tau(pow3<T>(k) * G, T(2) * pi_v<T>() * theta_k);
    const T scale0 = std::max(T(1), std::abs(s.a));
    for (int it = 0; it < 60; ++it) {
      J a(s.a, cplx<T>(1)), v(s.v, dv_da(s.a, s.v));
      J w = J(T(2)) * a;
      for (int i = 0; i < k; ++i) w = cubic_eval(a, v, w);
      if (!(std::abs(w.v) >= radius(s))) return std::nullopt;
      J L = log_boettcher_far(a, v, w);
      cplx<T> r = wrap_imag(L.v - tau);
      cplx<T> da = r / L.d;
      if (!std::isfinite(std::abs(da)) || std::abs(da) > T(0.5) * scale0) return std::nullopt;
      s.a -= da;
      s.v = v_of(s.a, s.v);
      if (std::abs(da) <= tol * std::max(T(1), std::abs(s.a))) return s;
    }
    return std::nullopt;
  }
};

template <class T>
SlicePoint make_point(Region region, const State<T>& s) {
  if (region == Region::E1) return s1(to_l(s.a));
  SlicePoint p;
  p.slice = Slice::S2;
  p.a = to_l(s.a);
  p.v = to_l(s.v);
  p.sheet = sheet_label(p.a, p.v);
  p.branch_point = std::abs(p.a * p.a - 4.0L / 9.0L) < 1e-12L;
  p.degenerate = std::abs(p.v - p.a) < 1e-12L;
  return p;
}

// Walks down the potential grid G_start 3^{-j/S} to G_end.
template <class T>
struct Continuation {
  Region region;
  std::function<T(int)> theta_at;  // 3^k theta mod 1
  T theta0;
  ParamSolver<T> solver;
  int S = 16;
  int max_steps = 20000;

  std::string error;
  State<T> s{};
  T G = 0;
  int k = 1;
  T th = 0;
  T G_start = 0;
  long grid = 0;
  cplx<T> last_step = 0;

  bool start(T G0) {
    G_start = G0;
    G = G0;
    cplx<T> phi_target = std::exp(cplx<T>(G0, T(2) * pi_v<T>() * theta0));
    cplx<T> a = phi_target / std::cbrt(T(4));
    cplx<T> v = a;
    if (region == Region::E2B) v = (-a + s2_root_t(a)) / T(2);
    if (region == Region::E2D) v = (-a - s2_root_t(a)) / T(2);
    s = {a, v};
    k = solver.level_for(G0, s);
    th = theta_at(k);
    auto r = solver.solve(s, G0, k, th);
    if (!r) {
      error = "Newton failed at the asymptotic seed";
      return false;
    }
    s = *r;
    return true;
  }

  // One step toward the next grid potential (not below G_end). Returns false
  // on failure.
  bool step(T G_end, bool* reached_grid) {
    T Gn = G_start * std::pow(T(3), -T(grid + 1) / T(S));
    bool aim_grid = true;
    if (Gn <= G_end) {
      Gn = G_end;
      aim_grid = false;
    }
    T Gtry = Gn;
    const T ratio_log = std::log(T(3)) / T(S);
    for (int sub = 0; sub < 14; ++sub) {
      State<T> guess = s;
      T frac = std::log(G / Gtry) / ratio_log;
      if (std::abs(last_step) > 0) {
        guess.a = s.a + last_step * frac;
        guess.v = solver.v_of(guess.a, s.v);
      }
      int kk = solver.level_for(Gtry, s);
      T thk = kk == k ? th : theta_at(kk);
      auto r = solver.solve(guess, Gtry, kk, thk);
      bool jump = r && std::abs(last_step) > 0 &&
                  std::abs(r->a - s.a) > T(4) * std::abs(last_step) * frac + T(1e-12);
      if (r && !jump) {
        last_step = (r->a - s.a) / frac;
        s = *r;
        G = Gtry;
        k = kk;
        th = thk;
        bool on_grid = aim_grid && Gtry == Gn;
        if (on_grid) ++grid;
        *reached_grid = on_grid;
        return true;
      }
      Gtry = std::sqrt(G * Gtry);
    }
    error = "parameter continuation failed";
    return false;
  }
};

template <class T>
std::function<T(int)> exact_theta(const Angle& t) {
  return [t](int k) {
    Angle s = t;
    for (int i = 0; i < k; ++i) s = s.times(3);
    return static_cast<T>(s.to_long_double());
  };
}

template <class T>
std::function<T(int)> real_theta(long double t) {
  return [t](int k) {
    long double x = t;
    for (int i = 0; i < k; ++i) x = std::fmod(3.0L * x, 1.0L);
    if (x < 0) x += 1.0L;
    return static_cast<T>(x);
  };
}

template <class T>
std::optional<SlicePoint> run_to(Region region, double rho, std::function<T(int)> theta_at, T theta0,
                                 std::string* error) {
  if (!(rho > 1)) {
    if (error) *error = "rho must exceed 1";
    return std::nullopt;
  }
  const T eps = std::numeric_limits<T>::epsilon();
  Continuation<T> c{region, theta_at, theta0, ParamSolver<T>{region, T(256) * eps}};
  const T G_end = std::log(T(rho));
  const T G0 = std::max(std::log(T(64)), G_end);
  if (!c.start(G0)) {
    if (error) *error = c.error;
    return std::nullopt;
  }
  for (int i = 0; c.G > G_end; ++i) {
    bool g;
    if (i > c.max_steps || !c.step(G_end, &g)) {
      if (error) *error = c.error.empty() ? "step budget exhausted" : c.error;
      return std::nullopt;
    }
  }
  return make_point(region, c.s);
}

// --- landing refinement -------------------------------------------------

template <class T>
std::optional<State<T>> refine_misiurewicz(const ParamSolver<T>& sv, State<T> s, unsigned m, unsigned p) {
  using J = Jet<cplx<T>>;
  const T eps = std::numeric_limits<T>::epsilon();
  T last = std::numeric_limits<T>::infinity();
  int slow = 0;
  for (int it = 0; it < 200; ++it) {
    J a(s.a, cplx<T>(1)), v(s.v, sv.dv_da(s.a, s.v));
    J x = J(T(2)) * a;
    for (unsigned i = 0; i < m; ++i) x = cubic_eval(a, v, x);
    J y = x;
    for (unsigned i = 0; i < p; ++i) y = cubic_eval(a, v, y);
    J h = y - x;
    if (h.v == cplx<T>(0)) return s;
    cplx<T> da = h.v / h.d;
    if (!std::isfinite(std::abs(da)) || std::abs(da) > T(0.25)) return std::nullopt;
    s.a -= da;
    s.v = sv.v_of(s.a, s.v);
    T step = std::abs(da);
    if (step <= 64 * eps * std::max(T(1), std::abs(s.a))) return s;
    if (step >= T(0.9) * last) ++slow; else slow = 0;
    if (slow > 3 && step < std::sqrt(eps)) return s;
    last = step;
  }
  return std::nullopt;
}

template <class T>
struct Orbit2 {
  cplx<T> z, d1, d2;  // f^p(z), (f^p)', (f^p)''
};

template <class T>
Orbit2<T> iterate_with_derivs(const CubicMap<T>& f, cplx<T> z, unsigned p) {
  cplx<T> d1 = 1, d2 = 0;
  for (unsigned i = 0; i < p; ++i) {
    cplx<T> fp = f.derivative(z), fpp = T(6) * z;
    d2 = fpp * d1 * d1 + fp * d2;
    d1 = fp * d1;
    z = f(z);
  }
  return {z, d1, d2};
}

template <class T>
std::optional<std::pair<State<T>, cplx<T>>> refine_parabolic(const ParamSolver<T>& sv, State<T> s0,
                                                             unsigned q) {
  const T eps = std::numeric_limits<T>::epsilon();
  const T h = std::sqrt(std::sqrt(eps)) * std::max(T(1), std::abs(s0.a)) * T(0.1);
  std::optional<std::pair<State<T>, cplx<T>>> best;
  T best_dist = std::numeric_limits<T>::infinity();
  for (unsigned p = 1; p <= q; ++p) {
    if (q % p) continue;
    unsigned r = q / p;
    std::vector<cplx<T>> lambdas;
    for (unsigned j = 0; j < r; ++j) {
      if (std::gcd(j, r) != 1 && !(r == 1 && j == 0)) continue;
      lambdas.push_back(std::polar(T(1), T(2) * pi_v<T>() * T(j) / T(r)));
    }
    CubicMap<T> f0{s0.a, s0.v};
    for (cplx<T> z0 : periodic_points(f0, p)) {
      for (cplx<T> lam : lambdas) {
        State<T> s = s0;
        cplx<T> z = z0;
        auto F = [&](const State<T>& st, cplx<T> zz) {
          auto o = iterate_with_derivs(CubicMap<T>{st.a, st.v}, zz, p);
          return std::array<cplx<T>, 2>{o.z - zz, o.d1 - lam};
        };
        bool ok = false;
        for (int it = 0; it < 80; ++it) {
          auto o = iterate_with_derivs(CubicMap<T>{s.a, s.v}, z, p);
          cplx<T> F1 = o.z - z, F2 = o.d1 - lam;
          State<T> sp{s.a + h, sv.v_of(s.a + h, s.v)}, sm{s.a - h, sv.v_of(s.a - h, s.v)};
          auto Fp = F(sp, z), Fm = F(sm, z);
          cplx<T> A11 = o.d1 - cplx<T>(1), A12 = (Fp[0] - Fm[0]) / (T(2) * h);
          cplx<T> A21 = o.d2, A22 = (Fp[1] - Fm[1]) / (T(2) * h);
          cplx<T> det = A11 * A22 - A12 * A21;
          if (det == cplx<T>(0)) break;
          cplx<T> dz = (F1 * A22 - A12 * F2) / det;
          cplx<T> da = (A11 * F2 - A21 * F1) / det;
          if (!std::isfinite(std::abs(dz)) || std::abs(da) > T(0.25) || std::abs(dz) > T(1)) break;
          z -= dz;
          s.a -= da;
          s.v = sv.v_of(s.a, s.v);
          if (std::abs(da) + std::abs(dz) < T(1e3) * eps * std::max(T(1), std::abs(s.a) + std::abs(z))) {
            ok = true;
            break;
          }
        }
        if (!ok) continue;
        T dist = std::abs(s.a - s0.a);
        if (dist < best_dist) {
          best_dist = dist;
          best = std::make_pair(s, z);
        }
      }
    }
  }
  return best;
}

}  // namespace

SlicePoint s1(lcplx a) {
  SlicePoint p;
  p.slice = Slice::S1;
  p.a = a;
  p.v = a;
  return p;
}

lcplx s2_root(lcplx a) { return s2_root_t(a); }

SlicePoint s2_point(lcplx a, Sheet sheet) {
  SlicePoint p;
  p.slice = Slice::S2;
  p.a = a;
  lcplx s = s2_root(a);
  p.v = (-a + (sheet == Sheet::minus ? -s : s)) / 2.0L;
  p.sheet = sheet == Sheet::minus ? Sheet::minus : Sheet::plus;
  p.branch_point = std::abs(s) < 1e-12L;
  p.degenerate = std::abs(p.v - p.a) < 1e-12L;
  return p;
}

std::vector<SlicePoint> s2_points(lcplx a) {
  SlicePoint plus = s2_point(a, Sheet::plus);
  if (plus.branch_point) return {plus};
  return {plus, s2_point(a, Sheet::minus)};
}

SlicePoint s2_continue(lcplx a, lcplx v_prev) {
  SlicePoint p = s2_point(a, Sheet::plus);
  p.v = s2_nearest(a, v_prev);
  p.sheet = sheet_label(a, p.v);
  p.degenerate = std::abs(p.v - p.a) < 1e-12L;
  return p;
}

template <class T>
PhiResult phi(Region region, const SlicePoint& p) {
  PhiResult out;
  if (p.slice != slice_of(region)) {
    out.error = "not_in_region: wrong slice";
    return out;
  }
  CubicMap<T> f = p.map<T>();
  if (!green(f, -f.a)) {
    out.error = "not_in_region: free critical orbit does not escape";
    return out;
  }
  if (green(f, f.a, 500)) {
    out.error = "not_in_region: marked critical orbit escapes";
    return out;
  }
  auto b = boettcher_external(f, f.cocritical());
  if (b.status != BoettcherStatus::ok) {
    out.error = "boettcher_" + std::string(to_string(b.status));
    return out;
  }
  out.ok = true;
  out.value = std::complex<double>(double(b.value.real()), double(b.value.imag()));
  return out;
}

template <class T>
std::optional<SlicePoint> param_from_coords(Region region, double rho, const Angle& t, std::string* error) {
  return run_to<T>(region, rho, exact_theta<T>(t), T(t.to_long_double()), error);
}

template <class T>
std::optional<SlicePoint> param_from_coords(Region region, double rho, long double t, std::string* error) {
  t = std::fmod(t, 1.0L);
  if (t < 0) t += 1.0L;
  return run_to<T>(region, rho, real_theta<T>(t), T(t), error);
}

template <class T>
std::optional<SlicePoint> psi(const SlicePoint& f, std::string* error) {
  PhiResult ph = phi<T>(Region::E1, f);
  if (!ph.ok) {
    if (error) *error = ph.error;
    return std::nullopt;
  }
  long double t = std::arg(std::complex<long double>(ph.value)) / (2.0L * pi_v<long double>());
  return param_from_coords<T>(Region::E2B, std::abs(ph.value), t, error);
}

template <class T>
ParamRayTrace trace_parameter_ray(Region region, const Angle& t, double rho_floor, const ParamTraceOptions& opts) {
  ParamRayTrace out;
  out.region = region;
  out.angle = t;
  const T eps = std::numeric_limits<T>::epsilon();
  Continuation<T> c{region, exact_theta<T>(t), T(t.to_long_double()), ParamSolver<T>{region, T(256) * eps}};
  c.S = std::max(2, opts.steps_per_level);
  c.max_steps = opts.max_steps;
  const bool land = rho_floor <= 1.0;
  const T G_end = land ? T(opts.floor_potential) : std::log(T(rho_floor));
  T G0 = opts.start_potential > 0 ? T(opts.start_potential) : std::log(T(64));
  G0 = std::max(G0, G_end);
  if (!c.start(G0)) {
    out.diagnostic = c.error;
    return out;
  }
  auto push = [&] {
    if (opts.keep_samples) out.samples.push_back({make_point(region, c.s), double(c.G)});
  };
  push();

  std::vector<cplx<T>> levels{c.s.a};
  std::vector<T> diffs;
  auto finish_landing = [&](bool cauchy_met) -> bool {
    out.endpoint = make_point(region, c.s);
    if (!opts.refine) {
      out.landing_kind = "unrefined";
      return cauchy_met;
    }
    T d = diffs.empty() ? T(1) : diffs.back();
    T r = 0;
    if (diffs.size() >= 2) r = diffs.back() / diffs[diffs.size() - 2];
    if (diffs.size() >= 3) r = std::max(r, diffs[diffs.size() - 2] / diffs[diffs.size() - 3]);
    r = std::min(r, T(0.999));
    T predicted = d * r / (T(1) - r);
    T slack = T(1e3) * eps * std::max(T(1), std::abs(c.s.a));
    if (auto q = coperiod(t)) {
      if (auto res = refine_parabolic(c.solver, c.s, *q)) {
        if (std::abs(res->first.a - c.s.a) <= T(3) * predicted + slack) {
          out.endpoint = make_point(region, res->first);
          out.parabolic_point = {double(res->second.real()), double(res->second.imag())};
          out.refined = true;
          out.landing_kind = "parabolic";
          return true;
        }
      }
    } else {
      OrbitType ot = orbit_type(t, 3);
      if (auto res = refine_misiurewicz(c.solver, c.s, ot.preperiod, ot.period)) {
        if (std::abs(res->a - c.s.a) <= T(3) * predicted + slack) {
          out.endpoint = make_point(region, *res);
          out.refined = true;
          out.landing_kind = "misiurewicz";
          return true;
        }
      }
    }
    out.landing_kind = "unrefined";
    return cauchy_met;
  };

  for (int i = 0; c.G > G_end; ++i) {
    bool on_grid = false;
    if (i > c.max_steps || !c.step(G_end, &on_grid)) {
      out.diagnostic = c.error.empty() ? "step budget exhausted" : c.error;
      out.endpoint = make_point(region, c.s);
      return out;
    }
    push();
    if (land && on_grid && c.grid % c.S == 0) {
      T d = std::abs(c.s.a - levels.back());
      levels.push_back(c.s.a);
      diffs.push_back(d);
      out.cauchy = double(d);
      if (d < T(opts.landing_tol)) {
        finish_landing(true);
        out.status = RayStatus::landed;
        return out;
      }
      if (d < T(1e-5) && opts.refine && diffs.size() >= 3 && finish_landing(false)) {
        out.status = RayStatus::landed;
        return out;
      }
    }
  }
  out.endpoint = make_point(region, c.s);
  if (!land) {
    out.status = RayStatus::landed;  // reached the requested potential
    out.landing_kind = "potential_floor";
    return out;
  }
  if (finish_landing(false)) {
    out.status = RayStatus::landed;
    return out;
  }
  out.diagnostic = "floor potential reached before landing";
  out.status = RayStatus::budget_exhausted;
  return out;
}

WRegion w_region(const Angle& t) {
  WRegion w;
  w.label = static_cast<int>(w_interval(t));
  if (w.label) {
    static const int lo[] = {1, 10, 13, 22};
    w.lo = Angle(lo[w.label - 1], 24);
    w.hi = Angle(lo[w.label - 1] + 1, 24);
  }
  return w;
}

#define CUBICSLICE_INSTANTIATE(T)                                                                     \
  template PhiResult phi<T>(Region, const SlicePoint&);                                               \
  template std::optional<SlicePoint> param_from_coords<T>(Region, double, const Angle&, std::string*); \
  template std::optional<SlicePoint> param_from_coords<T>(Region, double, long double, std::string*);  \
  template std::optional<SlicePoint> psi<T>(const SlicePoint&, std::string*);                          \
  template ParamRayTrace trace_parameter_ray<T>(Region, const Angle&, double, const ParamTraceOptions&);

CUBICSLICE_INSTANTIATE(double)
CUBICSLICE_INSTANTIATE(long double)

}  // namespace cubicslice
