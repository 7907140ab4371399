#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cubicslice/internal.hpp"
#include "internal_detail.hpp"

namespace cubicslice {

std::string_view to_string(Quadrant q) {
  switch (q) {
    case Quadrant::none: return "n/a";
    case Quadrant::I: return "I";
    case Quadrant::II: return "II";
    case Quadrant::III: return "III";
    case Quadrant::IV: return "IV";
  }
  return "?";
}

Quadrant parse_quadrant(std::string_view s) {
  if (s == "I") return Quadrant::I;
  if (s == "II") return Quadrant::II;
  if (s == "III") return Quadrant::III;
  if (s == "IV") return Quadrant::IV;
  if (s == "n/a" || s == "none" || s.empty()) return Quadrant::none;
  throw std::invalid_argument("unknown quadrant '" + std::string(s) + "'");
}

Quadrant quadrant_of(std::complex<double> a) {
  double t = std::arg(a) / M_PI;  // in (-1, 1]
  if (t > -1.0 / 6 && t <= 1.0 / 6) return Quadrant::I;
  if (t > 1.0 / 6 && t <= 5.0 / 6) return Quadrant::II;
  if (t > 5.0 / 6 || t <= -5.0 / 6) return Quadrant::III;
  return Quadrant::IV;
}

namespace {

using C = std::complex<double>;
using P = std::vector<C>;

P padd(P x, const P& y) {
  if (x.size() < y.size()) x.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x[i] += y[i];
  return x;
}

P pscale(P x, C s) {
  for (auto& c : x) c *= s;
  return x;
}

// f_a^j(-a) as polynomials in a, for j = 0..n, on S1 (v = a).
std::vector<P> critical_orbit_polys(unsigned n) {
  const P A{0, 1}, A2{0, 0, 1}, A3{0, 0, 0, 1};
  std::vector<P> out{P{0, -1}};
  for (unsigned j = 0; j < n; ++j) {
    const P& z = out.back();
    P z3 = poly_mul(poly_mul(z, z), z);
    P next = padd(padd(z3, pscale(poly_mul(A2, z), -3.0)), padd(pscale(A3, 2.0), A));
    out.push_back(next);
  }
  return out;
}

}  // namespace

std::vector<std::complex<double>> typeC_centres(unsigned n) {
  if (n == 0) return {};
  auto orbit = critical_orbit_polys(n);
  P eq = padd(orbit[n], P{0, -1});
  while (eq.size() > 1 && std::abs(eq.back()) == 0) eq.pop_back();
  auto roots = polynomial_roots(eq, 2000);
  std::vector<C> out;
  for (C a : roots) {
    if (std::abs(a) < 1e-6) continue;
    bool lower = false;
    for (unsigned j = 1; j < n; ++j) lower = lower || std::abs(poly_eval(orbit[j], a) - a) < 1e-6;
    if (lower) continue;
    bool dup = false;
    for (C b : out) dup = dup || std::abs(a - b) < 1e-5;
    if (!dup) out.push_back(a);
  }
  std::sort(out.begin(), out.end(), [](C x, C y) {
    auto key = [](C z) {
      double t = std::arg(z);
      return t < 0 ? t + 2 * M_PI : t;
    };
    return key(x) < key(y);
  });
  return out;
}

ParamComponent typeC_component(unsigned n, unsigned index) {
  auto cs = typeC_centres(n);
  if (index >= cs.size()) throw std::out_of_range("typeC_component: index out of range");
  ParamComponent pc;
  pc.kind = ParamComponent::typeC;
  pc.depth = n;
  pc.centre = cs[index];
  return pc;
}

namespace {

using detail::NearMap;

template <class T>
cplx<T> to_t(std::complex<double> z) {
  return {T(z.real()), T(z.imag())};
}

template <class T>
SlicePoint point_of(cplx<T> a) {
  return s1(lcplx(static_cast<long double>(a.real()), static_cast<long double>(a.imag())));
}

// The free critical orbit as jets in a, with v = a.
template <class T>
Jet<cplx<T>> crit_iterate(cplx<T> a, unsigned n) {
  using J = Jet<cplx<T>>;
  J aj(a, cplx<T>(1));
  J w = -aj;
  for (unsigned i = 0; i < n; ++i) w = cubic_eval(aj, aj, w);
  return w;
}

template <class T>
struct IParamSolver {
  unsigned base;  // 1 for the principal component, n for type C
  T tol;

  std::optional<int> level(cplx<T> a, T g) const {
    CubicMap<T> f{a, a};
    NearMap<T> nm(f);
    cplx<T> w = -a;
    for (unsigned i = 0; i < base; ++i) w = f(w);
    // f^{base+k}(-a) has |phi| = e^{-2^k g}; it must sit well inside the near disc.
    const T need = std::log(T(2) / nm.rho);
    int k = 0;
    while (g * std::pow(T(2), T(k)) < need && k < 200) ++k;
    return k;
  }

  // Newton for log phi_a(f^{base+k}(-a)) = -2^k g + 2 pi i t_k.
  std::optional<cplx<T>> solve(cplx<T> a, T g, int k, T t_k) const {
    using J = Jet<cplx<T>>;
    const cplx<T> tau(-std::pow(T(2), T(k)) * g, T(2) * pi_v<T>() * t_k);
    const T scale0 = std::max(std::abs(a), T(1e-3));
    for (int it = 0; it < 60; ++it) {
      J w = crit_iterate(a, base + static_cast<unsigned>(k));
      NearMap<T> nm(CubicMap<T>{a, a});
      if (!nm.valid(w.v)) return std::nullopt;
      J L = log_phi_near(J(a, cplx<T>(1)), w);
      cplx<T> r = wrap_imag(L.v - tau);
      cplx<T> da = r / L.d;
      if (!std::isfinite(std::abs(da)) || std::abs(da) > T(0.5) * scale0) return std::nullopt;
      a -= da;
      if (std::abs(da) <= tol * std::max(T(1), std::abs(a))) return a;
    }
    return std::nullopt;
  }
};

template <class T>
std::optional<cplx<T>> refine_misiurewicz_s1(cplx<T> a, unsigned m, unsigned p) {
  const T eps = std::numeric_limits<T>::epsilon();
  T last = std::numeric_limits<T>::infinity();
  int slow = 0;
  for (int it = 0; it < 200; ++it) {
    auto x = crit_iterate(a, m);
    auto y = x;
    using J = Jet<cplx<T>>;
    J aj(a, cplx<T>(1));
    for (unsigned i = 0; i < p; ++i) y = cubic_eval(aj, aj, y);
    J h = y - x;
    if (h.v == cplx<T>(0)) return a;
    cplx<T> da = h.v / h.d;
    if (!std::isfinite(std::abs(da)) || std::abs(da) > T(0.1)) return std::nullopt;
    a -= da;
    T step = std::abs(da);
    if (step <= 64 * eps * std::max(T(1), std::abs(a))) return a;
    if (step >= T(0.9) * last) ++slow; else slow = 0;
    if (slow > 3 && step < std::sqrt(eps)) return a;
    last = step;
  }
  return std::nullopt;
}

// Parabolic parameters in S1: f^p(z) = z, (f^p)'(z) = lambda for a primitive
// (q/p)-th root of unity lambda; the solution nearest to a0.
template <class T>
std::optional<std::pair<cplx<T>, cplx<T>>> refine_parabolic_s1(cplx<T> a0, unsigned q) {
  using J = Jet<cplx<T>>;
  const T eps = std::numeric_limits<T>::epsilon();
  std::optional<std::pair<cplx<T>, cplx<T>>> best;
  T best_dist = std::numeric_limits<T>::infinity();
  for (unsigned p = 1; p <= q; ++p) {
    if (q % p) continue;
    unsigned r = q / p;
    std::vector<cplx<T>> lambdas;
    for (unsigned j = 0; j < r; ++j)
      if (std::gcd(j, r) == 1 || r == 1) lambdas.push_back(std::polar(T(1), T(2) * pi_v<T>() * T(j) / T(r)));
    for (cplx<T> z0 : periodic_points(CubicMap<T>{a0, a0}, p)) {
      for (cplx<T> lam : lambdas) {
        cplx<T> a = a0, z = z0;
        bool ok = false;
        for (int it = 0; it < 80; ++it) {
          // Derivatives in z by the chain rule, in a by jets.
          cplx<T> x = z, d1 = 1, d2 = 0;
          J xa(z), da1(cplx<T>(1)), aj(a, cplx<T>(1));
          for (unsigned i = 0; i < p; ++i) {
            cplx<T> fp = T(3) * (x * x - a * a), fpp = T(6) * x;
            d2 = fpp * d1 * d1 + fp * d2;
            d1 = fp * d1;
            x = cubic_eval(a, a, x);
            da1 = da1 * (J(T(3)) * (xa * xa - aj * aj));
            xa = cubic_eval(aj, aj, xa);
          }
          cplx<T> F1 = x - z, F2 = d1 - lam;
          cplx<T> A11 = d1 - cplx<T>(1), A12 = xa.d, A21 = d2, A22 = da1.d;
          cplx<T> det = A11 * A22 - A12 * A21;
          if (det == cplx<T>(0)) break;
          cplx<T> dz = (F1 * A22 - A12 * F2) / det;
          cplx<T> dA = (A11 * F2 - A21 * F1) / det;
          if (!std::isfinite(std::abs(dz)) || std::abs(dA) > T(0.1) || std::abs(dz) > T(1)) break;
          z -= dz;
          a -= dA;
          if (std::abs(dA) + std::abs(dz) < T(1e3) * eps * std::max(T(1), std::abs(a) + std::abs(z))) {
            ok = true;
            break;
          }
        }
        if (!ok) continue;
        T dist = std::abs(a - a0);
        if (dist < best_dist) {
          best_dist = dist;
          best = std::make_pair(a, z);
        }
      }
    }
  }
  return best;
}

}  // namespace

template <class T>
InternalParamTrace internal_param_ray(const ParamComponent& comp, Quadrant quadrant, const Angle& t,
                                      const InternalParamOptions& opts) {
  InternalParamTrace out;
  out.component = comp;
  out.quadrant = quadrant;
  out.angle = t;
  const T eps = std::numeric_limits<T>::epsilon();
  const bool principal = comp.kind == ParamComponent::principal;
  if (principal == (quadrant == Quadrant::none)) {
    out.diagnostic = principal ? "a quadrant is required for the principal component"
                               : "quadrants only apply to the principal component";
    return out;
  }
  const T tt = static_cast<T>(t.to_long_double());
  const T r0 = T(opts.start_radius);
  cplx<T> a;
  if (principal) {
    const bool odd = quadrant == Quadrant::I || quadrant == Quadrant::III;
    T x = tt;
    if (!odd && x < T(1) / 3) x += 1;
    const bool in_range = odd ? (x >= T(1) / 3 - eps && x <= T(2) / 3 + eps)
                              : (x >= T(2) / 3 - eps && x <= T(4) / 3 + eps);
    if (!in_range) {
      out.diagnostic = "angle outside the range of the quadrant";
      return out;
    }
    // -phi_a(2a) ~ -2 sqrt3 a^2 near a = 0.
    a = std::polar(std::sqrt(r0 / (T(2) * std::sqrt(T(3)))), pi_v<T>() * (x - T(0.5)));
    if (quadrant == Quadrant::III || quadrant == Quadrant::IV) a = -a;
  } else {
    if (comp.depth == 0) {
      out.diagnostic = "type C component needs depth >= 1";
      return out;
    }
    cplx<T> c = to_t<T>(comp.centre);
    auto w = crit_iterate(c, comp.depth);
    cplx<T> D = T(3) * c * (w.d - cplx<T>(1));  // d/da of u = 3a (w - a) where w = a
    a = c + std::polar(r0, T(2) * pi_v<T>() * tt) / D;
  }

  // The principal equation reads the cocritical point one step later:
  // f(2a) = f(-a) has phi = phi(2a)^2, so potential and angle double.
  IParamSolver<T> solver{principal ? 1u : comp.depth, T(256) * eps};
  const int shift = principal ? 1 : 0;
  const T gmul = principal ? T(2) : T(1);
  auto t_at = [&](int k) {
    Angle s = t;
    for (int i = 0; i < k + shift; ++i) s = s.times(2);
    return static_cast<T>(s.to_long_double());
  };
  auto level_for = [&](cplx<T> at, T g) { return *solver.level(at, gmul * g); };

  T g = -std::log(r0);
  int k = level_for(a, g);
  T tk = t_at(k);
  {
    auto s = solver.solve(a, gmul * g, k, tk);
    if (!s) {
      out.diagnostic = "Newton failed at the seed";
      return out;
    }
    a = *s;
  }
  auto push = [&](cplx<T> p, T gg) {
    if (opts.keep_samples) out.samples.push_back({point_of(p), double(gg)});
  };
  push(a, g);

  // Targets: r grows by radius_step up to 0.9, then g shrinks geometrically.
  const int S = 16;
  const T g_geo = -std::log(T(0.9));
  const T ratio = std::pow(T(2), T(-1) / T(S));
  auto next_target = [&](T gcur) {
    if (gcur > g_geo * (T(1) + T(1e-9))) {
      T r = std::exp(-gcur) + T(opts.radius_step);
      return r >= T(0.9) ? g_geo : -std::log(r);
    }
    return gcur * ratio;
  };

  std::vector<cplx<T>> levels;
  std::vector<T> diffs;
  cplx<T> last_step = 0;
  long geo_steps = 0;
  int steps = 0;

  auto finish = [&](cplx<T> af) {
    out.endpoint = point_of(af);
  };
  auto try_refine = [&](cplx<T> al) -> bool {
    if (!opts.refine || diffs.size() < 2) return false;
    T d = diffs.back();
    T r = std::min(T(0.999), diffs.back() / diffs[diffs.size() - 2]);
    T predicted = d * r / (T(1) - r);
    T slack = T(1e3) * eps * std::max(T(1), std::abs(al));
    // Angle of the landing point of f^{base}(-a) on the basin boundary.
    Angle s = t;
    if (principal) s = s.times(2);
    OrbitType ot = orbit_type(s, 2);
    const unsigned base = principal ? 1u : comp.depth;
    if (auto m = refine_misiurewicz_s1(al, base + ot.preperiod, ot.period)) {
      if (std::abs(*m - al) <= T(3) * predicted + slack) {
        finish(*m);
        out.refined = true;
        out.landing_kind = "misiurewicz";
        return true;
      }
    }
    if (auto pb = refine_parabolic_s1(al, ot.period)) {
      if (std::abs(pb->first - al) <= T(3) * predicted + slack) {
        finish(pb->first);
        out.refined = true;
        out.landing_kind = "parabolic";
        out.parabolic_point = {double(pb->second.real()), double(pb->second.imag())};
        return true;
      }
    }
    return false;
  };

  while (true) {
    if (++steps > opts.max_steps) {
      out.diagnostic = "step budget exhausted";
      break;
    }
    const T gn = next_target(g);
    const bool geometric = g <= g_geo * (T(1) + T(1e-9));
    std::optional<cplx<T>> an;
    T gtry = gn;
    for (int sub = 0; sub < 14; ++sub) {
      T frac = (g - gtry) / (g - gn);
      cplx<T> guess = a + last_step * frac;
      int kk = level_for(a, gtry);
      T tkk = kk == k ? tk : t_at(kk);
      an = solver.solve(guess, gmul * gtry, kk, tkk);
      bool jump = an && std::abs(last_step) > 0 &&
                  std::abs(*an - a) > T(4) * std::abs(last_step) * frac + T(1e-12);
      if (an && !jump) {
        k = kk;
        tk = tkk;
        last_step = (*an - a) / frac;
        break;
      }
      an.reset();
      gtry = (g + gtry) / 2;
    }
    if (!an) {
      out.diagnostic = "internal parameter continuation failed";
      break;
    }
    a = *an;
    const bool on_target = gtry == gn;
    g = gtry;
    push(a, g);
    if (!on_target) continue;
    if (geometric) ++geo_steps;
    if (g <= g_geo * (T(1) + T(1e-9)) && geo_steps % S == 0) {
      if (!levels.empty()) {
        T d = std::abs(a - levels.back());
        diffs.push_back(d);
        out.cauchy = double(d);
        if (d < T(opts.landing_tol)) {
          out.status = RayStatus::landed;
          finish(a);
          out.landing_kind = "unrefined";
          try_refine(a);
          return out;
        }
        if (d < T(1e-4) && try_refine(a)) {
          out.status = RayStatus::landed;
          return out;
        }
      }
      levels.push_back(a);
    }
    if (g <= T(opts.floor_potential)) {
      if (try_refine(a)) {
        out.status = RayStatus::landed;
        return out;
      }
      out.diagnostic = "floor potential reached before landing";
      break;
    }
  }
  out.status = RayStatus::budget_exhausted;
  finish(a);
  return out;
}

template InternalParamTrace internal_param_ray<double>(const ParamComponent&, Quadrant, const Angle&,
                                                       const InternalParamOptions&);
template InternalParamTrace internal_param_ray<long double>(const ParamComponent&, Quadrant,
                                                            const Angle&, const InternalParamOptions&);

}  // namespace cubicslice
