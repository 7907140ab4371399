#include "cubicslice/psi_boundary.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cubicslice/ray_trace.hpp"

namespace cubicslice {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::confirmed: return "confirmed";
    case Verdict::refuted: return "refuted";
    case Verdict::unresolved: return "unresolved";
  }
  return "?";
}

std::string_view to_string(TypeCStatus s) {
  switch (s) {
    case TypeCStatus::identified_with: return "identified_with";
    case TypeCStatus::injective_here: return "injective_here";
    case TypeCStatus::refuted: return "refuted";
    case TypeCStatus::unresolved: return "unresolved";
  }
  return "?";
}

std::string_view to_string(PrincipalStatus s) {
  switch (s) {
    case PrincipalStatus::pair_same_quadrant: return "pair_same_quadrant";
    case PrincipalStatus::singleton: return "singleton";
    case PrincipalStatus::parabolic_singleton: return "parabolic_singleton";
    case PrincipalStatus::refuted: return "refuted";
    case PrincipalStatus::unresolved: return "unresolved";
  }
  return "?";
}

Quadrant opposite(Quadrant q) {
  switch (q) {
    case Quadrant::I: return Quadrant::III;
    case Quadrant::II: return Quadrant::IV;
    case Quadrant::III: return Quadrant::I;
    case Quadrant::IV: return Quadrant::II;
    case Quadrant::none: return Quadrant::none;
  }
  return Quadrant::none;
}

namespace {

double dist(const SlicePoint& x, const SlicePoint& y) {
  return static_cast<double>(std::abs(x.a - y.a) + std::abs(x.v - y.v));
}

}  // namespace

template <class T>
PsiHatResult psi_hat(const Angle& t, const ParamTraceOptions& opts) {
  PsiHatResult out;
  out.angle = t;
  out.e1 = trace_parameter_ray<T>(Region::E1, t, 1.0, opts);
  out.e2b = trace_parameter_ray<T>(Region::E2B, t, 1.0, opts);
  out.ok = out.e1.status == RayStatus::landed && out.e2b.status == RayStatus::landed;
  if (!out.ok) {
    out.detail = "E1: " + std::string(to_string(out.e1.status)) + " " + out.e1.diagnostic +
                 "; E2B: " + std::string(to_string(out.e2b.status)) + " " + out.e2b.diagnostic;
  }
  return out;
}

template <class T>
AnglesAt external_angles_at(const CubicMap<T>& f, cplx<T> z, double tol, unsigned max_period,
                            unsigned threads) {
  AnglesAt out;
  std::vector<cplx<T>> orbit{z};
  for (int i = 0; i < 48; ++i) orbit.push_back(f(orbit.back()));
  bool found = false;
  for (unsigned m = 0; m + 12 < orbit.size() && !found; ++m) {
    for (unsigned p = 1; p <= max_period && !found; ++p) {
      T scale = std::max(T(1), std::abs(orbit[m]));
      if (std::abs(orbit[m + p] - orbit[m]) < T(1e-7) * scale) {
        out.preperiod = m;
        out.period = p;
        found = true;
      }
    }
  }
  if (!found) {
    out.detail = "point is not preperiodic within the search bounds";
    return out;
  }
  TraceOptions topts;
  topts.keep_samples = false;
  auto trace_all = [&](const std::vector<Angle>& cand, cplx<T> target) {
    std::vector<char> hit(cand.size(), 0);
    parallel_for(cand.size(), [&](std::size_t i) {
      auto r = trace_dynamical_ray(f, cand[i], topts);
      std::complex<double> tg(double(target.real()), double(target.imag()));
      hit[i] = r.status == RayStatus::landed && std::abs(r.endpoint - tg) < tol;
    }, threads);
    std::vector<Angle> keep;
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (hit[i]) keep.push_back(cand[i]);
    return keep;
  };

  std::vector<Angle> at;
  for (unsigned L = out.period; L <= max_period && at.empty(); L += out.period) {
    auto cand = periodic_angles(L, 3);
    at = trace_all(cand.elements(), orbit[out.preperiod]);
  }
  if (at.empty()) {
    out.detail = "no periodic ray lands on the cycle";
    return out;
  }
  for (unsigned j = out.preperiod; j > 0; --j) {
    std::vector<Angle> cand;
    for (const Angle& th : at)
      for (std::uint64_t i = 0; i < 3; ++i) cand.push_back(th.preimage(3, i));
    at = trace_all(cand, orbit[j - 1]);
    if (at.empty()) {
      std::ostringstream os;
      os << "no preimage ray lands at step " << j - 1;
      out.detail = os.str();
      return out;
    }
  }
  std::sort(at.begin(), at.end());
  out.angles = at;
  out.ok = true;
  return out;
}

template <class T>
BoundaryImage psi_hat_at(const SlicePoint& F, double tol, unsigned threads) {
  BoundaryImage out;
  auto f = F.template map<T>();
  auto at = external_angles_at(f, f.cocritical(), 1e-6, 6, threads);
  if (!at.ok) {
    out.detail = "external angles at 2a: " + at.detail;
    return out;
  }
  out.angles = at.angles;
  out.landings.resize(at.angles.size());
  std::vector<std::string> errs(at.angles.size());
  parallel_for(at.angles.size(), [&](std::size_t i) {
    ParamTraceOptions o;
    o.keep_samples = false;
    auto r = trace_parameter_ray<T>(Region::E2B, at.angles[i], 1.0, o);
    if (r.status != RayStatus::landed) errs[i] = at.angles[i].str() + ": " + r.diagnostic;
    out.landings[i] = r.endpoint;
  }, threads);
  for (const auto& e : errs) {
    if (!e.empty()) {
      out.detail = "E2B ray did not land: " + e;
      return out;
    }
  }
  out.image = out.landings.front();
  for (const auto& x : out.landings)
    for (const auto& y : out.landings) out.spread = std::max(out.spread, dist(x, y));
  out.ok = out.spread <= tol;
  if (!out.ok) {
    std::ostringstream os;
    os << "E2B rays spread " << out.spread << " > " << tol;
    out.detail = os.str();
  }
  return out;
}

template <class T>
TransferResult verify_transfer(const Angle& theta, const Angle& theta2, double tol,
                               const ParamTraceOptions& opts) {
  TransferResult out;
  auto h1 = psi_hat<T>(theta, opts), h2 = psi_hat<T>(theta2, opts);
  if (!h1.ok || !h2.ok) {
    out.detail = "landing failed: " + h1.detail + " | " + h2.detail;
    return out;
  }
  out.d_e1 = dist(h1.e1.endpoint, h2.e1.endpoint);
  out.d_e2b = dist(h1.e2b.endpoint, h2.e2b.endpoint);
  auto band = [&](double d) { return d > tol && d <= 10 * tol; };
  if (band(out.d_e1) || band(out.d_e2b)) {
    out.detail = "landing distance inside the ambiguity band";
    return out;
  }
  out.e1_coland = out.d_e1 <= tol;
  out.e2b_coland = out.d_e2b <= tol;
  const bool coperiodic = coperiod(theta).has_value() && coperiod(theta2).has_value();
  std::ostringstream os;
  os << "d_E1 = " << out.d_e1 << ", d_E2B = " << out.d_e2b;
  if (out.e1_coland && !out.e2b_coland) {
    out.verdict = Verdict::refuted;
    os << "; co-land in E1 but not in E2B";
  } else if (!out.e1_coland && out.e2b_coland) {
    if (coperiodic) {
      out.verdict = Verdict::refuted;
      os << "; coperiodic pair co-lands in E2B only";
    } else {
      out.verdict = Verdict::confirmed;
      out.asymmetric = true;
      os << "; co-land in E2B only (allowed)";
    }
  } else {
    out.verdict = Verdict::confirmed;
  }
  out.detail = os.str();
  return out;
}

template <class T>
QuotientResult quotient_check(double rho, const Angle& t, unsigned q, double tol, unsigned threads) {
  QuotientResult out;
  std::string err;
  auto f = param_from_coords<T>(Region::E1, rho, t, &err);
  auto g = param_from_coords<T>(Region::E2B, rho, t, &err);
  if (!f || !g) {
    out.detail = "parameter solve failed: " + err;
    return out;
  }
  out.f = *f;
  out.g = *g;
  TraceOptions o = crash_aware(TraceOptions{}, t);
  o.keep_samples = false;
  auto p1 = orbit_portrait(f->template map<T>(), q, tol, o, threads);
  auto p2 = orbit_portrait(g->template map<T>(), q, tol, o, threads);
  if (p1.status != PortraitStatus::ok || p2.status != PortraitStatus::ok) {
    out.detail = "portrait: E1 " + std::string(to_string(p1.status)) + " " + p1.detail + "; E2B " +
                 std::string(to_string(p2.status)) + " " + p2.detail;
    return out;
  }
  out.e1 = p1.partition;
  out.e2b = p2.partition;
  try {
    out.predicted = predicted_psi_portrait(p1.partition, q, t);
  } catch (const std::exception& e) {
    out.detail = e.what();
    return out;
  }
  out.verdict = out.predicted == out.e2b ? Verdict::confirmed : Verdict::refuted;
  if (out.verdict == Verdict::refuted) out.detail = "measured E2B portrait differs from the prediction";
  return out;
}

std::vector<Angle> typeC_sample_angles() {
  std::vector<Angle> out;
  for (const char* s : {"1/3", "2/3", "1/6", "5/6", "1/12", "11/12", "1/2", "1/4", "1/8"})
    out.push_back(Angle::parse(s));
  return out;
}

template <class T>
TypeCResult typeC_check(const ParamComponent& comp, const Angle& t, double tol, double separation,
                        const std::vector<Angle>& samples, unsigned threads) {
  TypeCResult out;
  auto land = [&](const Angle& s) -> std::optional<SlicePoint> {
    auto r = internal_param_ray<T>(comp, Quadrant::none, s);
    if (r.status != RayStatus::landed) return std::nullopt;
    return r.endpoint;
  };
  auto F = land(t);
  if (!F) {
    out.detail = "internal parameter ray " + t.str() + " did not land";
    return out;
  }
  out.F = *F;
  out.image = psi_hat_at<T>(*F, tol, threads);
  if (!out.image.ok) {
    out.detail = out.image.detail;
    return out;
  }
  std::vector<Angle> others;
  if (is_basilica_angle(t)) {
    out.partner = basilica_partner(t);
    others.push_back(*out.partner);
  }
  for (const Angle& s : samples)
    if (s != t && std::find(others.begin(), others.end(), s) == others.end()) others.push_back(s);

  std::ostringstream os;
  bool ambiguous = false, extra = false, partner_ok = !out.partner;
  for (const Angle& s : others) {
    auto Fs = land(s);
    if (!Fs) {
      os << "ray " << s << " did not land; ";
      ambiguous = true;
      continue;
    }
    auto im = psi_hat_at<T>(*Fs, tol, threads);
    if (!im.ok) {
      os << s << ": " << im.detail << "; ";
      ambiguous = true;
      continue;
    }
    double d = dist(im.image, out.image.image);
    out.distances.emplace_back(s, d);
    const bool is_partner = out.partner && s == *out.partner;
    if (d <= tol) {
      if (is_partner) partner_ok = true;
      else extra = true, os << "image of " << s << " coincides; ";
    } else if (d <= separation) {
      ambiguous = true;
      os << s << " at distance " << d << " is neither identified nor separated; ";
    } else if (is_partner) {
      os << "partner " << s << " separated by " << d << "; ";
    }
  }
  if (extra || !partner_ok) out.status = TypeCStatus::refuted;
  else if (ambiguous) out.status = TypeCStatus::unresolved;
  else out.status = out.partner ? TypeCStatus::identified_with : TypeCStatus::injective_here;
  out.detail = os.str();
  return out;
}

namespace {

bool strictly_inside(const Angle& x, const Angle& lo, const Angle& hi) {
  return in_arc(x, lo, hi, ArcEnds{false, false});
}

}  // namespace

template <class T>
PrincipalResult principal_check(const Angle& t, Quadrant quadrant, double tol, double separation,
                                unsigned threads) {
  PrincipalResult out;
  out.quadrant = quadrant;
  auto land = [&](Quadrant q, const Angle& s) -> std::optional<SlicePoint> {
    auto r = internal_param_ray<T>(ParamComponent{}, q, s);
    if (r.status != RayStatus::landed) return std::nullopt;
    return r.endpoint;
  };
  std::ostringstream os;
  const Angle third(1, 3), two_thirds(2, 3);

  if (t == third || t == two_thirds) {
    // The four boundary rays of the quadrants, with their coperiod-2 rays.
    std::vector<std::pair<Quadrant, Angle>> rays{
        {Quadrant::I, third}, {Quadrant::III, third}, {Quadrant::I, two_thirds}, {Quadrant::III, two_thirds}};
    auto cop = coperiodic_angles(2);
    std::vector<PsiHatResult> hats(cop.size());
    parallel_for(cop.size(), [&](std::size_t i) {
      ParamTraceOptions o;
      o.keep_samples = false;
      hats[i] = psi_hat<T>(cop[i], o);
    }, threads);
    for (auto [q, s] : rays) {
      auto F = land(q, s);
      if (!F) {
        out.detail = "boundary ray did not land";
        return out;
      }
      out.parabolic_points.push_back(*F);
      std::vector<Angle> angs;
      std::vector<SlicePoint> ims;
      for (std::size_t i = 0; i < cop.size(); ++i) {
        if (hats[i].ok && dist(hats[i].e1.endpoint, *F) <= tol) {
          angs.push_back(cop[i]);
          ims.push_back(hats[i].e2b.endpoint);
        }
      }
      out.parabolic_angles.push_back(angs);
      if (angs.empty()) {
        os << "no coperiod-2 ray lands at the " << to_string(q) << " " << s << " point; ";
        out.parabolic_images.push_back(SlicePoint{});
        continue;
      }
      double spread = 0;
      for (auto& x : ims)
        for (auto& y : ims) spread = std::max(spread, dist(x, y));
      if (spread > tol) os << "E2B landings spread " << spread << "; ";
      out.parabolic_images.push_back(ims.front());
    }
    bool distinct = true, found = true;
    for (auto& a : out.parabolic_angles) found = found && !a.empty();
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) {
        distinct = distinct && dist(out.parabolic_points[i], out.parabolic_points[j]) > separation;
        if (found) distinct = distinct && dist(out.parabolic_images[i], out.parabolic_images[j]) > separation;
      }
    out.status = !found ? PrincipalStatus::unresolved
                        : (distinct ? PrincipalStatus::parabolic_singleton : PrincipalStatus::refuted);
    out.detail = os.str();
    return out;
  }

  auto F = land(quadrant, t);
  if (!F) {
    out.detail = "internal parameter ray did not land";
    return out;
  }
  out.F = *F;
  out.image = psi_hat_at<T>(*F, tol, threads);
  if (!out.image.ok) {
    out.detail = out.image.detail;
    return out;
  }
  if (quadrant == Quadrant::I) {
    for (const Angle& th : out.image.angles)
      out.window_ok = out.window_ok && strictly_inside(th, Angle(23, 24), Angle(1, 24));
  }
  if (!is_basilica_angle(t)) {
    auto Fo = land(opposite(quadrant), t);
    if (!Fo) {
      out.detail = "opposite ray did not land";
      return out;
    }
    out.F_opposite = *Fo;
    out.image_opposite = psi_hat_at<T>(*Fo, tol, threads);
    if (!out.image_opposite.ok) {
      out.detail = out.image_opposite.detail;
      return out;
    }
    out.d_opposite = dist(out.image.image, out.image_opposite.image);
    out.status = out.d_opposite > separation ? PrincipalStatus::singleton
                 : out.d_opposite <= tol    ? PrincipalStatus::refuted
                                            : PrincipalStatus::unresolved;
    return out;
  }

  out.partner = basilica_partner(t);
  auto Fs = land(quadrant, *out.partner);
  auto Fo = land(opposite(quadrant), *out.partner);
  if (!Fs || !Fo) {
    out.detail = "partner ray did not land (partner " + out.partner->str() + " may lie outside the quadrant)";
    return out;
  }
  out.F_same = *Fs;
  out.F_opposite = *Fo;
  out.image_same = psi_hat_at<T>(*Fs, tol, threads);
  out.image_opposite = psi_hat_at<T>(*Fo, tol, threads);
  if (!out.image_same.ok || !out.image_opposite.ok) {
    out.detail = out.image_same.detail + " " + out.image_opposite.detail;
    return out;
  }
  out.d_same = dist(out.image.image, out.image_same.image);
  out.d_opposite = dist(out.image.image, out.image_opposite.image);

  // Certificate: the alpha pair for the sector of F separates the cocritical
  // angles of F from those of the opposite candidate.
  std::optional<Angle> generic;
  for (const Angle& th : out.image.angles)
    if (coperiod_status(th, 2) == CoperiodStatus::no) generic = th;
  auto pairs = generic ? alpha_pairs(*generic) : std::vector<Leaf>{};
  if (pairs.size() == 1) {
    CrossingCertificate c;
    c.alpha_rays = {pairs[0].a(), pairs[0].b()};
    c.own = out.image.angles;
    c.opposite = out.image_opposite.angles;
    auto on_alpha = [&](const Angle& x) { return x == c.alpha_rays.first || x == c.alpha_rays.second; };
    if (std::any_of(c.own.begin(), c.own.end(), on_alpha)) {
      c.kind = CrossingCertificate::Kind::alpha_cycle;
      c.interleaves = std::all_of(c.own.begin(), c.own.end(), on_alpha) &&
                      std::none_of(c.opposite.begin(), c.opposite.end(), on_alpha);
    } else {
      bool own_in = true, own_out = true, opp_in = true, opp_out = true;
      for (auto& x : c.own) {
        own_in = own_in && strictly_inside(x, c.alpha_rays.first, c.alpha_rays.second);
        own_out = own_out && strictly_inside(x, c.alpha_rays.second, c.alpha_rays.first);
      }
      for (auto& x : c.opposite) {
        opp_in = opp_in && strictly_inside(x, c.alpha_rays.first, c.alpha_rays.second);
        opp_out = opp_out && strictly_inside(x, c.alpha_rays.second, c.alpha_rays.first);
      }
      c.interleaves = (own_in && opp_out) || (own_out && opp_in);
    }
    out.certificate = c;
  } else {
    os << "no unique alpha pair for the sector; ";
  }

  const bool same_ok = out.d_same <= tol;
  const bool opp_sep = out.d_opposite > separation;
  const bool cert_ok = out.certificate && out.certificate->interleaves;
  if (same_ok && opp_sep && cert_ok && out.window_ok) {
    out.status = PrincipalStatus::pair_same_quadrant;
  } else if ((!same_ok && out.d_same > separation) || out.d_opposite <= tol ||
             (out.certificate && !out.certificate->interleaves) || !out.window_ok) {
    out.status = PrincipalStatus::refuted;
  } else {
    out.status = PrincipalStatus::unresolved;
  }
  os << "d_same = " << out.d_same << ", d_opposite = " << out.d_opposite;
  out.detail = os.str();
  return out;
}

#define CUBICSLICE_INSTANTIATE(T)                                                                  \
  template PsiHatResult psi_hat<T>(const Angle&, const ParamTraceOptions&);                        \
  template AnglesAt external_angles_at(const CubicMap<T>&, cplx<T>, double, unsigned, unsigned);  \
  template BoundaryImage psi_hat_at<T>(const SlicePoint&, double, unsigned);                       \
  template TransferResult verify_transfer<T>(const Angle&, const Angle&, double,                   \
                                             const ParamTraceOptions&);                            \
  template QuotientResult quotient_check<T>(double, const Angle&, unsigned, double, unsigned);     \
  template TypeCResult typeC_check<T>(const ParamComponent&, const Angle&, double, double,         \
                                      const std::vector<Angle>&, unsigned);                        \
  template PrincipalResult principal_check<T>(const Angle&, Quadrant, double, double, unsigned);

CUBICSLICE_INSTANTIATE(double)
CUBICSLICE_INSTANTIATE(long double)

}  // namespace cubicslice
