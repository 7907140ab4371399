#include "cubicslice/suite.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cubicslice/internal.hpp"
#include "cubicslice/render.hpp"
#include "cubicslice/tessellation.hpp"

namespace cubicslice {

namespace {

// Combines per-item verdicts: any refutation wins, then any unresolved.
struct Tally {
  std::size_t confirmed = 0, refuted = 0, unresolved = 0;
  void add(Verdict v) {
    (v == Verdict::confirmed ? confirmed : v == Verdict::refuted ? refuted : unresolved) += 1;
  }
  void add(bool ok) { add(ok ? Verdict::confirmed : Verdict::refuted); }
  Verdict verdict() const {
    if (refuted) return Verdict::refuted;
    if (unresolved) return Verdict::unresolved;
    return Verdict::confirmed;
  }
  std::string str() const {
    std::ostringstream os;
    os << confirmed << " confirmed, " << refuted << " refuted, " << unresolved << " unresolved";
    return os.str();
  }
};

std::string cplx_str(std::complex<double> z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

std::string sci_str(double x) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << x;
  return os.str();
}

CheckResult exact_combinatorics(const SuiteConfig&) {
  CheckResult r;
  Tally t;
  const AngleSet a2 = periodic_angles(2, 3);
  std::vector<Angle> expect;
  for (int k : {1, 2, 3, 5, 6, 7}) expect.emplace_back(k, 8);
  t.add(a2.elements() == expect);
  r.witnesses["A2"] = to_json(a2);
  Json counts = Json::array();
  for (unsigned q = 1; q <= 8; ++q) {
    const auto n = periodic_angles(q, 3).size();
    const auto m = mobius_count(q, 3);
    t.add(n == m);
    counts.push_back(Json{{"q", q}, {"size", n}, {"mobius", m}});
  }
  r.witnesses["periodic_counts"] = counts;
  const AngleSet cop = coperiodic_angles(2);
  t.add(cop.size() == 12);
  // W boundaries are the coperiodic angles where the W label changes.
  const Angle eps(1, 100000);
  std::vector<Angle> boundaries;
  for (const Angle& c : cop)
    if (w_interval(c - eps) != w_interval(c + eps)) boundaries.push_back(c);
  t.add(boundaries == w_boundary_angles());
  r.witnesses["coperiodic_2"] = to_json(cop);
  r.witnesses["w_boundaries"] = to_json(boundaries);
  r.verdict = t.verdict();
  r.summary = "|A2| = " + std::to_string(a2.size()) + ", |coperiodic(2)| = " + std::to_string(cop.size()) +
              ", W boundaries found: " + std::to_string(boundaries.size()) + " (" + t.str() + ")";
  return r;
}

CheckResult basilica(const SuiteConfig&) {
  CheckResult r;
  Tally t;
  const Lamination lam = basilica_lamination(14);
  t.add(pairwise_unlinked(lam.leaves));
  std::size_t checked = 0, bad = 0;
  for (unsigned k = 0; k <= 12; ++k) {
    const std::int64_t d = std::int64_t(3) << k;
    for (std::int64_t p = 1; p < d; ++p) {
      Angle x(p, d);
      if (x.denominator() != d || !is_basilica_angle(x)) continue;
      ++checked;
      Angle y = basilica_partner(x);
      if (y == x || basilica_partner(y) != x) ++bad;
    }
  }
  t.add(bad == 0 && checked > 0);
  const std::pair<Angle, Angle> oracle[] = {
      {Angle(1, 3), Angle(2, 3)}, {Angle(1, 6), Angle(5, 6)}, {Angle(1, 12), Angle(11, 12)}};
  Json partners = Json::array();
  for (auto& [x, y] : oracle) {
    Angle got = basilica_partner(x);
    t.add(got == y);
    partners.push_back(Json{{"t", to_json(x)}, {"partner", to_json(got)}, {"expected", to_json(y)}});
  }
  r.witnesses["leaves"] = lam.leaves.size();
  r.witnesses["involution_checked"] = checked;
  r.witnesses["involution_failures"] = bad;
  r.witnesses["partners"] = partners;
  r.verdict = t.verdict();
  r.summary = "depth 14: " + std::to_string(lam.leaves.size()) + " leaves; involution on " + std::to_string(checked) +
              " angles, " + std::to_string(bad) + " failures (" + t.str() + ")";
  return r;
}

template <class T>
std::optional<CubicMap<T>> map_at(Region region, double rho, const Angle& t) {
  auto p = param_from_coords<T>(region, rho, t);
  if (!p) return std::nullopt;
  return p->template map<T>();
}

template <class T>
CheckResult alpha_colanding(const SuiteConfig& cfg) {
  CheckResult r;
  Tally t;
  auto land = [&](const CubicMap<T>& f, const Angle& t0, const std::vector<Angle>& angles) {
    std::vector<RayTrace> out(angles.size());
    parallel_for(angles.size(), [&](std::size_t k) {
      out[k] = trace_dynamical_ray<T>(f, angles[k], crash_aware(TraceOptions{}, t0));
    }, cfg.threads);
    return out;
  };
  {
    const Angle t0(0, 1);
    auto f = map_at<T>(Region::E2B, 2.0, t0);
    if (!f) {
      t.add(Verdict::unresolved);
    } else {
      auto tr = land(*f, t0, {Angle(1, 4), Angle(3, 4)});
      const bool landed = tr[0].status == RayStatus::landed && tr[1].status == RayStatus::landed;
      const double d = std::abs(tr[0].endpoint - tr[1].endpoint);
      const cplx<T> z(T(tr[0].endpoint.real()), T(tr[0].endpoint.imag()));
      const double fixed = double(std::abs((*f)(z) - z));
      if (!landed) t.add(Verdict::unresolved);
      else t.add(d < cfg.tol && fixed < 1e-8);
      r.witnesses["E2B(2,0)"] = Json{{"landing", to_json(tr[0].endpoint)}, {"distance", d}, {"fixed_residual", fixed},
                                     {"tol", cfg.tol}, {"fixed_tol", 1e-8}};
    }
  }
  {
    const Angle t0(1, 16);
    auto f = map_at<T>(Region::E2B, 2.0, t0);
    if (!f) {
      t.add(Verdict::unresolved);
    } else {
      std::vector<Angle> four{Angle(1, 8), Angle(1, 4), Angle(3, 8), Angle(3, 4)};
      std::vector<Angle> rest{Angle(5, 8), Angle(7, 8)};
      auto tr = land(*f, t0, four);
      auto tr2 = land(*f, t0, rest);
      bool landed = true;
      double spread = 0, sep = 1e300;
      for (auto& x : tr) landed = landed && x.status == RayStatus::landed;
      for (auto& x : tr)
        for (auto& y : tr) spread = std::max(spread, std::abs(x.endpoint - y.endpoint));
      for (auto& y : tr2) {
        if (y.status != RayStatus::landed) continue;
        for (auto& x : tr) sep = std::min(sep, std::abs(x.endpoint - y.endpoint));
      }
      if (!landed) t.add(Verdict::unresolved);
      else t.add(spread < cfg.tol && sep > cfg.separation);
      r.witnesses["E2B(2,1/16)"] = Json{{"landing", to_json(tr[0].endpoint)}, {"spread", spread},
                                        {"fifth_ray_separation", sep}, {"tol", cfg.tol},
                                        {"separation", cfg.separation}};
    }
  }
  r.verdict = t.verdict();
  r.summary = "2/8, 6/8 at (2,0)_2B and 1/8, 2/8, 3/8, 6/8 at (2,1/16)_2B (" + t.str() + ")";
  return r;
}

template <class T>
CheckResult two_cycle(const SuiteConfig& cfg) {
  CheckResult r;
  const Angle t0(0, 1);
  auto f = map_at<T>(Region::E1, 2.0, t0);
  if (!f) {
    r.summary = "parameter (2,0)_1 not found";
    return r;
  }
  auto a = trace_dynamical_ray<T>(*f, Angle(1, 4), crash_aware(TraceOptions{}, t0));
  auto b = trace_dynamical_ray<T>(*f, Angle(3, 4), crash_aware(TraceOptions{}, t0));
  if (a.status != RayStatus::landed || b.status != RayStatus::landed) {
    r.summary = "rays did not land: " + a.diagnostic + " " + b.diagnostic;
    return r;
  }
  auto img = [&](std::complex<double> z) {
    auto w = (*f)(cplx<T>(T(z.real()), T(z.imag())));
    return std::complex<double>(double(w.real()), double(w.imag()));
  };
  const double d = std::abs(a.endpoint - b.endpoint);
  const double e = std::max(std::abs(img(a.endpoint) - b.endpoint), std::abs(img(b.endpoint) - a.endpoint));
  r.verdict = d > cfg.separation && e < 1e-6 ? Verdict::confirmed : Verdict::refuted;
  r.witnesses = Json{{"z_2/8", to_json(a.endpoint)}, {"z_6/8", to_json(b.endpoint)}, {"separation", d},
                     {"exchange_residual", e}, {"separation_threshold", cfg.separation}, {"exchange_tol", 1e-6}};
  r.summary = "landings " + cplx_str(a.endpoint) + " and " + cplx_str(b.endpoint) + ", separation " +
              std::to_string(d) + ", exchange residual " + sci_str(e);
  return r;
}

template <class T>
CheckResult portrait_transfer(const SuiteConfig& cfg) {
  CheckResult r;
  Tally t;
  Json items = Json::array();
  for (const Angle& a : transfer_sample_angles())
    for (unsigned q : {2u, 3u}) {
      auto res = quotient_check<T>(2.0, a, q, cfg.tol, cfg.threads);
      t.add(res.verdict);
      Json j{{"t", to_json(a)}, {"w", w_interval(a)}, {"q", q}, {"verdict", to_string(res.verdict)}};
      if (res.verdict != Verdict::confirmed) {
        j["e1"] = to_json(res.e1);
        j["predicted"] = to_json(res.predicted);
        j["e2b"] = to_json(res.e2b);
        j["detail"] = res.detail;
      }
      items.push_back(std::move(j));
    }
  r.witnesses["samples"] = items;
  r.verdict = t.verdict();
  r.summary = "20 maps (2, t)_1 at q = 2 and 3: " + t.str();
  return r;
}

template <class T>
CheckResult face_constancy(const SuiteConfig& cfg) {
  CheckResult r;
  Tally t;
  Json regions = Json::array();
  for (Region region : {Region::E1, Region::E2B}) {
    Tessellation tess = build_tessellation<T>(region, 2, cfg.tol, cfg.threads);
    if (tess.ambiguous) t.add(Verdict::unresolved);
    Json faces = Json::array();
    for (std::size_t f = 0; f < tess.faces.size(); ++f) {
      auto fp = face_portrait<T>(tess, f, 2, 5, cfg.tol, cfg.threads);
      Verdict v = fp.ok ? Verdict::confirmed
                        : fp.error == "portrait_varies_in_face" ? Verdict::refuted : Verdict::unresolved;
      t.add(v);
      Json j{{"face", f}, {"verdict", to_string(v)}, {"portrait", to_json(fp.partition)}};
      if (!fp.ok) j["detail"] = fp.detail;
      faces.push_back(std::move(j));
    }
    regions.push_back(Json{{"region", to_string(region)}, {"faces", std::move(faces)}, {"ambiguous", tess.ambiguous},
                           {"detail", tess.detail}});
  }
  r.witnesses["tessellations"] = regions;
  r.verdict = t.verdict();
  r.summary = "faces of Tess_2 in S1 and S2, 5 samples each: " + t.str();
  return r;
}

template <class T>
CheckResult colanding_transfer(const SuiteConfig& cfg) {
  CheckResult r;
  Tally t;
  Json items = Json::array();
  for (unsigned q : {2u, 3u}) {
    Tessellation a = build_tessellation<T>(Region::E1, q, cfg.tol, cfg.threads);
    Tessellation b = build_tessellation<T>(Region::E2B, q, cfg.tol, cfg.threads);
    Correspondence c = compare_tessellations(a, b);
    const bool clean = a.pairing.unresolved.empty() && b.pairing.unresolved.empty() && !a.pairing.ambiguous &&
                       !b.pairing.ambiguous;
    if (!clean) t.add(Verdict::unresolved);
    else t.add(c.same_pairs && c.same_faces);
    Json only1 = Json::array(), only2 = Json::array(), four = Json::array();
    for (auto& [x, y] : c.only_first) only1.push_back(Json::array({to_json(x), to_json(y)}));
    for (auto& [x, y] : c.only_second) only2.push_back(Json::array({to_json(x), to_json(y)}));
    for (const auto& v : c.four_ray) {
      Json rays = Json::array();
      for (const auto& ref : v.rays) {
        const Tessellation& src = ref.region == Region::E1 ? a : b;
        rays.push_back(std::string(to_string(ref.region)) + " " + src.pairing_of(ref.region).edges[ref.index].str());
      }
      four.push_back(Json{{"rays", rays}, {"a", to_json(v.landing.a_d())}, {"kind", v.kind}});
    }
    items.push_back(Json{{"q", q},
                         {"pairs", a.pairing.pairs.size()},
                         {"same_pairs", c.same_pairs},
                         {"same_faces", c.same_faces},
                         {"only_E1", only1},
                         {"only_E2B", only2},
                         {"four_ray_clusters", four},
                         {"faces_S1", a.faces.size()},
                         {"faces_S2", b.faces.size()}});
  }
  r.witnesses["levels"] = items;
  r.witnesses["precision"] = std::is_same_v<T, double> ? "double" : "high";
  r.verdict = t.verdict();
  r.summary = "E1 vs E2B pairings and faces at q = 2, 3: " + t.str();
  return r;
}

template <class T>
CheckResult main_dichotomy(const SuiteConfig& cfg) {
  CheckResult r;
  Tally t;
  const ParamComponent comp = typeC_component(2, 0);
  Json typec = Json::array();
  const std::vector<std::string> two{"1/3", "2/3", "1/6", "5/6", "1/12", "11/12"}, one{"1/2", "1/4", "1/8"};
  for (const auto* set : {&two, &one})
    for (const auto& s : *set) {
      const Angle a = Angle::parse(s);
      auto res = typeC_check<T>(comp, a, cfg.fiber_tol, cfg.separation, typeC_sample_angles(), cfg.threads);
      const bool want_two = set == &two;
      Verdict v = Verdict::refuted;
      if (res.status == TypeCStatus::unresolved) v = Verdict::unresolved;
      else if (want_two && res.status == TypeCStatus::identified_with && res.partner &&
               *res.partner == basilica_partner(a))
        v = Verdict::confirmed;
      else if (!want_two && res.status == TypeCStatus::injective_here) v = Verdict::confirmed;
      t.add(v);
      Json j{{"t", s}, {"expected_fiber", want_two ? 2 : 1}, {"status", to_string(res.status)},
             {"verdict", to_string(v)}, {"F", to_json(res.F.a_d())}};
      if (res.partner) j["partner"] = to_json(*res.partner);
      if (!res.detail.empty()) j["detail"] = res.detail;
      typec.push_back(std::move(j));
    }
  r.witnesses["component"] = Json{{"kind", "typeC"}, {"depth", 2}, {"index", 0}, {"centre", to_json(comp.centre)}};
  r.witnesses["typeC"] = typec;

  Json principal = Json::array();
  auto add_principal = [&](const Angle& a, Quadrant quad, PrincipalStatus want,
                           std::optional<CrossingCertificate::Kind> kind) {
    auto res = principal_check<T>(a, quad, cfg.fiber_tol, cfg.separation, cfg.threads);
    Verdict v = Verdict::refuted;
    if (res.status == PrincipalStatus::unresolved) v = Verdict::unresolved;
    else if (res.status == want) {
      v = Verdict::confirmed;
      if (kind && !(res.certificate && res.certificate->kind == *kind && res.certificate->interleaves))
        v = Verdict::refuted;
    }
    t.add(v);
    Json j{{"t", to_json(a)}, {"quadrant", to_string(quad)}, {"status", to_string(res.status)},
           {"verdict", to_string(v)}, {"d_same", res.d_same}, {"d_opposite", res.d_opposite}};
    if (res.partner) j["partner"] = to_json(*res.partner);
    if (res.certificate) {
      const auto& c = *res.certificate;
      j["certificate"] = Json{{"kind", c.kind == CrossingCertificate::Kind::separation ? "separation" : "alpha_cycle"},
                              {"alpha_rays", Json::array({to_json(c.alpha_rays.first), to_json(c.alpha_rays.second)})},
                              {"own", to_json(c.own)},
                              {"opposite", to_json(c.opposite)},
                              {"holds", c.interleaves}};
    }
    if (!res.detail.empty()) j["detail"] = res.detail;
    principal.push_back(std::move(j));
  };
  add_principal(Angle(5, 12), Quadrant::I, PrincipalStatus::pair_same_quadrant,
                CrossingCertificate::Kind::separation);
  add_principal(Angle(1, 6), Quadrant::II, PrincipalStatus::pair_same_quadrant,
                CrossingCertificate::Kind::alpha_cycle);
  add_principal(Angle(1, 3), Quadrant::I, PrincipalStatus::parabolic_singleton, std::nullopt);
  add_principal(Angle(2, 3), Quadrant::I, PrincipalStatus::parabolic_singleton, std::nullopt);
  r.witnesses["principal"] = principal;
  r.witnesses["identification_tol"] = cfg.fiber_tol;
  r.witnesses["separation"] = cfg.separation;
  r.verdict = t.verdict();
  r.summary = "type C fibres at 9 angles and 4 principal cases: " + t.str();
  return r;
}

CheckResult figures(const SuiteConfig& cfg) {
  CheckResult r;
  Tally t;
  SliceJob s1;
  s1.slice = Slice::S1;
  s1.width = s1.height = 400;
  s1.threads = cfg.threads;
  Rendering r1 = render_slice(s1);
  ComponentInfo c = bounded_component(r1, 0);
  t.add(c.found && !c.touches_border);
  r.witnesses["S1"] = Json{{"window", "[-2,2]x[-2,2]"}, {"centre_component_pixels", c.pixels},
                           {"touches_border", c.touches_border}, {"bounded_fraction", bounded_fraction(r1)}};

  SliceJob s2;
  s2.slice = Slice::S2;
  s2.window = Window{{-3, -3}, {3, 3}};
  s2.width = s2.height = 400;
  s2.w_boundaries = true;
  s2.threads = cfg.threads;
  Rendering r2 = render_slice(s2);
  std::vector<std::string> labels, expect;
  for (const auto& a : w_boundary_angles()) expect.push_back("E2B " + a.str());
  Json rays = Json::array();
  for (const auto& ov : r2.overlays) {
    labels.push_back(ov.label);
    // The landing end must touch the locus: a bounded pixel within 2 pixels.
    auto [px, py] = r2.window.pixel(ov.points.back(), r2.panel_width, r2.image.height());
    bool near = false;
    for (int dy = -2; dy <= 2 && !near; ++dy)
      for (int dx = -2; dx <= 2 && !near; ++dx) {
        const int x = int(std::floor(px)) + dx, y = int(std::floor(py)) + dy;
        if (x >= 0 && y >= 0 && x < r2.panel_width && y < r2.image.height())
          near = r2.bounded[std::size_t(y) * r2.image.width() + x];
      }
    t.add(near);
    rays.push_back(Json{{"label", ov.label}, {"landing", to_json(ov.points.back())}, {"touches_locus", near}});
  }
  t.add(labels == expect);
  const double dev = overlay_deviation(r2);
  t.add(dev <= 1.0);
  r.witnesses["S2"] = Json{{"window", "[-3,3]x[-3,3]"}, {"rays", rays}, {"overlay_deviation_px", dev}};
  r.verdict = t.verdict();
  r.summary = "S1 centre component bounded: " + std::string(c.found && !c.touches_border ? "yes" : "no") +
              "; S2 W-boundary overlays: " + std::to_string(labels.size()) + " (" + t.str() + ")";
  return r;
}

template <class T>
CheckResult monotonicity(const SuiteConfig& cfg) {
  CheckResult r;
  r.finding_only = true;
  Tally t;
  Json items = Json::array();
  for (const Angle& a : w_boundary_angles()) {
    auto m = monotonicity_probe<T>(Region::E2B, a, 2, cfg.tol, 0, cfg.threads);
    Verdict v = !m.ok ? Verdict::unresolved : m.relation == Monotonicity::larger ? Verdict::confirmed
                                                                                  : Verdict::refuted;
    t.add(v);
    Json j{{"theta", to_json(a)}, {"verdict", to_string(v)}, {"relation", to_string(m.relation)}};
    if (m.ok) {
      j["partner"] = to_json(m.partner);
      j["inner"] = to_json(m.inner.partition);
      j["outer"] = to_json(m.outer.partition);
    }
    if (!m.detail.empty()) j["detail"] = m.detail;
    items.push_back(std::move(j));
  }
  r.witnesses["rays"] = items;
  r.verdict = t.verdict();
  r.summary = "eight W-boundary rays of E2B, inner portrait strictly larger: " + t.str();
  return r;
}

struct CheckDef {
  std::string name;
  int criterion;
  std::function<CheckResult(const SuiteConfig&)> run;
};

template <template <class> class F>
std::function<CheckResult(const SuiteConfig&)> by_precision(bool high_required) {
  return [high_required](const SuiteConfig& cfg) {
    const bool high = cfg.precision == Precision::high || (high_required && cfg.high_where_required);
    return high ? F<long double>{}(cfg) : F<double>{}(cfg);
  };
}

template <class T> struct AlphaF { CheckResult operator()(const SuiteConfig& c) { return alpha_colanding<T>(c); } };
template <class T> struct CycleF { CheckResult operator()(const SuiteConfig& c) { return two_cycle<T>(c); } };
template <class T> struct TransferF { CheckResult operator()(const SuiteConfig& c) { return portrait_transfer<T>(c); } };
template <class T> struct FaceF { CheckResult operator()(const SuiteConfig& c) { return face_constancy<T>(c); } };
template <class T> struct ColandF { CheckResult operator()(const SuiteConfig& c) { return colanding_transfer<T>(c); } };
template <class T> struct MainF { CheckResult operator()(const SuiteConfig& c) { return main_dichotomy<T>(c); } };
template <class T> struct MonoF { CheckResult operator()(const SuiteConfig& c) { return monotonicity<T>(c); } };

const std::vector<CheckDef>& registry() {
  static const std::vector<CheckDef> defs{
      {"exact-combinatorics", 1, exact_combinatorics},
      {"basilica-lamination", 2, basilica},
      {"alpha-colanding", 3, by_precision<AlphaF>(false)},
      {"two-cycle", 4, by_precision<CycleF>(false)},
      {"portrait-transfer", 5, by_precision<TransferF>(false)},
      {"face-constancy", 6, by_precision<FaceF>(false)},
      {"colanding-transfer", 7, by_precision<ColandF>(true)},
      {"main-dichotomy", 8, by_precision<MainF>(false)},
      {"figures", 9, figures},
      {"monotonicity", 10, by_precision<MonoF>(false)},
  };
  return defs;
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& d : registry()) out.push_back(d.name);
    return out;
  }();
  return names;
}

CheckResult run_check(const std::string& name, const SuiteConfig& config) {
  for (const auto& d : registry()) {
    if (d.name != name) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = d.run(config);
    } catch (const std::exception& e) {
      r = CheckResult{};
      r.verdict = Verdict::unresolved;
      r.summary = std::string("error: ") + e.what();
    }
    r.name = d.name;
    r.criterion = d.criterion;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }
  throw std::invalid_argument("unknown check: " + name);
}

// Checks run one after another; each one parallelizes internally over rays
// and pixels, so the report order is fixed.
SuiteReport run_suite(const SuiteConfig& config) {
  SuiteReport rep;
  rep.config = config;
  const auto& names = config.checks.empty() ? check_names() : config.checks;
  for (const auto& name : names) rep.results.push_back(run_check(name, config));
  return rep;
}

int SuiteReport::exit_code() const {
  std::size_t unresolved = 0;
  bool refuted = false;
  for (const auto& r : results) {
    refuted = refuted || r.verdict == Verdict::refuted;
    unresolved += r.verdict == Verdict::unresolved;
  }
  if (refuted) return 1;
  if (unresolved > config.unresolved_budget) return 2;
  return 0;
}

Json SuiteReport::to_json() const {
  Json out;
  out["config"] = Json{{"tol", config.tol},
                       {"fiber_tol", config.fiber_tol},
                       {"separation", config.separation},
                       {"precision", to_string(config.precision)},
                       {"high_where_required", config.high_where_required},
                       {"unresolved_budget", config.unresolved_budget}};
  Json checks = Json::array();
  for (const auto& r : results)
    checks.push_back(Json{{"name", r.name},
                          {"criterion", r.criterion},
                          {"status", to_string(r.verdict)},
                          {"finding_only", r.finding_only},
                          {"summary", r.summary},
                          {"seconds", r.seconds},
                          {"witnesses", r.witnesses}});
  out["checks"] = std::move(checks);
  out["exit_code"] = exit_code();
  return out;
}

std::vector<Angle> transfer_sample_angles() {
  std::vector<Angle> in_w, off_w;
  auto ok = [](const Angle& a) {
    return coperiod_status(a, 2) == CoperiodStatus::no && coperiod_status(a, 3) == CoperiodStatus::no;
  };
  // Points at 1/3 and 2/3 of each W interval, then the midpoints of W1 and W3.
  const Angle w_lo[] = {Angle(1, 24), Angle(5, 12), Angle(13, 24), Angle(11, 12)};
  for (const Angle& lo : w_lo)
    for (int k : {1, 2}) in_w.push_back(lo + Angle(k, 72));
  in_w.push_back(Angle(1, 24) + Angle(1, 48));
  in_w.push_back(Angle(13, 24) + Angle(1, 48));
  std::vector<Angle> candidates;
  for (int k = 0; k < 40; ++k) {
    Angle a(2 * k + 1, 80);
    if (w_interval(a) == 0 && ok(a)) candidates.push_back(a);
  }
  for (std::size_t k = 0; k < 10 && !candidates.empty(); ++k)
    off_w.push_back(candidates[k * candidates.size() / 10]);
  std::vector<Angle> out;
  for (const Angle& a : in_w)
    if (ok(a)) out.push_back(a);
  out.insert(out.end(), off_w.begin(), off_w.end());
  return out;
}

Table parse_table(const std::string& s) {
  if (s == "angles") return Table::angles;
  if (s == "coperiodic") return Table::coperiodic;
  if (s == "pairings") return Table::pairings;
  if (s == "portraits") return Table::portraits;
  if (s == "fibers") return Table::fibers;
  throw std::invalid_argument("unknown table: " + s);
}

std::size_t export_table(Table what, const std::string& path, const ExportOptions& opts) {
  switch (what) {
    case Table::angles:
    case Table::coperiodic: {
      const AngleSet set = what == Table::angles ? periodic_angles(opts.q, 3) : coperiodic_angles(opts.q);
      std::ostringstream os;
      write_csv(os, set);
      write_text(path, os.str());
      return set.size();
    }
    case Table::pairings: {
      Tessellation tess = build_tessellation<double>(opts.region, opts.q, opts.tol, opts.threads);
      write_json(path, to_json(tess));
      return tess.pairing.pairs.size();
    }
    case Table::portraits: {
      Tessellation tess = build_tessellation<double>(opts.region, opts.q, opts.tol, opts.threads);
      Json faces = Json::array();
      for (std::size_t f = 0; f < tess.faces.size(); ++f) {
        auto fp = face_portrait<double>(tess, f, opts.q, 5, opts.tol, opts.threads);
        Json arcs = Json::array();
        for (const auto& a : tess.faces[f].arcs)
          arcs.push_back(Json{{"region", to_string(a.region)}, {"from", to_json(a.from)}, {"to", to_json(a.to)}});
        Json j{{"face", f}, {"arcs", arcs}, {"ok", fp.ok}, {"portrait", to_json(fp.partition)}};
        if (!fp.ok) j["error"] = fp.error;
        faces.push_back(std::move(j));
      }
      write_json(path, Json{{"region", to_string(opts.region)}, {"q", opts.q}, {"faces", faces}});
      return tess.faces.size();
    }
    case Table::fibers: {
      const ParamComponent comp = typeC_component(2, 0);
      const auto angles = typeC_sample_angles();
      std::ostringstream os;
      os << "numerator,denominator,status,fiber_size,partner\n";
      for (const Angle& a : angles) {
        auto res = typeC_check<double>(comp, a, 1e-5, 1e-3, angles, opts.threads);
        const int size = res.status == TypeCStatus::identified_with ? 2
                         : res.status == TypeCStatus::injective_here ? 1 : 0;
        os << a.numerator() << "," << a.denominator() << "," << to_string(res.status) << "," << size << ","
           << (res.partner ? res.partner->str() : "") << "\n";
      }
      write_text(path, os.str());
      return angles.size();
    }
  }
  return 0;
}

}  // namespace cubicslice
