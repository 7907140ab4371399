#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubicslice/io.hpp"
#include "cubicslice/psi_boundary.hpp"
#include "cubicslice/render.hpp"
#include "cubicslice/suite.hpp"

using namespace cubicslice;

namespace {

constexpr int kOk = 0, kRefuted = 1, kUnresolved = 2, kUsage = 3;

// Raised for inputs that parse but make no sense together.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string region = "E1";
  std::string angle;
  double rho = 2;
  unsigned q = 2;
  double tol = 1e-6;
  std::string precision = "double";
  unsigned threads = 0;
  std::string out = "-";
};

template <class F>
int with_precision(const Common& c, F&& fn) {
  if (parse_precision(c.precision) == Precision::high) return fn.template operator()<long double>();
  return fn.template operator()<double>();
}

Angle required_angle(const std::string& text, const char* flag) {
  if (text.empty()) throw UsageError(std::string(flag) + " is required");
  return Angle::parse(text);
}

std::vector<Angle> parse_angles(const std::vector<std::string>& texts) {
  std::vector<Angle> out;
  for (const auto& s : texts) out.push_back(Angle::parse(s));
  return out;
}

template <class T>
SlicePoint map_point(const Common& c, const Angle& t) {
  std::string err;
  auto p = param_from_coords<T>(parse_region(c.region), c.rho, t, &err);
  if (!p) throw UsageError("no parameter at rho = " + std::to_string(c.rho) + ": " + err);
  return *p;
}

void add_region(CLI::App* cmd, Common& c) {
  cmd->add_option("--region", c.region, "Escape region")->check(CLI::IsMember({"E1", "E2B", "E2D"}));
}
void add_angle(CLI::App* cmd, Common& c, const std::string& help) {
  cmd->add_option("--angle", c.angle, help + " (exact fraction p/q)");
}
void add_rho(CLI::App* cmd, Common& c) {
  cmd->add_option("--rho", c.rho, "Modulus of the region coordinate (> 1)")->check(CLI::PositiveNumber);
}
void add_q(CLI::App* cmd, Common& c) { cmd->add_option("--q", c.q, "Period or coperiod")->check(CLI::Range(1u, 12u)); }
void add_tol(CLI::App* cmd, Common& c) { cmd->add_option("--tol", c.tol, "Co-landing tolerance")->check(CLI::PositiveNumber); }
void add_precision(CLI::App* cmd, Common& c) {
  cmd->add_option("--precision", c.precision, "Working precision")->check(CLI::IsMember({"double", "high"}));
}
void add_threads(CLI::App* cmd, Common& c) { cmd->add_option("--threads", c.threads, "Worker threads (0: all cores)"); }
void add_out(CLI::App* cmd, Common& c, const std::string& help) { cmd->add_option("--out", c.out, help); }

int cmd_angles(const Common& c, const std::string& set, unsigned degree) {
  if (!c.angle.empty()) {
    const Angle t = Angle::parse(c.angle);
    Json j;
    j["angle"] = to_json(t);
    j["decimal"] = t.to_double();
    for (unsigned d : {2u, 3u}) {
      const OrbitType ot = orbit_type(t, d);
      j[d == 2 ? "doubling" : "tripling"] = Json{{"preperiod", ot.preperiod}, {"period", ot.period}};
    }
    if (auto k = coperiod(t)) j["coperiod"] = *k;
    else j["coperiod"] = nullptr;
    if (auto b = basilica_index(t)) {
      j["basilica_index"] = *b;
      j["basilica_partner"] = to_json(basilica_partner(t));
    } else {
      j["basilica_index"] = nullptr;
    }
    const WRegion w = w_region(t);
    j["w_region"] = w.label;
    write_json(c.out, j);
    return kOk;
  }
  AngleSet s;
  if (set == "periodic") s = periodic_angles(c.q, degree);
  else if (set == "coperiodic") s = coperiodic_angles(c.q);
  else s = AngleSet(w_boundary_angles());
  std::ostringstream os;
  write_csv(os, s);
  write_text(c.out, os.str());
  return kOk;
}

int cmd_lamination(const Common& c, unsigned depth) {
  if (!c.angle.empty()) {
    const Angle t = Angle::parse(c.angle);
    if (!is_basilica_angle(t)) throw UsageError(t.str() + " is not a basilica angle");
    write_json(c.out, Json{{"angle", to_json(t)}, {"partner", to_json(basilica_partner(t))}});
    return kOk;
  }
  const Lamination lam = basilica_lamination(depth);
  Json j = to_json(lam);
  const bool unl = pairwise_unlinked(lam.leaves);
  j["pairwise_unlinked"] = unl;
  write_json(c.out, j);
  return unl ? kOk : kRefuted;
}

int cmd_trace_ray(const Common& c, const std::string& kind, const std::string& map_angle, double floor,
                  bool samples) {
  const Angle theta = required_angle(c.angle, "--angle");
  return with_precision(c, [&]<class T>() {
    if (kind == "parameter") {
      ParamTraceOptions o;
      o.keep_samples = samples;
      ParamRayTrace tr = trace_parameter_ray<T>(parse_region(c.region), theta, floor, o);
      write_json(c.out, to_json(tr, samples));
      // A ray stopped at a requested floor above 1 has done its job.
      if (floor > 1) return kOk;
      return tr.status == RayStatus::budget_exhausted ? kUnresolved : kOk;
    }
    const Angle t = required_angle(map_angle, "--map-angle");
    const SlicePoint p = map_point<T>(c, t);
    TraceOptions o = crash_aware({}, t);
    o.keep_samples = samples;
    RayTrace tr = trace_dynamical_ray(p.template map<T>(), theta, o);
    Json j = to_json(tr, samples);
    j["map"] = to_json(p);
    write_json(c.out, j);
    return tr.status == RayStatus::budget_exhausted ? kUnresolved : kOk;
  });
}

int cmd_orbit_portrait(const Common& c) {
  const Angle t = required_angle(c.angle, "--angle");
  return with_precision(c, [&]<class T>() {
    const SlicePoint p = map_point<T>(c, t);
    OrbitPortraitResult r = orbit_portrait(p.template map<T>(), c.q, c.tol, crash_aware({}, t), c.threads);
    Json j = to_json(r);
    j["map"] = to_json(p);
    j["q"] = c.q;
    write_json(c.out, j);
    if (r.status == PortraitStatus::unresolved || r.status == PortraitStatus::tolerance_ambiguous)
      return kUnresolved;
    return kOk;
  });
}

int cmd_tessellate(const Common& c, const std::string& format, bool portraits, unsigned samples) {
  return with_precision(c, [&]<class T>() {
    Tessellation tess = build_tessellation<T>(parse_region(c.region), c.q, c.tol, c.threads);
    if (format == "csv") {
      std::vector<ParamRayTrace> all = tess.pairing.traces;
      for (const auto& o : tess.others) all.insert(all.end(), o.traces.begin(), o.traces.end());
      std::ostringstream os;
      write_landings_csv(os, all);
      write_text(c.out, os.str());
      return tess.ambiguous ? kUnresolved : kOk;
    }
    Json j = to_json(tess);
    int code = tess.ambiguous ? kUnresolved : kOk;
    if (portraits) {
      Json fp = Json::array();
      for (std::size_t f = 0; f < tess.faces.size(); ++f) {
        FacePortrait r = face_portrait<T>(tess, f, c.q, samples, c.tol, c.threads);
        Json e{{"face", f}, {"ok", r.ok}, {"portrait", to_json(r.partition)}};
        if (!r.error.empty()) e["error"] = r.error;
        if (!r.detail.empty()) e["detail"] = r.detail;
        fp.push_back(std::move(e));
        if (r.error == "portrait_varies_in_face") code = kRefuted;
        else if (!r.ok && code == kOk) code = kUnresolved;
      }
      j["face_portraits"] = std::move(fp);
    }
    write_json(c.out, j);
    return code;
  });
}

int cmd_psi(const Common& c, bool check) {
  const Angle t = required_angle(c.angle, "--angle");
  if (c.region != "E1") throw UsageError("psi maps E1 into E2B; --region must be E1");
  return with_precision(c, [&]<class T>() {
    if (check) {
      QuotientResult r = quotient_check<T>(c.rho, t, c.q, c.tol, c.threads);
      write_json(c.out, Json{{"f", to_json(r.f)},
                             {"psi", to_json(r.g)},
                             {"q", c.q},
                             {"verdict", to_string(r.verdict)},
                             {"e1_portrait", to_json(r.e1)},
                             {"predicted", to_json(r.predicted)},
                             {"e2b_portrait", to_json(r.e2b)},
                             {"detail", r.detail}});
      if (r.verdict == Verdict::refuted) return kRefuted;
      return r.verdict == Verdict::unresolved ? kUnresolved : kOk;
    }
    const SlicePoint f = map_point<T>(c, t);
    std::string err;
    auto g = psi<T>(f, &err);
    Json j{{"f", to_json(f)}};
    if (g) j["psi"] = to_json(*g);
    else j["error"] = err;
    write_json(c.out, j);
    return g ? kOk : kUnresolved;
  });
}

int cmd_psi_hat(const Common& c) {
  const Angle t = required_angle(c.angle, "--angle");
  return with_precision(c, [&]<class T>() {
    ParamTraceOptions o;
    o.keep_samples = false;
    PsiHatResult r = psi_hat<T>(t, o);
    Json j{{"angle", to_json(r.angle)}, {"ok", r.ok}, {"e1", to_json(r.e1, false)}, {"e2b", to_json(r.e2b, false)}};
    if (!r.detail.empty()) j["detail"] = r.detail;
    write_json(c.out, j);
    return r.ok ? kOk : kUnresolved;
  });
}

int cmd_verify(const Common& c, const std::vector<std::string>& checks, unsigned budget, bool all_double) {
  SuiteConfig cfg;
  cfg.checks = checks;
  for (const auto& name : checks) {
    const auto& names = check_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) throw UsageError("unknown check: " + name);
  }
  cfg.tol = c.tol;
  cfg.precision = parse_precision(c.precision);
  cfg.high_where_required = !all_double;
  cfg.unresolved_budget = budget;
  cfg.threads = c.threads;
  SuiteReport rep = run_suite(cfg);
  for (const auto& r : rep.results)
    std::fprintf(stderr, "criterion %2d %-20s %-10s %s\n", r.criterion, r.name.c_str(),
                 std::string(to_string(r.verdict)).c_str(), r.summary.c_str());
  write_json(c.out, rep.to_json());
  return rep.exit_code();
}

struct RenderFlags {
  std::string window;
  std::string size = "512x512";
  std::vector<std::string> rays;
  int budget = 0;
};

void parse_size(const std::string& s, int& w, int& h) {
  if (std::sscanf(s.c_str(), "%dx%d", &w, &h) != 2 || w <= 0 || h <= 0 || w > 16384 || h > 16384)
    throw UsageError("--size must be WIDTHxHEIGHT");
}

int cmd_render_slice(const Common& c, const RenderFlags& rf, const std::string& slice, const std::string& view,
                     bool w_boundaries, double ray_floor) {
  SliceJob job;
  job.slice = slice == "S2" ? Slice::S2 : Slice::S1;
  if (!rf.window.empty()) job.window = parse_window(rf.window);
  parse_size(rf.size, job.width, job.height);
  job.view = parse_slice_view(view);
  if (rf.budget > 0) job.budget = rf.budget;
  const Region ray_region = job.slice == Slice::S1 ? Region::E1 : parse_region(c.region == "E1" ? "E2B" : c.region);
  for (const Angle& t : parse_angles(rf.rays)) job.rays.emplace_back(ray_region, t);
  if (w_boundaries && job.slice != Slice::S2) throw UsageError("--w-boundaries needs --slice S2");
  job.w_boundaries = w_boundaries;
  job.ray_floor = ray_floor;
  job.threads = c.threads;
  if (c.out == "-") throw UsageError("render-slice needs --out with a .png or .ppm path");
  Rendering r = render_slice(job);
  write_image(r.image, c.out);
  std::cout << "wrote " << c.out << " (" << r.image.width() << "x" << r.image.height() << ", bounded fraction "
            << bounded_fraction(r) << ", " << r.overlays.size() << " overlays)\n";
  return kOk;
}

int cmd_render_julia(const Common& c, const RenderFlags& rf, const std::string& style, bool markers) {
  const Angle t = required_angle(c.angle, "--angle");
  JuliaJob job;
  job.f = map_point<double>(c, t).map<double>();
  if (!rf.window.empty()) job.window = parse_window(rf.window);
  parse_size(rf.size, job.width, job.height);
  job.style = parse_julia_style(style);
  if (rf.budget > 0) job.budget = rf.budget;
  job.rays = parse_angles(rf.rays);
  job.markers = markers;
  job.threads = c.threads;
  if (c.out == "-") throw UsageError("render-julia needs --out with a .png or .ppm path");
  Rendering r = render_julia(job);
  write_image(r.image, c.out);
  std::cout << "wrote " << c.out << " (" << r.image.width() << "x" << r.image.height() << ", "
            << r.overlays.size() << " overlays)\n";
  return kOk;
}

int cmd_export(const Common& c, const std::string& table) {
  ExportOptions o;
  o.q = c.q;
  o.region = parse_region(c.region);
  o.tol = c.tol;
  o.threads = c.threads;
  const std::size_t rows = export_table(parse_table(table), c.out, o);
  if (c.out != "-") std::cout << "wrote " << rows << " rows to " << c.out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cubic slice dynamics: exact angles, rays, portraits, tessellations and figures"};
  app.require_subcommand(1);
  Common c;
  int code = kOk;

  auto* angles = app.add_subcommand("angles", "Angle tables (CSV) or facts about one angle (JSON)");
  std::string set = "periodic";
  unsigned degree = 3;
  angles->add_option("--set", set, "Table to list")->check(CLI::IsMember({"periodic", "coperiodic", "w-boundary"}));
  angles->add_option("--degree", degree, "Multiplier for periodic angles")->check(CLI::IsMember({2u, 3u}));
  add_q(angles, c);
  add_angle(angles, c, "Describe this angle instead of listing a table");
  add_out(angles, c, "Output path, - for stdout");

  auto* lam = app.add_subcommand("lamination", "Basilica lamination leaves, or the partner of an angle");
  unsigned depth = 6;
  lam->add_option("--depth", depth, "Pullback depth")->check(CLI::Range(0u, 20u));
  add_angle(lam, c, "Basilica angle whose partner is wanted");
  add_out(lam, c, "Output path, - for stdout");

  auto* trace = app.add_subcommand("trace-ray", "Trace a dynamical or parameter ray");
  std::string kind = "dynamical", map_angle;
  double floor = 1.0;
  bool no_samples = false;
  trace->add_option("--kind", kind, "Ray kind")->check(CLI::IsMember({"dynamical", "parameter"}));
  add_region(trace, c);
  add_angle(trace, c, "Ray angle");
  add_rho(trace, c);
  trace->add_option("--map-angle", map_angle, "Parameter angle of the map (dynamical rays)");
  trace->add_option("--floor", floor, "Stop parameter rays at this rho (1: to landing)")->check(CLI::Range(1.0, 1e6));
  trace->add_flag("--no-samples", no_samples, "Omit the sample polyline");
  add_precision(trace, c);
  add_out(trace, c, "Output path, - for stdout");

  auto* portrait = app.add_subcommand("orbit-portrait", "Co-landing classes of period-q rays of (rho, angle)");
  add_region(portrait, c);
  add_angle(portrait, c, "Parameter angle of the map");
  add_rho(portrait, c);
  add_q(portrait, c);
  add_tol(portrait, c);
  add_precision(portrait, c);
  add_threads(portrait, c);
  add_out(portrait, c, "Output path, - for stdout");

  auto* tess = app.add_subcommand("tessellate", "Co-landing pairs and faces of coperiod-q parameter rays");
  std::string format = "json";
  bool portraits = false;
  unsigned samples = 5;
  add_region(tess, c);
  add_q(tess, c);
  add_tol(tess, c);
  add_precision(tess, c);
  add_threads(tess, c);
  tess->add_option("--format", format, "json, or csv of ray landings")->check(CLI::IsMember({"json", "csv"}));
  tess->add_flag("--portraits", portraits, "Also compute the orbit portrait of every face");
  tess->add_option("--samples", samples, "Samples per face for --portraits")->check(CLI::Range(1u, 50u));
  add_out(tess, c, "Output path, - for stdout");

  auto* psi_cmd = app.add_subcommand("psi", "Image of (rho, angle) in E1 under psi");
  bool check = false;
  add_region(psi_cmd, c);
  add_angle(psi_cmd, c, "Parameter angle in E1");
  add_rho(psi_cmd, c);
  add_q(psi_cmd, c);
  add_tol(psi_cmd, c);
  add_precision(psi_cmd, c);
  add_threads(psi_cmd, c);
  psi_cmd->add_flag("--check", check, "Compare the period-q portraits of f and psi(f)");
  add_out(psi_cmd, c, "Output path, - for stdout");

  auto* psih = app.add_subcommand("psi-hat", "Landing points of the parameter ray of an angle in E1 and E2B");
  add_angle(psih, c, "Parameter ray angle");
  add_precision(psih, c);
  add_out(psih, c, "Output path, - for stdout");

  auto* verify = app.add_subcommand("verify", "Run acceptance checks and write a JSON report");
  std::vector<std::string> checks;
  unsigned budget = 0;
  bool all_double = false;
  verify->add_option("--check", checks, "Check name (repeatable; default all)");
  verify->add_option("--budget", budget, "Unresolved results tolerated before exit code 2");
  verify->add_flag("--all-double", all_double, "Do not switch to high precision where needed");
  add_tol(verify, c);
  add_precision(verify, c);
  add_threads(verify, c);
  add_out(verify, c, "Report path, - for stdout");

  RenderFlags rf;
  auto add_render = [&](CLI::App* cmd) {
    cmd->add_option("--window", rf.window, "re0,re1,im0,im1");
    cmd->add_option("--size", rf.size, "WIDTHxHEIGHT");
    cmd->add_option("--ray", rf.rays, "Ray angle to overlay (repeatable)");
    cmd->add_option("--budget", rf.budget, "Escape iterations per pixel");
    add_threads(cmd, c);
    add_out(cmd, c, "Image path (.png or .ppm)");
  };

  auto* rslice = app.add_subcommand("render-slice", "Render S1 or S2 with optional parameter ray overlays");
  std::string slice = "S1", view = "projected";
  bool w_boundaries = false;
  double ray_floor = 1.0;
  rslice->add_option("--slice", slice, "Slice")->check(CLI::IsMember({"S1", "S2"}));
  rslice->add_option("--view", view, "S2 view")->check(CLI::IsMember({"projected", "plus", "minus", "both"}));
  rslice->add_flag("--w-boundaries", w_boundaries, "Overlay the eight W boundary rays of E2B");
  rslice->add_option("--ray-floor", ray_floor, "Stop overlay rays at this rho (1: to landing)")->check(CLI::Range(1.0, 1e6));
  add_region(rslice, c);
  add_render(rslice);

  auto* rjulia = app.add_subcommand("render-julia", "Render the filled Julia set of (rho, angle) in a region");
  std::string style = "escape_time";
  bool markers = false;
  add_region(rjulia, c);
  add_angle(rjulia, c, "Parameter angle of the map");
  add_rho(rjulia, c);
  rjulia->add_option("--style", style, "Shading")->check(CLI::IsMember({"escape_time", "distance_estimate"}));
  rjulia->add_flag("--markers", markers, "Mark critical, cocritical and fixed points");
  add_render(rjulia);

  auto* exp = app.add_subcommand("export", "Write a data table");
  std::string table = "angles";
  exp->add_option("--table", table, "Table")->check(CLI::IsMember({"angles", "coperiodic", "pairings", "portraits", "fibers"}));
  add_region(exp, c);
  add_q(exp, c);
  add_tol(exp, c);
  add_threads(exp, c);
  add_out(exp, c, "Output path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (c.threads > 0) set_default_threads(c.threads);
  try {
    if (*angles) code = cmd_angles(c, set, degree);
    else if (*lam) code = cmd_lamination(c, depth);
    else if (*trace) code = cmd_trace_ray(c, kind, map_angle, floor, !no_samples);
    else if (*portrait) code = cmd_orbit_portrait(c);
    else if (*tess) code = cmd_tessellate(c, format, portraits, samples);
    else if (*psi_cmd) code = cmd_psi(c, check);
    else if (*psih) code = cmd_psi_hat(c);
    else if (*verify) code = cmd_verify(c, checks, budget, all_double);
    else if (*rslice) code = cmd_render_slice(c, rf, slice, view, w_boundaries, ray_floor);
    else if (*rjulia) code = cmd_render_julia(c, rf, style, markers);
    else if (*exp) code = cmd_export(c, table);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    // I/O failures and unexpected numerical errors leave the question open.
    std::cerr << "error: " << e.what() << "\n";
    return kUnresolved;
  }
  return code;
}
