#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "cubicslice/io.hpp"
#include "cubicslice/psi_boundary.hpp"
#include "cubicslice/render.hpp"
#include "cubicslice/suite.hpp"

namespace py = pybind11;
using namespace cubicslice;

namespace {

// Results cross the boundary as JSON text; the Python package decodes them.
using Text = std::string;

template <class F>
Text with_precision(const std::string& precision, F&& fn) {
  if (parse_precision(precision) == Precision::high) return fn.template operator()<long double>();
  return fn.template operator()<double>();
}

std::vector<std::string> strs(const AngleSet& s) {
  std::vector<std::string> out;
  for (const Angle& t : s) out.push_back(t.str());
  return out;
}

template <class T>
SlicePoint point(const std::string& region, double rho, const Angle& t) {
  std::string err;
  auto p = param_from_coords<T>(parse_region(region), rho, t, &err);
  if (!p) throw std::invalid_argument("no parameter at this rho: " + err);
  return *p;
}

py::array_t<std::uint8_t> to_array(const Image& img) {
  py::array_t<std::uint8_t> a({img.height(), img.width(), 3});
  const auto& bytes = img.bytes();
  std::memcpy(a.mutable_data(), bytes.data(), bytes.size());
  return a;
}

Window window_of(const std::vector<double>& w, Window dflt) {
  if (w.empty()) return dflt;
  if (w.size() != 4) throw std::invalid_argument("window must be (re0, re1, im0, im1)");
  return Window{{w[0], w[2]}, {w[1], w[3]}};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cubic slice dynamics core";

  m.def("periodic_angles", [](unsigned q, unsigned d) { return strs(periodic_angles(q, d)); }, py::arg("q"),
        py::arg("d") = 3);
  m.def("coperiodic_angles", [](unsigned q) { return strs(coperiodic_angles(q)); }, py::arg("q"));
  m.def("mobius_count", &mobius_count, py::arg("q"), py::arg("d"));
  m.def("basilica_partner", [](const std::string& t) {
    const Angle a = Angle::parse(t);
    if (!is_basilica_angle(a)) throw std::invalid_argument(t + " is not a basilica angle");
    return basilica_partner(a).str();
  });
  m.def("w_boundary_angles", [] {
    std::vector<std::string> out;
    for (const Angle& t : w_boundary_angles()) out.push_back(t.str());
    return out;
  });
  m.def("lamination", [](unsigned depth) -> Text { return to_json(basilica_lamination(depth)).dump(); },
        py::arg("depth"));

  m.def(
      "trace_dynamical_ray",
      [](const std::string& region, double rho, const std::string& map_angle, const std::string& angle,
         bool samples, const std::string& precision) -> Text {
        const Angle t = Angle::parse(map_angle), theta = Angle::parse(angle);
        py::gil_scoped_release release;
        return with_precision(precision, [&]<class T>() {
          const SlicePoint p = point<T>(region, rho, t);
          TraceOptions o = crash_aware({}, t);
          o.keep_samples = samples;
          Json j = to_json(trace_dynamical_ray(p.template map<T>(), theta, o), samples);
          j["map"] = to_json(p);
          return j.dump();
        });
      },
      py::arg("region"), py::arg("rho"), py::arg("map_angle"), py::arg("angle"), py::arg("samples") = false,
      py::arg("precision") = "double");

  m.def(
      "trace_parameter_ray",
      [](const std::string& region, const std::string& angle, double floor, bool samples,
         const std::string& precision) -> Text {
        const Angle theta = Angle::parse(angle);
        const Region r = parse_region(region);
        py::gil_scoped_release release;
        return with_precision(precision, [&]<class T>() {
          ParamTraceOptions o;
          o.keep_samples = samples;
          return to_json(trace_parameter_ray<T>(r, theta, floor, o), samples).dump();
        });
      },
      py::arg("region"), py::arg("angle"), py::arg("floor") = 1.0, py::arg("samples") = false,
      py::arg("precision") = "double");

  m.def(
      "orbit_portrait",
      [](const std::string& region, double rho, const std::string& angle, unsigned q, double tol,
         const std::string& precision, unsigned threads) -> Text {
        const Angle t = Angle::parse(angle);
        py::gil_scoped_release release;
        return with_precision(precision, [&]<class T>() {
          const SlicePoint p = point<T>(region, rho, t);
          Json j = to_json(orbit_portrait(p.template map<T>(), q, tol, crash_aware({}, t), threads));
          j["map"] = to_json(p);
          return j.dump();
        });
      },
      py::arg("region"), py::arg("rho"), py::arg("angle"), py::arg("q") = 2, py::arg("tol") = 1e-6,
      py::arg("precision") = "double", py::arg("threads") = 0);

  m.def(
      "tessellate",
      [](const std::string& region, unsigned q, double tol, unsigned threads) -> Text {
        const Region r = parse_region(region);
        py::gil_scoped_release release;
        return to_json(build_tessellation<double>(r, q, tol, threads)).dump();
      },
      py::arg("region"), py::arg("q") = 2, py::arg("tol") = 1e-6, py::arg("threads") = 0);

  m.def(
      "psi",
      [](double rho, const std::string& angle) -> Text {
        const Angle t = Angle::parse(angle);
        py::gil_scoped_release release;
        const SlicePoint f = point<double>("E1", rho, t);
        std::string err;
        auto g = psi<double>(f, &err);
        Json j{{"f", to_json(f)}};
        if (g) j["psi"] = to_json(*g);
        else j["error"] = err;
        return j.dump();
      },
      py::arg("rho"), py::arg("angle"));

  m.def(
      "quotient_check",
      [](double rho, const std::string& angle, unsigned q, double tol, unsigned threads) -> Text {
        const Angle t = Angle::parse(angle);
        py::gil_scoped_release release;
        QuotientResult r = quotient_check<double>(rho, t, q, tol, threads);
        return Json{{"verdict", to_string(r.verdict)},
                    {"e1_portrait", to_json(r.e1)},
                    {"predicted", to_json(r.predicted)},
                    {"e2b_portrait", to_json(r.e2b)},
                    {"detail", r.detail}}
            .dump();
      },
      py::arg("rho"), py::arg("angle"), py::arg("q") = 2, py::arg("tol") = 1e-6, py::arg("threads") = 0);

  m.def(
      "psi_hat",
      [](const std::string& angle, const std::string& precision) -> Text {
        const Angle t = Angle::parse(angle);
        py::gil_scoped_release release;
        return with_precision(precision, [&]<class T>() {
          ParamTraceOptions o;
          o.keep_samples = false;
          PsiHatResult r = psi_hat<T>(t, o);
          Json j{{"angle", to_json(r.angle)}, {"ok", r.ok}, {"e1", to_json(r.e1, false)}, {"e2b", to_json(r.e2b, false)}};
          if (!r.detail.empty()) j["detail"] = r.detail;
          return j.dump();
        });
      },
      py::arg("angle"), py::arg("precision") = "double");

  m.def("check_names", &check_names);
  m.def(
      "run_suite",
      [](const std::vector<std::string>& checks, double tol, const std::string& precision, unsigned budget,
         unsigned threads) -> Text {
        SuiteConfig cfg;
        cfg.checks = checks;
        cfg.tol = tol;
        cfg.precision = parse_precision(precision);
        cfg.unresolved_budget = budget;
        cfg.threads = threads;
        py::gil_scoped_release release;
        return run_suite(cfg).to_json().dump();
      },
      py::arg("checks") = std::vector<std::string>{}, py::arg("tol") = 1e-6, py::arg("precision") = "double",
      py::arg("budget") = 0, py::arg("threads") = 0);

  m.def(
      "render_slice",
      [](const std::string& slice, const std::vector<double>& window, int width, int height,
         const std::string& view, const std::vector<std::string>& rays, bool w_boundaries, unsigned threads) {
        SliceJob job;
        if (slice != "S1" && slice != "S2") throw std::invalid_argument("slice must be S1 or S2");
        job.slice = slice == "S2" ? Slice::S2 : Slice::S1;
        job.window = window_of(window, job.window);
        job.width = width;
        job.height = height;
        job.view = parse_slice_view(view);
        for (const auto& s : rays) job.rays.emplace_back(job.slice == Slice::S1 ? Region::E1 : Region::E2B, Angle::parse(s));
        job.w_boundaries = w_boundaries;
        job.threads = threads;
        Rendering r;
        {
          py::gil_scoped_release release;
          r = render_slice(job);
        }
        return to_array(r.image);
      },
      py::arg("slice") = "S1", py::arg("window") = std::vector<double>{}, py::arg("width") = 256,
      py::arg("height") = 256, py::arg("view") = "projected", py::arg("rays") = std::vector<std::string>{},
      py::arg("w_boundaries") = false, py::arg("threads") = 0);

  m.def(
      "render_julia",
      [](const std::string& region, double rho, const std::string& angle, const std::vector<double>& window,
         int width, int height, const std::vector<std::string>& rays, unsigned threads) {
        JuliaJob job;
        job.f = point<double>(region, rho, Angle::parse(angle)).map<double>();
        job.window = window_of(window, job.window);
        job.width = width;
        job.height = height;
        for (const auto& s : rays) job.rays.push_back(Angle::parse(s));
        job.threads = threads;
        Rendering r;
        {
          py::gil_scoped_release release;
          r = render_julia(job);
        }
        return to_array(r.image);
      },
      py::arg("region"), py::arg("rho"), py::arg("angle"), py::arg("window") = std::vector<double>{},
      py::arg("width") = 256, py::arg("height") = 256, py::arg("rays") = std::vector<std::string>{},
      py::arg("threads") = 0);

  m.def(
      "export_table",
      [](const std::string& what, const std::string& path, unsigned q, const std::string& region, double tol) {
        ExportOptions o;
        o.q = q;
        o.region = parse_region(region);
        o.tol = tol;
        const Table t = parse_table(what);
        py::gil_scoped_release release;
        return export_table(t, path, o);
      },
      py::arg("what"), py::arg("path"), py::arg("q") = 2, py::arg("region") = "E1", py::arg("tol") = 1e-6);
}
