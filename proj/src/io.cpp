#include "cubicslice/io.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <stdexcept>

namespace cubicslice {

namespace {

Json lcplx_json(const lcplx& z) { return Json::array({double(z.real()), double(z.imag())}); }

lcplx lcplx_from(const Json& j) { return {j.at(0).get<long double>(), j.at(1).get<long double>()}; }

Sheet parse_sheet(const std::string& s) {
  if (s == "plus") return Sheet::plus;
  if (s == "minus") return Sheet::minus;
  if (s == "none") return Sheet::none;
  throw std::invalid_argument("unknown sheet: " + s);
}

}  // namespace

Json to_json(const Angle& t) { return t.str(); }

Angle angle_from_json(const Json& j) { return Angle::parse(j.get<std::string>()); }

Json to_json(const AngleSet& s) { return to_json(s.elements()); }

Json to_json(const std::vector<Angle>& v) {
  Json out = Json::array();
  for (const auto& t : v) out.push_back(to_json(t));
  return out;
}

Json to_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Leaf& l) { return Json::array({to_json(l.a()), to_json(l.b())}); }

Json to_json(const std::vector<Leaf>& leaves) {
  Json out = Json::array();
  for (const auto& l : leaves) out.push_back(to_json(l));
  return out;
}

Json to_json(const Lamination& lam) {
  Json out;
  out["depth"] = lam.depth;
  out["leaves"] = to_json(lam.leaves);
  out["generation"] = lam.generation;
  return out;
}

Lamination lamination_from_json(const Json& j) {
  Lamination lam;
  lam.depth = j.value("depth", 0u);
  for (const auto& l : j.at("leaves")) lam.leaves.emplace_back(angle_from_json(l.at(0)), angle_from_json(l.at(1)));
  if (j.contains("generation")) lam.generation = j.at("generation").get<std::vector<unsigned>>();
  return lam;
}

Json to_json(const AnglePartition& p) {
  Json out = Json::array();
  for (const auto& c : p.classes()) out.push_back(to_json(c));
  return out;
}

AnglePartition partition_from_json(const Json& j) {
  std::vector<std::vector<Angle>> classes;
  std::vector<Angle> ground;
  for (const auto& c : j) {
    classes.emplace_back();
    for (const auto& t : c) {
      classes.back().push_back(angle_from_json(t));
      ground.push_back(classes.back().back());
    }
  }
  return AnglePartition(AngleSet(ground), classes);
}

Json to_json(const RayTrace& tr, bool samples) {
  Json out;
  out["angle"] = to_json(tr.angle);
  out["status"] = to_string(tr.status);
  out["endpoint"] = to_json(tr.endpoint);
  out["cauchy"] = tr.cauchy;
  out["refined"] = tr.refined;
  if (!tr.diagnostic.empty()) out["diagnostic"] = tr.diagnostic;
  if (samples) {
    Json s = Json::array();
    for (const auto& x : tr.samples) s.push_back(Json::array({x.z.real(), x.z.imag(), x.potential}));
    out["samples"] = std::move(s);
  }
  return out;
}

Json to_json(const OrbitPortraitResult& r) {
  Json out;
  out["status"] = to_string(r.status);
  out["partition"] = to_json(r.partition);
  Json pts = Json::array();
  for (auto z : r.class_points) pts.push_back(to_json(z));
  out["class_points"] = std::move(pts);
  out["tolerance"] = r.tolerance_used;
  if (!r.detail.empty()) out["detail"] = r.detail;
  return out;
}

Json to_json(const SlicePoint& p) {
  Json out;
  out["slice"] = to_string(p.slice);
  out["a"] = lcplx_json(p.a);
  out["v"] = lcplx_json(p.v);
  out["sheet"] = to_string(p.sheet);
  out["branch_point"] = p.branch_point;
  out["degenerate"] = p.degenerate;
  return out;
}

SlicePoint slice_point_from_json(const Json& j) {
  SlicePoint p;
  const std::string s = j.at("slice").get<std::string>();
  if (s != "S1" && s != "S2") throw std::invalid_argument("unknown slice: " + s);
  p.slice = s == "S1" ? Slice::S1 : Slice::S2;
  p.a = lcplx_from(j.at("a"));
  p.v = lcplx_from(j.at("v"));
  p.sheet = parse_sheet(j.value("sheet", std::string("none")));
  p.branch_point = j.value("branch_point", false);
  p.degenerate = j.value("degenerate", false);
  return p;
}

Json to_json(const ParamRayTrace& tr, bool samples) {
  Json out;
  out["region"] = to_string(tr.region);
  out["angle"] = to_json(tr.angle);
  out["status"] = to_string(tr.status);
  out["endpoint"] = to_json(tr.endpoint);
  out["landing_kind"] = tr.landing_kind;
  if (tr.landing_kind == "parabolic") out["parabolic_point"] = to_json(tr.parabolic_point);
  out["cauchy"] = tr.cauchy;
  out["refined"] = tr.refined;
  if (!tr.diagnostic.empty()) out["diagnostic"] = tr.diagnostic;
  if (samples) {
    // [a.re, a.im, v.re, v.im, potential]
    Json s = Json::array();
    for (const auto& x : tr.samples)
      s.push_back(Json::array({double(x.p.a.real()), double(x.p.a.imag()), double(x.p.v.real()),
                               double(x.p.v.imag()), x.potential}));
    out["samples"] = std::move(s);
  }
  return out;
}

Json to_json(const Pairing& p) {
  Json out;
  out["region"] = to_string(p.region);
  out["q"] = p.q;
  out["edges"] = to_json(p.edges);
  Json pairs = Json::array();
  for (auto [i, j] : p.pairs) pairs.push_back(Json::array({i, j}));
  out["pairing"] = std::move(pairs);
  out["unpaired"] = p.unpaired;
  out["clusters"] = p.clusters;
  out["unresolved"] = p.unresolved;
  Json landings = Json::array();
  for (const auto& tr : p.traces) landings.push_back(to_json(tr, false));
  out["landings"] = std::move(landings);
  out["ambiguous"] = p.ambiguous;
  if (!p.detail.empty()) out["detail"] = p.detail;
  return out;
}

Json to_json(const Tessellation& t) {
  Json out;
  out["region"] = to_string(t.region);
  out["q"] = t.q;
  out["pairings"] = Json::array({to_json(t.pairing)});
  for (const auto& o : t.others) out["pairings"].push_back(to_json(o));
  Json faces = Json::array();
  for (const auto& f : t.faces) {
    Json arcs = Json::array();
    for (const auto& a : f.arcs)
      arcs.push_back(Json{{"region", to_string(a.region)}, {"from", to_json(a.from)}, {"to", to_json(a.to)}});
    faces.push_back(std::move(arcs));
  }
  out["faces"] = std::move(faces);
  Json verts = Json::array();
  for (const auto& v : t.vertices) {
    Json rays = Json::array();
    for (const auto& r : v.rays)
      rays.push_back(Json{{"region", to_string(r.region)}, {"angle", to_json(t.pairing_of(r.region).edges[r.index])}});
    verts.push_back(Json{{"rays", std::move(rays)},
                         {"a", lcplx_json(v.landing.a)},
                         {"v", lcplx_json(v.landing.v)},
                         {"kind", v.kind},
                         {"cross_region", v.cross_region}});
  }
  out["vertices"] = std::move(verts);
  out["ambiguous"] = t.ambiguous;
  if (!t.detail.empty()) out["detail"] = t.detail;
  return out;
}

void write_landings_csv(std::ostream& os, const std::vector<ParamRayTrace>& traces) {
  os << "region,numerator,denominator,status,kind,a_re,a_im,v_re,v_im\n";
  os << std::setprecision(17);
  for (const auto& tr : traces) {
    os << to_string(tr.region) << "," << tr.angle.numerator() << "," << tr.angle.denominator() << ","
       << to_string(tr.status) << "," << tr.landing_kind << "," << double(tr.endpoint.a.real()) << ","
       << double(tr.endpoint.a.imag()) << "," << double(tr.endpoint.v.real()) << "," << double(tr.endpoint.v.imag())
       << "\n";
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace cubicslice
