#include "cubicslice/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cubicslice/numeric.hpp"

namespace cubicslice {

namespace {

double slice_distance(const SlicePoint& x, const SlicePoint& y) {
  return std::abs(x.a_d() - y.a_d()) + std::abs(x.v_d() - y.v_d());
}

bool arc_contains(const Arc& arc, const Angle& t) {
  return in_arc(t, arc.from, arc.to, ArcEnds{false, false});
}

Angle arc_midpoint(const Arc& arc) {
  if (arc.from == arc.to) return arc.from + Angle(1, 2);
  return arc.from + arc_length(arc.from, arc.to).preimage(2, 0);
}

std::vector<Region> slice_regions(Region r) {
  if (r == Region::E1) return {Region::E1};
  return {Region::E2B, Region::E2D};
}

// Groups of edge indices that land together: pairs and clusters.
std::vector<std::vector<std::size_t>> landing_groups(const Pairing& p) {
  std::vector<std::vector<std::size_t>> groups;
  for (auto [i, j] : p.pairs) groups.push_back({i, j});
  for (const auto& c : p.clusters) groups.push_back(c);
  for (auto& g : groups) std::sort(g.begin(), g.end());
  return groups;
}

// Inside the wake of a landing group: off the largest gap between its rays.
bool in_some_wake(const Pairing& p, const Angle& t) {
  for (const auto& g : landing_groups(p)) {
    std::size_t widest = 0;
    Angle best(0, 1);
    for (std::size_t k = 0; k < g.size(); ++k) {
      Angle len = arc_length(p.edges[g[k]], p.edges[g[(k + 1) % g.size()]]);
      if (k == 0 || len > best) {
        best = len;
        widest = k;
      }
    }
    const Angle& lo = p.edges[g[widest]];
    const Angle& hi = p.edges[g[(widest + 1) % g.size()]];
    if (!in_arc(t, lo, hi, ArcEnds{true, true})) return true;
  }
  return false;
}

void check_unlinked(const Pairing& p) {
  std::vector<Leaf> leaves;
  for (const auto& g : landing_groups(p))
    for (std::size_t k = 0, m = g.size() == 2 ? 1 : g.size(); k < m; ++k)
      leaves.emplace_back(p.edges[g[k]], p.edges[g[(k + 1) % g.size()]]);
  if (!pairwise_unlinked(leaves))
    throw std::invalid_argument("build_faces: co-landing rays of " + std::string(to_string(p.region)) +
                                " cross");
}

// Local coordinate at a landing point: a, or v near the branch points.
std::complex<double> local(const SlicePoint& p, bool use_v) { return use_v ? p.v_d() : p.a_d(); }

// Direction from which the ray reaches L, read at distance r.
std::optional<double> approach(const ParamRayTrace& tr, const SlicePoint& L, bool use_v, double r) {
  const auto c = local(L, use_v);
  for (auto it = tr.samples.rbegin(); it != tr.samples.rend(); ++it) {
    auto d = local(it->p, use_v) - c;
    if (std::abs(d) >= r) return std::arg(d);
  }
  return std::nullopt;
}

// Cyclic order of `items` by angle, normalized to start at the least index.
std::vector<std::size_t> cyclic_order(const std::vector<std::pair<double, std::size_t>>& items) {
  auto v = items;
  std::sort(v.begin(), v.end());
  std::vector<std::size_t> out;
  for (auto& [ang, i] : v) out.push_back(i);
  auto m = std::min_element(out.begin(), out.end());
  std::rotate(out.begin(), m, out.end());
  return out;
}

}  // namespace

std::optional<std::size_t> Pairing::partner(std::size_t i) const {
  for (auto [x, y] : pairs) {
    if (x == i) return y;
    if (y == i) return x;
  }
  return std::nullopt;
}

const Pairing& Tessellation::pairing_of(Region r) const {
  if (pairing.region == r) return pairing;
  for (const auto& p : others)
    if (p.region == r) return p;
  throw std::invalid_argument("tessellation has no region " + std::string(to_string(r)));
}

template <class T>
Pairing colanding_pairs(Region region, unsigned q, double tol, unsigned threads) {
  if (q < 1) throw std::invalid_argument("colanding_pairs: q must be at least 1");
  Pairing out;
  out.region = region;
  out.q = q;
  AngleSet set = coperiodic_angles(q);
  out.edges.assign(set.begin(), set.end());
  std::sort(out.edges.begin(), out.edges.end());
  out.traces.resize(out.edges.size());
  parallel_for(
      out.edges.size(),
      [&](std::size_t i) { out.traces[i] = trace_parameter_ray<T>(region, out.edges[i], 1.0); },
      threads);

  std::vector<std::size_t> landed;
  std::vector<std::complex<double>> pts;
  for (std::size_t i = 0; i < out.edges.size(); ++i) {
    if (out.traces[i].status == RayStatus::landed) {
      landed.push_back(i);
      pts.push_back(out.traces[i].endpoint.a_d());
    } else {
      out.unresolved.push_back(i);
    }
  }
  Clustering cl = cluster_points(pts, tol);
  std::ostringstream os;
  if (cl.ambiguous) {
    out.ambiguous = true;
    os << cl.detail << "; ";
  }
  std::map<std::size_t, std::vector<std::size_t>> by_label;
  for (std::size_t k = 0; k < landed.size(); ++k) by_label[cl.label[k]].push_back(landed[k]);
  for (auto& [label, members] : by_label) {
    for (std::size_t k = 1; k < members.size(); ++k) {
      double d = slice_distance(out.traces[members[0]].endpoint, out.traces[members[k]].endpoint);
      if (d > 10 * tol) {
        out.ambiguous = true;
        os << out.edges[members[0]] << " and " << out.edges[members[k]]
           << " agree in a but not in v; ";
      }
    }
    if (members.size() == 1) out.unpaired.push_back(members[0]);
    else if (members.size() == 2) out.pairs.emplace_back(members[0], members[1]);
    else out.clusters.push_back(members);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  std::sort(out.unpaired.begin(), out.unpaired.end());
  if (!out.unresolved.empty()) os << out.unresolved.size() << " rays did not land and are excluded; ";
  if (!out.clusters.empty()) os << out.clusters.size() << " landings carry more than two rays; ";
  out.detail = os.str();
  return out;
}

std::vector<Face> circular_faces(const Pairing& pairing) {
  const auto& E = pairing.edges;
  auto groups = landing_groups(pairing);
  std::vector<std::size_t> P;
  std::map<std::size_t, std::size_t> prev_in_group;
  for (const auto& g : groups)
    for (std::size_t k = 0; k < g.size(); ++k) {
      P.push_back(g[k]);
      prev_in_group[g[k]] = g[(k + g.size() - 1) % g.size()];
    }
  std::sort(P.begin(), P.end());
  if (P.empty()) return {Face{{Arc{pairing.region, Angle(0, 1), Angle(0, 1)}}}};
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t i = 0; i < P.size(); ++i) pos[P[i]] = i;
  std::vector<bool> used(P.size(), false);
  std::vector<Face> faces;
  for (std::size_t start = 0; start < P.size(); ++start) {
    if (used[start]) continue;
    Face face;
    std::size_t i = start;
    while (!used[i]) {
      used[i] = true;
      std::size_t j = (i + 1) % P.size();
      face.arcs.push_back(Arc{pairing.region, E[P[i]], E[P[j]]});
      i = pos[prev_in_group[P[j]]];
    }
    faces.push_back(face);
  }
  return faces;
}

// The slice is a sphere with one puncture per escape region. Rays are edges
// from a puncture to a landing vertex; faces are traced from the rotation
// system (counterclockwise order of edges at each vertex).
Tessellation build_faces(const Pairing& pairing, const std::vector<Pairing>& others, double tol) {
  Tessellation tess;
  tess.region = pairing.region;
  tess.q = pairing.q;
  tess.pairing = pairing;
  tess.others = others;
  std::vector<const Pairing*> regs{&tess.pairing};
  for (const auto& o : tess.others) regs.push_back(&o);
  for (const Pairing* p : regs) check_unlinked(*p);
  std::ostringstream os;

  struct Ray {
    std::size_t reg, idx;
  };
  std::vector<Ray> rays;
  std::vector<std::complex<double>> pts;
  for (std::size_t r = 0; r < regs.size(); ++r)
    for (std::size_t i = 0; i < regs[r]->edges.size(); ++i)
      if (regs[r]->traces[i].status == RayStatus::landed) {
        rays.push_back({r, i});
        pts.push_back(regs[r]->traces[i].endpoint.a_d());
      }
  auto trace_of = [&](const Ray& ray) -> const ParamRayTrace& { return regs[ray.reg]->traces[ray.idx]; };
  auto angle_of = [&](const Ray& ray) -> const Angle& { return regs[ray.reg]->edges[ray.idx]; };

  Clustering cl = cluster_points(pts, tol);
  if (cl.ambiguous) {
    tess.ambiguous = true;
    os << cl.detail << "; ";
  }
  std::size_t nland = 0;
  for (auto l : cl.label) nland = std::max(nland, l + 1);
  const std::size_t R = regs.size();
  const std::size_t V = R + nland;
  auto landing_vertex = [&](std::size_t e) { return R + cl.label[e]; };

  // Dart 2e runs from the puncture to the landing point, 2e+1 back.
  auto origin = [&](std::size_t d) { return d % 2 == 0 ? rays[d / 2].reg : landing_vertex(d / 2); };
  std::vector<std::vector<std::size_t>> rot(V);
  for (std::size_t r = 0; r < R; ++r) {
    std::vector<std::size_t> ds;
    for (std::size_t e = 0; e < rays.size(); ++e)
      if (rays[e].reg == r) ds.push_back(2 * e);
    // Counterclockwise around the puncture is decreasing angle.
    std::sort(ds.begin(), ds.end(), [&](auto x, auto y) { return angle_of(rays[y / 2]) < angle_of(rays[x / 2]); });
    rot[r] = ds;
  }
  for (std::size_t L = 0; L < nland; ++L) {
    std::vector<std::size_t> es;
    for (std::size_t e = 0; e < rays.size(); ++e)
      if (cl.label[e] == L) es.push_back(e);
    for (std::size_t k = 1; k < es.size(); ++k)
      if (slice_distance(trace_of(rays[es[0]]).endpoint, trace_of(rays[es[k]]).endpoint) > 10 * tol) {
        tess.ambiguous = true;
        os << "landings of " << angle_of(rays[es[0]]) << " and " << angle_of(rays[es[k]])
           << " agree in a but not in v; ";
      }
    const SlicePoint& P = trace_of(rays[es[0]]).endpoint;
    if (es.size() >= 3) {
      const bool use_v = std::abs(9.0 * P.a_d() * P.a_d() - 4.0) < 1e-3;
      double dmin = 0.05;
      for (std::size_t e = 0; e < rays.size(); ++e)
        if (cl.label[e] != L) dmin = std::min(dmin, std::abs(local(trace_of(rays[e]).endpoint, use_v) - local(P, use_v)));
      const double r1 = 0.25 * dmin, r2 = r1 / 4;
      std::vector<std::pair<double, std::size_t>> o1, o2;
      bool found = true;
      for (auto e : es) {
        auto x = approach(trace_of(rays[e]), P, use_v, r1);
        auto y = approach(trace_of(rays[e]), P, use_v, r2);
        found = found && x && y;
        if (x && y) {
          o1.emplace_back(*x, e);
          o2.emplace_back(*y, e);
        }
      }
      if (!found || cyclic_order(o1) != cyclic_order(o2)) {
        tess.ambiguous = true;
        os << "ray order at the landing of " << angle_of(rays[es[0]]) << " is not stable; ";
      }
      std::sort(o2.begin(), o2.end());
      es.clear();
      for (auto& [ang, e] : o2) es.push_back(e);
    }
    for (auto e : es) rot[R + L].push_back(2 * e + 1);
    if (es.size() >= 2) {
      Vertex v;
      v.landing = P;
      v.kind = trace_of(rays[es[0]]).landing_kind;
      for (auto e : es) {
        v.rays.push_back(RayRef{regs[rays[e].reg]->region, rays[e].idx});
        v.cross_region = v.cross_region || rays[e].reg != rays[es[0]].reg;
      }
      tess.vertices.push_back(v);
    }
  }

  std::vector<std::size_t> pos(2 * rays.size());
  for (std::size_t v = 0; v < V; ++v)
    for (std::size_t k = 0; k < rot[v].size(); ++k) pos[rot[v][k]] = k;
  auto next = [&](std::size_t d) {
    std::size_t back = d ^ 1;
    const auto& list = rot[origin(back)];
    return list[(pos[back] + 1) % list.size()];
  };

  std::vector<std::size_t> parent(V);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t e = 0; e < rays.size(); ++e) parent[find(rays[e].reg)] = find(landing_vertex(e));

  std::vector<bool> seen(2 * rays.size(), false);
  std::vector<std::size_t> walk_component;
  for (std::size_t d0 = 0; d0 < 2 * rays.size(); ++d0) {
    if (seen[d0]) continue;
    Face face;
    std::size_t d = d0;
    while (!seen[d]) {
      seen[d] = true;
      std::size_t n = next(d);
      if (d % 2 == 1) {
        // Corner at a puncture, between the incoming edge and the next one.
        const Ray& in = rays[d / 2];
        const Ray& out = rays[n / 2];
        face.arcs.push_back(Arc{regs[in.reg]->region, angle_of(out), angle_of(in)});
      }
      d = n;
    }
    tess.faces.push_back(face);
    walk_component.push_back(find(origin(d0)));
  }
  for (std::size_t r = 0; r < R; ++r)
    if (rot[r].empty()) {
      tess.faces.push_back(Face{{Arc{regs[r]->region, Angle(0, 1), Angle(0, 1)}}});
      walk_component.push_back(find(r));
    }

  // A face bounded by several components appears once per boundary walk.
  // Each component sits in the outer face of the others (outside every
  // wake), so the outer walks of all components are one face.
  std::size_t components = 0;
  for (std::size_t v = 0; v < V; ++v) components += find(v) == v;
  if (components > 1) {
    std::map<std::size_t, std::vector<std::size_t>> outer_walks;
    for (std::size_t f = 0; f < tess.faces.size(); ++f) {
      bool outer = !tess.faces[f].arcs.empty();
      for (const Arc& arc : tess.faces[f].arcs) {
        const Pairing* p = nullptr;
        for (const Pairing* q : regs)
          if (q->region == arc.region) p = q;
        if (p && in_some_wake(*p, arc_midpoint(arc))) outer = false;
      }
      if (outer) outer_walks[walk_component[f]].push_back(f);
    }
    bool unique = outer_walks.size() == components;
    for (auto& [c, ws] : outer_walks) unique = unique && ws.size() == 1;
    if (!unique) {
      tess.ambiguous = true;
      os << "the ray graph has " << components << " components and their common face is not determined; ";
    } else {
      Face merged;
      std::vector<Face> kept;
      std::vector<bool> is_outer(tess.faces.size(), false);
      for (auto& [c, ws] : outer_walks) is_outer[ws[0]] = true;
      for (std::size_t f = 0; f < tess.faces.size(); ++f) {
        if (!is_outer[f]) {
          kept.push_back(tess.faces[f]);
        } else {
          if (merged.arcs.empty()) kept.emplace_back();
          merged.arcs.insert(merged.arcs.end(), tess.faces[f].arcs.begin(), tess.faces[f].arcs.end());
        }
      }
      for (auto& f : kept)
        if (f.arcs.empty()) f = merged;
      tess.faces = std::move(kept);
      os << "the ray graph has " << components << " components joined through their outer faces; ";
    }
  }
  tess.detail = os.str();
  return tess;
}

template <class T>
Tessellation build_tessellation(Region region, unsigned q, double tol, unsigned threads) {
  Pairing primary = colanding_pairs<T>(region, q, tol, threads);
  std::vector<Pairing> others;
  for (Region r : slice_regions(region))
    if (r != region) others.push_back(colanding_pairs<T>(r, q, tol, threads));
  return build_faces(primary, others, tol);
}

std::optional<std::size_t> face_of(const std::vector<Face>& faces, Region region, const Angle& t) {
  for (std::size_t f = 0; f < faces.size(); ++f)
    for (const Arc& arc : faces[f].arcs)
      if (arc.region == region && arc_contains(arc, t)) return f;
  return std::nullopt;
}

std::vector<FaceSample> face_samples(const Face& face, unsigned count) {
  static const std::pair<long double, double> combos[] = {
      {0.5L, 2.0}, {0.25L, 1.5}, {0.75L, 4.0}, {0.5L, 4.0}, {0.25L, 2.0},
      {0.75L, 1.5}, {0.5L, 1.5}, {0.25L, 4.0}, {0.75L, 2.0}};
  std::vector<FaceSample> out;
  if (face.arcs.empty()) return out;
  const std::size_t n = face.arcs.size();
  for (unsigned k = 0; k < count; ++k) {
    const Arc& arc = face.arcs[k % n];
    auto [frac, rho] = combos[(k / n) % 9];
    long double len = arc.from == arc.to ? 1.0L : arc_length(arc.from, arc.to).to_long_double();
    long double t = arc.from.to_long_double() + frac * len;
    t -= std::floor(t);
    out.push_back({arc.region, rho, t});
  }
  return out;
}

template <class T>
FacePortrait face_portrait(const Tessellation& tess, std::size_t face, unsigned q, unsigned samples,
                           double tol, unsigned threads) {
  FacePortrait out;
  if (face >= tess.faces.size()) {
    out.error = "face index out of range";
    return out;
  }
  out.samples = face_samples(tess.faces[face], std::max(1u, samples));
  std::vector<OrbitPortraitResult> res(out.samples.size());
  std::vector<std::string> errs(out.samples.size());
  parallel_for(
      out.samples.size(),
      [&](std::size_t k) {
        const FaceSample& s = out.samples[k];
        auto p = param_from_coords<T>(s.region, s.rho, s.t, &errs[k]);
        if (!p) {
          res[k].status = PortraitStatus::unresolved;
          return;
        }
        res[k] = orbit_portrait(p->template map<T>(), q, tol, TraceOptions{}, 1);
      },
      threads);
  std::ostringstream os;
  bool all_ok = true;
  for (std::size_t k = 0; k < res.size(); ++k) {
    if (res[k].status != PortraitStatus::ok) {
      all_ok = false;
      os << "sample " << to_string(out.samples[k].region) << " (" << out.samples[k].rho << ", "
         << double(out.samples[k].t) << "): " << to_string(res[k].status) << " " << res[k].detail
         << errs[k] << "; ";
    }
    out.portraits.push_back(res[k].partition);
  }
  if (!all_ok) {
    out.error = "unresolved";
    out.detail = os.str();
    return out;
  }
  out.partition = out.portraits.front();
  for (std::size_t k = 1; k < out.portraits.size(); ++k)
    if (!(out.portraits[k] == out.partition)) {
      out.error = "portrait_varies_in_face";
      os << "samples 0 and " << k << " disagree; ";
    }
  out.detail = os.str();
  out.ok = out.error.empty();
  return out;
}

std::string_view to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::larger: return "larger";
    case Monotonicity::smaller: return "smaller";
    case Monotonicity::equal: return "equal";
    case Monotonicity::incomparable: return "incomparable";
  }
  return "?";
}

template <class T>
MonotonicityResult monotonicity_probe(Region region, const Angle& theta, unsigned q, double tol,
                                      unsigned portrait_q, unsigned threads) {
  MonotonicityResult out;
  out.theta = theta;
  if (coperiod_status(theta, q) == CoperiodStatus::no) {
    out.detail = theta.str() + " is not coperiodic of coperiod " + std::to_string(q);
    return out;
  }
  Tessellation tess = build_tessellation<T>(region, q, tol, threads);
  const auto& E = tess.pairing.edges;
  std::size_t idx = static_cast<std::size_t>(std::find(E.begin(), E.end(), theta) - E.begin());
  auto partner = tess.pairing.partner(idx);
  if (!partner) {
    out.detail = theta.str() + " has no co-landing partner in " + std::string(to_string(region));
    return out;
  }
  out.partner = E[*partner];
  const bool inner_ccw = arc_length(theta, out.partner) < Angle(1, 2);
  std::optional<std::size_t> inner, outer;
  for (std::size_t f = 0; f < tess.faces.size(); ++f)
    for (const Arc& arc : tess.faces[f].arcs) {
      if (arc.region != region) continue;
      if (arc.from == theta) (inner_ccw ? inner : outer) = f;
      if (arc.to == theta) (inner_ccw ? outer : inner) = f;
    }
  if (!inner || !outer) {
    out.detail = "faces next to the ray not found";
    return out;
  }
  out.inner_face = *inner;
  out.outer_face = *outer;
  const unsigned pq = portrait_q ? portrait_q : q;
  out.inner = face_portrait<T>(tess, *inner, pq, 5, tol, threads);
  out.outer = face_portrait<T>(tess, *outer, pq, 5, tol, threads);
  if (!out.inner.ok || !out.outer.ok) {
    out.detail = "inner: " + out.inner.error + " " + out.inner.detail + " outer: " + out.outer.error +
                 " " + out.outer.detail;
    return out;
  }
  const auto& a = out.inner.partition;
  const auto& b = out.outer.partition;
  if (a == b) out.relation = Monotonicity::equal;
  else if (is_subpartition(b, a)) out.relation = Monotonicity::larger;
  else if (is_subpartition(a, b)) out.relation = Monotonicity::smaller;
  else out.relation = Monotonicity::incomparable;
  out.ok = true;
  return out;
}

Correspondence compare_tessellations(const Tessellation& a, const Tessellation& b) {
  Correspondence out;
  auto leaves = [](const Pairing& p) {
    std::vector<std::pair<Angle, Angle>> v;
    for (auto [i, j] : p.pairs) v.emplace_back(p.edges[i], p.edges[j]);
    std::sort(v.begin(), v.end());
    return v;
  };
  auto la = leaves(a.pairing), lb = leaves(b.pairing);
  std::set_difference(la.begin(), la.end(), lb.begin(), lb.end(), std::back_inserter(out.only_first));
  std::set_difference(lb.begin(), lb.end(), la.begin(), la.end(), std::back_inserter(out.only_second));
  out.same_pairs = out.only_first.empty() && out.only_second.empty();

  auto fa = circular_faces(a.pairing), fb = circular_faces(b.pairing);
  // Probe angles: midpoints between consecutive edges of either pairing.
  std::vector<Angle> cuts = a.pairing.edges;
  cuts.insert(cuts.end(), b.pairing.edges.begin(), b.pairing.edges.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Angle> probes;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    Angle len = cuts.size() == 1 ? Angle(0, 1) : arc_length(cuts[i], cuts[(i + 1) % cuts.size()]);
    probes.push_back(cuts.size() == 1 ? cuts[i] + Angle(1, 2) : cuts[i] + len.preimage(2, 0));
  }
  out.same_faces = true;
  for (std::size_t i = 0; i < probes.size(); ++i)
    for (std::size_t j = i + 1; j < probes.size(); ++j)
      out.same_faces = out.same_faces &&
                       ((face_of(fa, a.region, probes[i]) == face_of(fa, a.region, probes[j])) ==
                        (face_of(fb, b.region, probes[i]) == face_of(fb, b.region, probes[j])));
  for (const auto* t : {&a, &b})
    for (const auto& v : t->vertices)
      if (v.cross_region) out.four_ray.push_back(v);
  return out;
}

#define CUBICSLICE_INSTANTIATE(T)                                                                   \
  template Pairing colanding_pairs<T>(Region, unsigned, double, unsigned);                          \
  template Tessellation build_tessellation<T>(Region, unsigned, double, unsigned);                  \
  template FacePortrait face_portrait<T>(const Tessellation&, std::size_t, unsigned, unsigned,      \
                                         double, unsigned);                                         \
  template MonotonicityResult monotonicity_probe<T>(Region, const Angle&, unsigned, double,         \
                                                    unsigned, unsigned);

CUBICSLICE_INSTANTIATE(double)
CUBICSLICE_INSTANTIATE(long double)

}  // namespace cubicslice
