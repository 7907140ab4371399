#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubicslice/lamination.hpp"
#include "cubicslice/ray_trace.hpp"
#include "cubicslice/slice.hpp"

namespace cubicslice {

// Co-landing structure of the coperiod-q parameter rays of one region.
struct Pairing {
  Region region = Region::E1;
  unsigned q = 0;
  std::vector<Angle> edges;                              // sorted
  std::vector<ParamRayTrace> traces;                     // parallel to edges
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // indices into edges
  std::vector<std::size_t> unpaired;
  std::vector<std::vector<std::size_t>> clusters;  // more than two rays at one landing
  std::vector<std::size_t> unresolved;             // rays that did not land
  bool ambiguous = false;                          // a distance fell in (tol, 10 tol]
  std::string detail;

  std::optional<std::size_t> partner(std::size_t i) const;
};

template <class T>
Pairing colanding_pairs(Region region, unsigned q, double tol = 1e-6, unsigned threads = 0);

// Open circular arc (from, to), counterclockwise, at the puncture of an
// escape region. from == to is the full circle minus that angle.
struct Arc {
  Region region = Region::E1;
  Angle from, to;
};

struct Face {
  std::vector<Arc> arcs;
};

struct RayRef {
  Region region = Region::E1;
  std::size_t index = 0;  // into that region's edges
  friend bool operator==(const RayRef&, const RayRef&) = default;
};

struct Vertex {
  std::vector<RayRef> rays;  // all rays landing here, in counterclockwise order
  SlicePoint landing;
  std::string kind;          // landing kind of the first ray
  bool cross_region = false;
};

// Faces of the slice cut by the coperiod-q rays of all its escape regions:
// E1 for S1, E2B and E2D for S2. `pairing` is the requested region.
struct Tessellation {
  Region region = Region::E1;
  unsigned q = 0;
  Pairing pairing;
  std::vector<Pairing> others;
  std::vector<Face> faces;
  std::vector<Vertex> vertices;  // landing points of two or more rays
  bool ambiguous = false;        // vertex order or face gluing not determined
  std::string detail;

  const Pairing& pairing_of(Region r) const;
};

// Throws std::invalid_argument when rays of one region cross.
Tessellation build_faces(const Pairing& pairing, const std::vector<Pairing>& others = {},
                         double tol = 1e-6);

template <class T>
Tessellation build_tessellation(Region region, unsigned q, double tol = 1e-6, unsigned threads = 0);

// Faces of the circle cut by the co-landing pairs of one region alone.
std::vector<Face> circular_faces(const Pairing& pairing);

// Face with an arc of `region` strictly containing t; nullopt on an edge.
std::optional<std::size_t> face_of(const std::vector<Face>& faces, Region region, const Angle& t);

struct FaceSample {
  Region region = Region::E1;
  double rho = 2;
  long double t = 0;
};

// Parameters spread through a face: midpoint and quartiles of each arc at
// rho in {1.5, 2, 4}, in round-robin order over the arcs.
std::vector<FaceSample> face_samples(const Face& face, unsigned count);

struct FacePortrait {
  bool ok = false;
  AnglePartition partition;
  std::vector<FaceSample> samples;
  std::vector<AnglePartition> portraits;  // parallel to samples
  std::string error;                      // "portrait_varies_in_face" on disagreement
  std::string detail;
};

template <class T>
FacePortrait face_portrait(const Tessellation& tess, std::size_t face, unsigned q,
                           unsigned samples = 5, double tol = 1e-6, unsigned threads = 0);

enum class Monotonicity { larger, smaller, equal, incomparable };
std::string_view to_string(Monotonicity m);

struct MonotonicityResult {
  bool ok = false;
  Monotonicity relation = Monotonicity::incomparable;  // inner portrait relative to outer
  Angle theta, partner;
  std::size_t inner_face = 0, outer_face = 0;
  FacePortrait inner, outer;
  std::string detail;
};

// Compares the portraits on the two sides of the ray theta. The inner side is
// the shorter arc between theta and its co-landing partner (the wake side).
template <class T>
MonotonicityResult monotonicity_probe(Region region, const Angle& theta, unsigned q,
                                      double tol = 1e-6, unsigned portrait_q = 0,
                                      unsigned threads = 0);

// Two regions' pairings on the same edge set: same leaves, and the circular
// faces group edge-free angles alike. Four-ray clusters are listed.
struct Correspondence {
  bool same_pairs = false;
  bool same_faces = false;
  std::vector<std::pair<Angle, Angle>> only_first, only_second;
  std::vector<Vertex> four_ray;  // cross-region landings in either tessellation
};
Correspondence compare_tessellations(const Tessellation& a, const Tessellation& b);

}  // namespace cubicslice
