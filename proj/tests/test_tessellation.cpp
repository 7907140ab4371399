#include <algorithm>

#include "cubicslice/tessellation.hpp"
#include "doctest.h"

using namespace cubicslice;

namespace {

using Classes = std::vector<std::vector<Angle>>;

Classes nontrivial(const AnglePartition& p) { return p.nontrivial_classes(); }

}  // namespace

TEST_CASE("coperiod-2 rays of E1 pair into six leaves and seven faces") {
  auto tess = build_tessellation<double>(Region::E1, 2);
  CHECK(tess.pairing.edges.size() == 12);
  CHECK(tess.pairing.pairs.size() == 6);
  CHECK(tess.pairing.unresolved.empty());
  CHECK(tess.faces.size() == 7);
  CHECK(!tess.ambiguous);
  auto idx = std::find(tess.pairing.edges.begin(), tess.pairing.edges.end(), Angle(1, 24)) -
             tess.pairing.edges.begin();
  auto partner = tess.pairing.partner(static_cast<std::size_t>(idx));
  REQUIRE(partner);
  CHECK(tess.pairing.edges[*partner] == Angle(1, 12));
}

TEST_CASE("S2 faces are cut by rays of both escape regions") {
  auto tess = build_tessellation<double>(Region::E2B, 2);
  CHECK(tess.pairing.pairs.size() == 6);
  REQUIRE(tess.others.size() == 1);
  CHECK(tess.others[0].region == Region::E2D);
  CHECK(tess.faces.size() == 16);
  CHECK(!tess.ambiguous);
  std::size_t four_ray = 0;
  for (const auto& v : tess.vertices) four_ray += v.cross_region && v.rays.size() == 4;
  CHECK(four_ray == 4);
}

TEST_CASE("portrait is constant on a wake face") {
  auto tess = build_tessellation<double>(Region::E1, 2);
  auto f = face_of(tess.faces, Region::E1, Angle(1, 16));
  REQUIRE(f);
  auto fp = face_portrait<double>(tess, *f, 2);
  REQUIRE(fp.ok);
  Classes expect{{Angle(1, 8), Angle(1, 4)}, {Angle(3, 8), Angle(3, 4)}};
  CHECK(nontrivial(fp.partition) == expect);

  CHECK(!face_of(tess.faces, Region::E1, Angle(1, 24)));
  auto o = face_of(tess.faces, Region::E1, Angle(0, 1));
  REQUIRE(o);
  CHECK(face_of(tess.faces, Region::E1, Angle(1, 2)) == o);
  auto op = face_portrait<double>(tess, *o, 2);
  REQUIRE(op.ok);
  CHECK(nontrivial(op.partition).empty());
}

TEST_CASE("crossing into a wake refines the portrait") {
  auto m = monotonicity_probe<double>(Region::E2B, Angle(1, 24), 2);
  REQUIRE(m.ok);
  CHECK(m.partner == Angle(1, 12));
  CHECK(m.relation == Monotonicity::larger);
}

TEST_CASE("E1 and E2B tessellations correspond at coperiod 2") {
  auto a = build_tessellation<double>(Region::E1, 2);
  auto b = build_tessellation<double>(Region::E2B, 2);
  auto c = compare_tessellations(a, b);
  CHECK(c.same_pairs);
  CHECK(c.same_faces);
  CHECK(c.only_first.empty());
  CHECK(c.only_second.empty());
}

TEST_CASE("circular faces of a pairing") {
  Pairing p;
  p.region = Region::E1;
  p.q = 2;
  p.edges = {Angle(1, 24), Angle(1, 12), Angle(5, 24), Angle(7, 24)};
  p.pairs = {{0, 1}, {2, 3}};
  auto faces = circular_faces(p);
  CHECK(faces.size() == 3);
  auto f = face_of(faces, Region::E1, Angle(1, 2));
  REQUIRE(f);
  CHECK(faces[*f].arcs.size() == 2);
}
