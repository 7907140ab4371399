#include <sstream>

#include "cubicslice/io.hpp"
#include "doctest.h"

using namespace cubicslice;

TEST_CASE("angles serialize as exact fractions") {
  CHECK(to_json(Angle(2, 8)) == "1/4");
  CHECK(angle_from_json(Json("5/24")) == Angle(5, 24));
  CHECK(to_json(periodic_angles(2, 3)).size() == 6);
}

TEST_CASE("lamination round trip") {
  Lamination lam = basilica_lamination(3);
  Json j = to_json(lam);
  CHECK(j["leaves"][0] == Json::array({"1/3", "2/3"}));
  Lamination back = lamination_from_json(j);
  CHECK(back.leaves == lam.leaves);
  CHECK(back.generation == lam.generation);
  CHECK(back.depth == lam.depth);
}

TEST_CASE("partition round trip") {
  AngleSet ground(std::vector<Angle>{Angle(1, 8), Angle(1, 4), Angle(3, 8), Angle(3, 4)});
  AnglePartition p(ground, {{Angle(1, 8), Angle(1, 4)}, {Angle(3, 8), Angle(3, 4)}});
  Json j = to_json(p);
  CHECK(j.size() == 2);
  CHECK(partition_from_json(j) == p);
}

TEST_CASE("slice point round trip") {
  SlicePoint p = s2_point(lcplx(2, 0.5), Sheet::minus);
  SlicePoint q = slice_point_from_json(Json::parse(to_json(p).dump()));
  CHECK(q.slice == Slice::S2);
  CHECK(q.sheet == Sheet::minus);
  CHECK(std::abs(q.a - p.a) < 1e-15L);
  CHECK(std::abs(q.v - p.v) < 1e-15L);
}

TEST_CASE("ray trace samples are [re, im, potential] triples") {
  CubicMap<double> f{{0, 0}, {0, 0}};
  RayTrace tr = trace_dynamical_ray<double>(f, Angle(1, 4));
  Json j = to_json(tr);
  CHECK(j["angle"] == "1/4");
  CHECK(j["status"] == "landed");
  REQUIRE(!j["samples"].empty());
  CHECK(j["samples"][0].size() == 3);
  CHECK(!to_json(tr, false).contains("samples"));
}

TEST_CASE("landing table has one row per ray") {
  ParamRayTrace a, b;
  a.angle = Angle(1, 24);
  b.angle = Angle(1, 12);
  b.region = Region::E2B;
  std::ostringstream os;
  write_landings_csv(os, {a, b});
  std::string s = os.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == 3);
  CHECK(s.find("E2B,1,12,") != std::string::npos);
}
