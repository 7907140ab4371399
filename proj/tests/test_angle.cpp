#include "doctest.h"

#include <set>
#include <sstream>

#include "cubicslice/angle.hpp"

using namespace cubicslice;

namespace {
AngleSet over(unsigned den, std::initializer_list<int> nums) {
  std::vector<Angle> v;
  for (int n : nums) v.emplace_back(std::int64_t(n), std::int64_t(den));
  return AngleSet(v);
}
}  // namespace

TEST_CASE("angle reduction and parsing") {
  CHECK(Angle(6, 8) == Angle(3, 4));
  CHECK(Angle(-1, 3) == Angle(2, 3));
  CHECK(Angle(5, 4) == Angle(1, 4));
  CHECK(Angle(7, 7).is_zero());
  CHECK(Angle::parse(" 2/6 ") == Angle(1, 3));
  CHECK(Angle::parse("0") == Angle());
  CHECK_THROWS_AS(Angle::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Angle::parse("a/3"), std::invalid_argument);
  CHECK_THROWS_AS(Angle::parse(""), std::invalid_argument);
  CHECK(Angle(1, 3).str() == "1/3");
  CHECK(Angle(1, 8).to_double() == doctest::Approx(0.125));
}

TEST_CASE("arithmetic mod 1") {
  CHECK(Angle(2, 3) + Angle(2, 3) == Angle(1, 3));
  CHECK(Angle(1, 8) - Angle(1, 3) == Angle(19, 24));
  CHECK(Angle(1, 8).times(3) == Angle(3, 8));
  CHECK(Angle(3, 8).times(3) == Angle(1, 8));
  CHECK(Angle(1, 3).preimage(3, 2) == Angle(7, 9));
  CHECK(Angle(1, 4) < Angle(1, 3));
}

TEST_CASE("periods and orbit types") {
  CHECK(exact_period(Angle(1, 8), 3) == 2u);
  CHECK_FALSE(exact_period(Angle(1, 6), 2).has_value());
  CHECK(exact_period(Angle(), 3) == 1u);
  CHECK(exact_period(Angle(1, 13), 3) == 3u);
  CHECK(orbit_type(Angle(1, 6), 2) == OrbitType{1, 2});
  CHECK(orbit_type(Angle(1, 24), 3) == OrbitType{1, 2});
  CHECK(orbit_type(Angle(5, 12), 2) == OrbitType{2, 2});
}

TEST_CASE("periodic angles match Mobius counts") {
  CHECK(periodic_angles(2, 3) == over(8, {1, 2, 3, 5, 6, 7}));
  CHECK(periodic_angles(1, 3) == over(2, {0, 1}));
  for (unsigned q = 1; q <= 8; ++q) {
    CAPTURE(q);
    CHECK(periodic_angles(q, 3).size() == mobius_count(q, 3));
  }
  CHECK(mobius_count(2, 3) == 6);
  CHECK(mobius_count(3, 3) == 24);
  CHECK(mobius_count(6, 3) == 696);
  CHECK(mobius_count(4, 2) == 12);
}

TEST_CASE("coperiod") {
  CHECK(coperiod_status(Angle(1, 24), 2) == CoperiodStatus::via_plus);
  CHECK(coperiod_status(Angle(11, 24), 2) == CoperiodStatus::via_minus);
  CHECK(coperiod_status(Angle(), 2) == CoperiodStatus::no);
  CHECK(coperiod_status(Angle(1, 6), 1) == CoperiodStatus::via_plus);
  CHECK(coperiod(Angle(13, 24)) == 2u);
  CHECK_FALSE(coperiod(Angle(1, 4)).has_value());
  CHECK(coperiodic_angles(2) == over(24, {1, 2, 5, 7, 10, 11, 13, 14, 17, 19, 22, 23}));
  CHECK(coperiodic_angles(1) == over(6, {1, 2, 4, 5}));
  CHECK(coperiodic_angles(3).size() == 48);
  CHECK(to_string(CoperiodStatus::both) == "both");
}

TEST_CASE("basilica angles") {
  CHECK(basilica_index(Angle(1, 3)) == 0u);
  CHECK(basilica_index(Angle(2, 3)) == 1u);
  CHECK(basilica_index(Angle(5, 6)) == 2u);
  CHECK(basilica_index(Angle(1, 6)) == 1u);
  CHECK_FALSE(basilica_index(Angle(1, 8)).has_value());
  CHECK_FALSE(is_basilica_angle(Angle(1, 7)));
}

TEST_CASE("arcs") {
  Angle lo(7, 8), hi(1, 8);
  CHECK(in_arc(Angle(), lo, hi));
  CHECK_FALSE(in_arc(Angle(1, 2), lo, hi));
  CHECK_FALSE(in_arc(lo, lo, hi));
  CHECK(in_arc(lo, lo, hi, {true, false}));
  CHECK(in_arc(hi, lo, hi, {false, true}));
  CHECK(arc_length(lo, hi) == Angle(1, 4));
}

TEST_CASE("csv output") {
  std::ostringstream os;
  write_csv(os, over(8, {1, 3}));
  CHECK(os.str() == "numerator,denominator,decimal\n1,8,0.125000000000\n3,8,0.375000000000\n");
}

TEST_CASE("no angle is coperiodic via both") {
  for (unsigned q = 1; q <= 6; ++q) {
    CAPTURE(q);
    for (const Angle& t : coperiodic_angles(q)) REQUIRE(coperiod_status(t, q) != CoperiodStatus::both);
  }
}

TEST_CASE("periodic sets are disjoint") {
  for (unsigned d : {2u, 3u}) {
    std::set<Angle> seen;
    std::size_t total = 0;
    for (unsigned q = 1; q <= 8; ++q) {
      auto a = periodic_angles(q, d);
      total += a.size();
      seen.insert(a.begin(), a.end());
      CHECK(a.size() == mobius_count(q, d));
    }
    CHECK(seen.size() == total);
  }
}
