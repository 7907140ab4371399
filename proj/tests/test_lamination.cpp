#include "doctest.h"

#include <numeric>
#include <set>

#include "cubicslice/lamination.hpp"

using namespace cubicslice;

namespace {
Leaf L(int p, int q, int r, int s) { return Leaf(Angle(p, q), Angle(r, s)); }

bool quadratic_unlinked(const std::vector<Leaf>& ls) {
  for (std::size_t i = 0; i < ls.size(); ++i)
    for (std::size_t j = i + 1; j < ls.size(); ++j)
      if (!unlinked(ls[i], ls[j])) return false;
  return true;
}

AnglePartition a2_with(std::vector<std::vector<Angle>> classes) {
  return AnglePartition(periodic_angles(2, 3), std::move(classes));
}
}  // namespace

TEST_CASE("unlinked") {
  CHECK(unlinked(L(1, 3, 2, 3), L(1, 6, 5, 6)));
  CHECK_FALSE(unlinked(L(1, 3, 2, 3), L(1, 12, 5, 12)));
  CHECK(unlinked(L(1, 3, 2, 3), L(1, 3, 2, 3)));
  CHECK(unlinked(L(1, 3, 2, 3), L(2, 3, 5, 6)));
  CHECK_THROWS(Leaf(Angle(1, 3), Angle(1, 3)));
}

TEST_CASE("sweep agrees with pairwise oracle") {
  std::vector<Leaf> good{L(1, 3, 2, 3), L(2, 3, 5, 6), L(1, 6, 5, 6), L(1, 12, 1, 6), L(1, 3, 2, 3)};
  CHECK(pairwise_unlinked(good));
  CHECK(quadratic_unlinked(good));
  std::vector<Leaf> bad = good;
  bad.push_back(L(1, 4, 3, 4));
  CHECK_FALSE(pairwise_unlinked(bad));
  CHECK_FALSE(quadratic_unlinked(bad));
}

TEST_CASE("basilica lamination small depths") {
  auto l0 = basilica_lamination(0);
  REQUIRE(l0.leaves.size() == 1);
  CHECK(l0.leaves[0] == L(1, 3, 2, 3));
  auto l1 = basilica_lamination(1);
  CHECK(std::set<Leaf>(l1.leaves.begin(), l1.leaves.end()) ==
        std::set<Leaf>{L(1, 3, 2, 3), L(1, 6, 5, 6)});
  auto l2 = basilica_lamination(2);
  std::set<Leaf> s2(l2.leaves.begin(), l2.leaves.end());
  CHECK(s2.size() == 4);
  CHECK(s2.count(L(1, 12, 11, 12)));
  CHECK(s2.count(L(5, 12, 7, 12)));
}

TEST_CASE("basilica lamination invariants") {
  for (unsigned d = 0; d <= 10; ++d) {
    CAPTURE(d);
    auto lam = basilica_lamination(d);
    CHECK(quadratic_unlinked(lam.leaves));
  }
  auto lam = basilica_lamination(14);
  CHECK(lam.leaves.size() == (1u << 14));
  CHECK(pairwise_unlinked(lam.leaves));
  std::set<Leaf> by_gen[15];
  for (std::size_t i = 0; i < lam.leaves.size(); ++i) by_gen[lam.generation[i]].insert(lam.leaves[i]);
  CHECK(L(1, 3, 2, 3).doubled() == L(1, 3, 2, 3));
  for (unsigned g = 1; g <= 14; ++g)
    for (const Leaf& l : by_gen[g]) REQUIRE(by_gen[g - 1].count(l.doubled()));
}

TEST_CASE("basilica partner") {
  CHECK(basilica_partner(Angle(1, 3)) == Angle(2, 3));
  CHECK(basilica_partner(Angle(1, 6)) == Angle(5, 6));
  CHECK(basilica_partner(Angle(1, 12)) == Angle(11, 12));
  CHECK_THROWS_AS(basilica_partner(Angle(1, 8)), std::invalid_argument);

  auto lam = basilica_lamination(14);
  std::set<Leaf> leaves(lam.leaves.begin(), lam.leaves.end());
  const std::int64_t den = 3 * (1 << 12);
  std::size_t count = 0;
  for (std::int64_t k = 0; k < den; ++k) {
    Angle t(k, den);
    if (!is_basilica_angle(t)) continue;
    ++count;
    Angle p = basilica_partner(t);
    REQUIRE(p != t);
    REQUIRE(basilica_partner(p) == t);
    REQUIRE(leaves.count(Leaf(t, p)));
  }
  // Each leaf up to generation 12 contributes two endpoints.
  CHECK(count == 2 * (1u << 12));
}

TEST_CASE("basilica index against orbit simulation") {
  for (std::int64_t den = 1; den <= 3 * (1 << 7); ++den) {
    for (std::int64_t num = 0; num < den; ++num) {
      if (std::gcd(num, den) != 1 && !(num == 0 && den == 1)) continue;
      // Simulate with machine integers; the orbit is eventually periodic.
      std::int64_t x = num;
      bool hits = false;
      for (int i = 0; i < 64; ++i) {
        if (3 * x == den || 3 * x == 2 * den) hits = true;
        x = (2 * x) % den;
      }
      REQUIRE(is_basilica_angle(Angle(num, den)) == hits);
    }
  }
}

TEST_CASE("partitions") {
  auto disc = AnglePartition::discrete(periodic_angles(2, 3));
  auto p = a2_with({{Angle(2, 8), Angle(6, 8)}});
  auto q = a2_with({{Angle(1, 8), Angle(2, 8), Angle(3, 8), Angle(6, 8)}});
  CHECK(is_subpartition(disc, p));
  CHECK(is_subpartition(p, p));
  CHECK(is_subpartition(p, q));
  CHECK_FALSE(is_subpartition(q, p));
  CHECK(p.same_class(Angle(6, 8), Angle(2, 8)));
  CHECK(p.classes().front().front() == Angle(1, 8));
  CHECK_THROWS(is_subpartition(disc, AnglePartition::discrete(periodic_angles(1, 3))));
  CHECK_THROWS(a2_with({{Angle(1, 8)}, {Angle(1, 8), Angle(3, 8)}}));
}

TEST_CASE("predicted psi portrait") {
  auto disc = AnglePartition::discrete(periodic_angles(2, 3));
  auto at0 = predicted_psi_portrait(disc, 2, Angle());
  CHECK(at0 == a2_with({{Angle(2, 8), Angle(6, 8)}}));
  auto in_w = predicted_psi_portrait(disc, 2, Angle(1, 16));
  CHECK(in_w == a2_with({{Angle(1, 8), Angle(2, 8), Angle(3, 8), Angle(6, 8)}}));
  auto a3 = AnglePartition::discrete(periodic_angles(3, 3));
  CHECK(predicted_psi_portrait(a3, 3, Angle(1, 7)) == a3);
  CHECK_THROWS_AS(predicted_psi_portrait(disc, 2, Angle(1, 24)), std::invalid_argument);

  // Two alpha pairs exactly on the W intervals.
  for (int k = 0; k < 240; ++k) {
    Angle t(2 * k + 1, 480);
    if (coperiod_status(t, 2) != CoperiodStatus::no) continue;
    CAPTURE(t);
    std::size_t n = alpha_pairs(t).size();
    CHECK(n >= 1);
    CHECK((n == 2) == (w_interval(t) != 0));
    CHECK(is_subpartition(disc, predicted_psi_portrait(disc, 2, t)));
  }
  CHECK(w_interval(Angle(1, 16)) == 1);
  CHECK(w_interval(Angle(1, 24)) == 0);
}
