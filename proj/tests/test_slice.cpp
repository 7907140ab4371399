#include "doctest.h"

#include <cmath>
#include <random>

#include "cubicslice/slice.hpp"

using namespace cubicslice;
using C = std::complex<double>;

namespace {

Angle A(const char* s) { return Angle::parse(s); }

// f(z) - f(a) = (z - a)^2 (z + 2a); the cocritical orbit closes up when
// f(v) = v, i.e. dividing v^3 - 3a^2 v + 2a^3 + v - v by (v - a) leaves
// v^2 + a v - 2a^2 + 1 once the constant term is restored.
lcplx s2_residual(lcplx a, lcplx v) { return v * v + a * v + 1.0L - 2.0L * a * a; }

}  // namespace

TEST_CASE("S2 defining equation matches period two of the critical point") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 1000; ++i) {
    lcplx a(u(rng), u(rng));
    for (const auto& p : s2_points(a)) {
      CHECK(std::abs(s2_residual(a, p.v)) < 1e-12L * (1 + std::norm(a)));
      // f(f(a)) = a with f(a) = v and v != a
      auto f = p.map<long double>();
      if (!p.branch_point && std::abs(p.v - a) > 1e-6L) {
        CHECK(std::abs(f(f.v) - f.a) < 1e-9L * (1 + std::pow(std::abs(a), 3.0L)));
      }
    }
    auto pp = s2_point(a, Sheet::plus), pm = s2_point(a, Sheet::minus);
    CHECK(std::abs(pp.v + pm.v + a) < 1e-12L * (1 + std::abs(a)));
  }
}

TEST_CASE("S2 sheets near infinity and at the branch points") {
  lcplx a(50, 20);
  auto pp = s2_point(a, Sheet::plus), pm = s2_point(a, Sheet::minus);
  CHECK(std::abs(pp.v - (a - 1.0L / (3.0L * a))) < 1e-4L);
  CHECK(std::abs(pm.v + 2.0L * a) < 1e-1L);
  CHECK(s2_points(lcplx(2.0L / 3, 0)).size() == 1);
  CHECK(s2_points(lcplx(-2.0L / 3, 0)).size() == 1);
  CHECK(std::abs(s2_root(0) - lcplx(0, 2)) < 1e-15L);
}

TEST_CASE("S2 monodromy: one loop around 2/3 swaps the sheets") {
  lcplx centre(2.0L / 3, 0);
  long double r = 0.1L;
  auto p = s2_point(centre + r, Sheet::plus);
  lcplx v = p.v;
  const int n = 2000;
  for (int k = 1; k <= n; ++k) {
    lcplx a = centre + std::polar(r, 2 * M_PIl * k / n);
    v = s2_continue(a, v).v;
  }
  auto q = s2_point(centre + r, Sheet::minus);
  CHECK(std::abs(v - q.v) < 1e-12L);
  CHECK(std::abs(v - p.v) > 1e-2L);
}

TEST_CASE("S1 and the region checks of Phi") {
  auto p = s1(lcplx(0.1, 0));
  CHECK(p.v == p.a);
  auto r = phi<double>(Region::E1, p);
  CHECK(!r.ok);
  CHECK(!phi<double>(Region::E2B, p).ok);
}

TEST_CASE("Phi round trips through param_from_coords") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ur(1.2, 40), ut(0, 1);
  for (Region reg : {Region::E1, Region::E2B, Region::E2D}) {
    for (int i = 0; i < 17; ++i) {
      double rho = ur(rng), t = ut(rng);
      std::string err;
      auto p = param_from_coords<double>(reg, rho, static_cast<long double>(t), &err);
      REQUIRE_MESSAGE(p, err);
      auto v = phi<double>(reg, *p);
      REQUIRE_MESSAGE(v.ok, v.error);
      C want = std::polar(rho, 2 * M_PI * t);
      CHECK(std::abs(v.value - want) < 1e-9 * rho);
    }
  }
  auto e = param_from_coords<double>(Region::E1, 64, A("0"));
  REQUIRE(e);
  CHECK(std::abs(e->a_d() - C(40.3154, 0)) < 1e-3);
}

TEST_CASE("psi preserves Phi coordinates") {
  for (const char* s : {"0", "1/16", "2/7", "5/12"}) {
    auto p = param_from_coords<double>(Region::E1, 3.0, A(s));
    REQUIRE(p);
    std::string err;
    auto q = psi<double>(*p, &err);
    REQUIRE_MESSAGE(q, err);
    CHECK(q->slice == Slice::S2);
    auto v = phi<double>(Region::E2B, *q);
    REQUIRE(v.ok);
    CHECK(std::abs(v.value - phi<double>(Region::E1, *p).value) < 1e-9);
  }
}

TEST_CASE("w_region") {
  CHECK(w_region(A("1/16")).label == 1);
  CHECK(w_region(A("7/16")).label == 2);
  CHECK(w_region(A("9/16")).label == 3);
  CHECK(w_region(A("15/16")).label == 4);
  CHECK(w_region(A("0")).label == 0);
  CHECK(w_region(A("1/24")).label == 0);
  CHECK(w_region(A("1/4")).label == 0);
}

TEST_CASE("classifier separates E2B from E2D") {
  ClassifyOptions o;
  o.resolution = 512;
  for (const char* s : {"0", "1/5", "3/4"}) {
    auto b = param_from_coords<double>(Region::E2B, 2.0, A(s));
    auto d = param_from_coords<double>(Region::E2D, 2.0, A(s));
    REQUIRE(b);
    REQUIRE(d);
    CHECK(classify_escape_s2<double>(*b, o).cls == EscapeClass::E2B);
    CHECK(classify_escape_s2<double>(*d, o).cls == EscapeClass::E2D);
  }
  // the basilica centre: both critical points bounded
  auto in = s2_point(lcplx(0, 0), Sheet::plus);
  CHECK(classify_escape_s2<double>(in, o).cls == EscapeClass::not_escape);
}
