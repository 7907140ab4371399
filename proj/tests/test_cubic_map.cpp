#include "doctest.h"

#include <random>

#include "cubicslice/cubic_map.hpp"

using namespace cubicslice;
using C = std::complex<double>;

TEST_CASE("evaluation identities") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 20; ++i) {
    CubicMap<double> f{C(u(rng), u(rng)), C(u(rng), u(rng))};
    CHECK(std::abs(f(f.a) - f.v) < 1e-12 * (1 + std::norm(f.a) * std::abs(f.a)));
    CHECK(std::abs(f.derivative(f.a)) < 1e-12);
    CHECK(std::abs(f.derivative(-f.a)) < 1e-12);
    CHECK(std::abs(f(f.cocritical()) - f(-f.a)) < 1e-10 * (1 + std::pow(std::abs(f.a), 3)));
  }
  CubicMap<double> z3{};
  CHECK(z3(C(2)) == C(8));
  CubicMap<double> g{C(1), C(0.5, 1)};
  CHECK(std::abs(g(C(-1)) - (C(4) + g.v)) < 1e-14);
}

TEST_CASE("escape classification") {
  CubicMap<double> z3{};
  auto e = escape_classification(z3, C(2), 10);
  CHECK(e.escaped);
  CHECK(e.steps <= 2);
  CHECK_FALSE(escape_classification(z3, C(0.5), 100).escaped);
}

TEST_CASE("far Boettcher and Green") {
  CubicMap<double> z3{};
  auto b = boettcher_external(z3, C(1.5, 0.7));
  REQUIRE(b.status == BoettcherStatus::ok);
  CHECK(std::abs(b.value - C(1.5, 0.7)) < 1e-12);
  CHECK(*green(z3, C(2)) == doctest::Approx(std::log(2.0)));

  CubicMap<double> f{C(0.4, 0.3), C(-0.2, 0.5)};
  for (C z : {C(3, 1), C(-2, 2.5), C(0.1, -2.2), C(1.3, 1.3)}) {
    CAPTURE(z);
    auto bz = boettcher_external(f, z);
    auto bfz = boettcher_external(f, f(z));
    REQUIRE(bz.status == BoettcherStatus::ok);
    REQUIRE(bfz.status == BoettcherStatus::ok);
    CHECK(std::abs(std::pow(bz.value, 3) - bfz.value) < 1e-9 * std::abs(bfz.value));
  }
  // Tangent to the identity at infinity.
  auto far = boettcher_external(f, C(1e4, 3e3));
  CHECK(std::abs(far.value / C(1e4, 3e3) - 1.0) < 1e-6);
}

TEST_CASE("Boettcher undefined below the critical level") {
  // Real map with escaping -a: points near -a at lower potential are rejected.
  CubicMap<double> f{C(1.5), C(1.5)};
  REQUIRE(green(f, -f.a).has_value());
  auto r = boettcher_external(f, C(0));
  CHECK(r.status == BoettcherStatus::undefined_here);
  auto bounded = boettcher_external(f, f.a);
  CHECK(bounded.status == BoettcherStatus::bounded);
  // The cocritical point sits on the critical level and is allowed.
  auto c = boettcher_external(f, f.cocritical());
  REQUIRE(c.status == BoettcherStatus::ok);
  CHECK(c.value.real() > 1);
  CHECK(std::abs(c.value.imag()) < 1e-9);
}
