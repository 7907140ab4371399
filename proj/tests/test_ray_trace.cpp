#include "doctest.h"

#include <cmath>

#include "cubicslice/ray_trace.hpp"
#include "cubicslice/slice.hpp"

using namespace cubicslice;
using C = std::complex<double>;

namespace {

CubicMap<double> cube() { return {C(0, 0), C(0, 0)}; }

Angle A(const char* s) { return Angle::parse(s); }

}  // namespace

TEST_CASE("rays of z^3 are radial") {
  auto f = cube();
  for (const char* s : {"0", "1/2", "1/8", "3/26"}) {
    Angle t = A(s);
    auto r = trace_dynamical_ray(f, t);
    REQUIRE(r.status == RayStatus::landed);
    double th = 2 * M_PI * t.to_double();
    CHECK(std::abs(r.endpoint - std::polar(1.0, th)) < 1e-8);
    for (const auto& smp : r.samples) {
      CHECK(std::abs(std::log(std::abs(smp.z)) - smp.potential) < 1e-9);
      C u = smp.z / std::polar(1.0, th);
      CHECK(std::abs(std::arg(u)) < 1e-9);
    }
  }
}

TEST_CASE("ray samples satisfy f(R_t) = R_{3t}") {
  auto p = param_from_coords<double>(Region::E1, 2.0, A("0"));
  REQUIRE(p);
  auto f = p->map<double>();
  auto r = trace_dynamical_ray(f, A("1/8"));
  auto r3 = trace_dynamical_ray(f, A("3/8"));
  REQUIRE(r.samples.size() > 10);
  // B is only defined above the critical level G(-a)
  double gc = critical_green(f);
  int checked = 0;
  for (const auto& s : r.samples) {
    if (3 * s.potential < 1.05 * gc || s.potential > 1.5) continue;
    auto b = boettcher_external(f, f(s.z));
    REQUIRE(b.status == BoettcherStatus::ok);
    CHECK(std::abs(b.potential - 3 * s.potential) < 1e-8 * std::max(1.0, s.potential));
    double ang = std::arg(b.value) / (2 * M_PI) - 3.0 / 8;
    CHECK(std::abs(ang - std::round(ang)) < 1e-8);
    ++checked;
  }
  CHECK(checked > 5);
  REQUIRE(r.status == RayStatus::landed);
  REQUIRE(r3.status == RayStatus::landed);
  CHECK(std::abs(f(r.endpoint) - r3.endpoint) < 1e-7);
}

TEST_CASE("crash depth") {
  CHECK(crash_depth(A("1/3"), A("0")) == 0u);
  CHECK(crash_depth(A("1/9"), A("0")) == 1u);
  CHECK(!crash_depth(A("1/8"), A("0")));
  CHECK(crash_depth(A("1/9"), 0.0) == 1u);
}

TEST_CASE("cluster_points") {
  std::vector<C> pts{{0, 0}, {1e-9, 0}, {1, 0}};
  auto c = cluster_points(pts, 1e-6);
  CHECK(!c.ambiguous);
  CHECK(c.label[0] == c.label[1]);
  CHECK(c.label[0] != c.label[2]);
  // a pair at 3e-6 is neither clearly together nor clearly apart
  auto d = cluster_points({{0, 0}, {3e-6, 0}}, 1e-6);
  CHECK(d.ambiguous);
}

TEST_CASE("E2B at (2, 0): alpha and the 2/8, 6/8 class") {
  Angle t0 = A("0");
  auto p = param_from_coords<double>(Region::E2B, 2.0, t0);
  REQUIRE(p);
  auto f = p->map<double>();
  auto o = crash_aware(TraceOptions{}, t0);
  auto op = orbit_portrait(f, 2, 1e-6, o);
  REQUIRE(op.status == PortraitStatus::ok);
  auto cls = op.partition.nontrivial_classes();
  REQUIRE(cls.size() == 1);
  CHECK(cls[0] == std::vector<Angle>{A("1/4"), A("3/4")});

  auto al = find_alpha(f, t0, 1e-6, o);
  REQUIRE(al.found);
  CHECK(al.fixed_residual < 1e-12);
  CHECK(std::abs(al.multiplier) > 1);
  CHECK(std::abs(f(al.alpha) - al.alpha) < 1e-12);

  for (const char* s : {"1/3", "2/3"}) {
    auto r = trace_dynamical_ray(f, A(s), o);
    CHECK(r.status == RayStatus::crashed);
  }
}

TEST_CASE("E1 at (2, 0): period two rays land alone; at t = 1/16 they pair") {
  auto p = param_from_coords<double>(Region::E1, 2.0, A("0"));
  REQUIRE(p);
  auto op = orbit_portrait(p->map<double>(), 2, 1e-6, crash_aware({}, A("0")));
  REQUIRE(op.status == PortraitStatus::ok);
  CHECK(op.partition.nontrivial_classes().empty());

  Angle t = A("1/16");
  auto q = param_from_coords<double>(Region::E1, 2.0, t);
  REQUIRE(q);
  auto oq = orbit_portrait(q->map<double>(), 2, 1e-6, crash_aware({}, t));
  REQUIRE(oq.status == PortraitStatus::ok);
  CHECK(oq.partition.same_class(A("1/8"), A("1/4")));
  CHECK(oq.partition.same_class(A("3/8"), A("3/4")));
  CHECK(!oq.partition.same_class(A("1/8"), A("3/8")));
}

TEST_CASE("long double tracing agrees with double") {
  auto p = param_from_coords<long double>(Region::E1, 2.0, A("0"));
  REQUIRE(p);
  auto rd = trace_dynamical_ray(p->map<double>(), A("1/4"));
  auto rl = trace_dynamical_ray(p->map<long double>(), A("1/4"));
  REQUIRE(rd.status == RayStatus::landed);
  REQUIRE(rl.status == RayStatus::landed);
  CHECK(std::abs(rd.endpoint - rl.endpoint) < 1e-8);
}
