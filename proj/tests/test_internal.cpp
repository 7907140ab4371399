#include <cmath>

#include "cubicslice/internal.hpp"
#include "cubicslice/ray_trace.hpp"
#include "cubicslice/slice.hpp"
#include "doctest.h"

using namespace cubicslice;

namespace {

CubicMap<double> e1_map(double rho, const char* t) {
  auto p = param_from_coords<double>(Region::E1, rho, Angle::parse(t));
  REQUIRE(p);
  return p->map<double>();
}

}  // namespace

TEST_CASE("internal rays of z^3 are radial") {
  CubicMap<double> z3{{0, 0}, {0, 0}};
  for (const char* s : {"0", "1/3", "1/5"}) {
    Angle t = Angle::parse(s);
    auto r = internal_ray_basin(z3, {}, t);
    REQUIRE(r.status == RayStatus::landed);
    CHECK(std::abs(r.endpoint - std::polar(1.0, 2 * M_PI * t.to_double())) < 1e-9);
  }
}

TEST_CASE("internal and external rays meet at the period-2 boundary point") {
  auto f = e1_map(2.0, "0");
  auto in = internal_ray_basin(f, {}, Angle(1, 3));
  auto ex = trace_dynamical_ray(f, Angle(1, 4));
  REQUIRE(in.status == RayStatus::landed);
  REQUIRE(ex.status == RayStatus::landed);
  CHECK(in.refined);
  CHECK(std::abs(in.endpoint - ex.endpoint) < 1e-8);
  auto w = std::complex<double>(f(f(cplx<double>(in.endpoint))));
  CHECK(std::abs(w - in.endpoint) < 1e-10);
}

TEST_CASE("a component of depth one maps onto the immediate basin") {
  auto f = e1_map(2.0, "0");
  auto deep = internal_ray_basin(f, {{1}}, Angle(1, 6));
  auto imm = internal_ray_basin(f, {}, Angle(1, 6));
  REQUIRE(deep.status == RayStatus::landed);
  REQUIRE(imm.status == RayStatus::landed);
  CHECK(std::abs(std::complex<double>(f(cplx<double>(deep.endpoint))) - imm.endpoint) < 1e-8);
  CHECK(!component_centre(f, {{7}}));
}

TEST_CASE("internal rays crash when -a is in the immediate basin") {
  CubicMap<double> g{{0.2, 0.1}, {0.2, 0.1}};
  auto r = internal_ray_basin(g, {}, Angle(1, 3));
  CHECK(r.status == RayStatus::crashed);
  auto deep = internal_ray_basin(g, {{0}}, Angle(1, 3));
  CHECK(deep.status != RayStatus::landed);
}

TEST_CASE("quadrants") {
  CHECK(parse_quadrant("III") == Quadrant::III);
  CHECK(to_string(Quadrant::II) == "II");
  CHECK_THROWS(parse_quadrant("V"));
}

TEST_CASE("type C centres are superattracting returns of -a") {
  auto c2 = typeC_centres(2);
  REQUIRE(c2.size() == 2);
  for (auto c : c2) CHECK(std::abs(std::abs(c) - std::sqrt(3.0) / 2) < 1e-12);
  auto c3 = typeC_centres(3);
  CHECK(c3.size() == 8);
  for (auto c : c3) {
    CubicMap<double> f{c, c};
    cplx<double> z = -c;
    for (int i = 0; i < 3; ++i) z = f(z);
    CHECK(std::abs(z - c) < 1e-9);
  }
}

TEST_CASE("principal internal parameter rays") {
  auto half = internal_param_ray<double>({}, Quadrant::I, Angle(1, 2));
  REQUIRE(half.status == RayStatus::landed);
  CHECK(half.landing_kind == "misiurewicz");
  CHECK(std::abs(half.endpoint.a_d() - std::complex<double>(0.5, 0)) < 1e-9);

  auto p = internal_param_ray<double>({}, Quadrant::I, Angle(5, 12));
  auto q = internal_param_ray<double>({}, Quadrant::I, Angle(7, 12));
  auto r = internal_param_ray<double>({}, Quadrant::III, Angle(5, 12));
  REQUIRE(p.status == RayStatus::landed);
  REQUIRE(q.status == RayStatus::landed);
  REQUIRE(r.status == RayStatus::landed);
  CHECK(std::abs(p.endpoint.a_d() - std::conj(q.endpoint.a_d())) < 1e-9);
  CHECK(std::abs(p.endpoint.a_d() + r.endpoint.a_d()) < 1e-9);
}

TEST_CASE("the parabolic internal ray meets a coperiod-2 parameter ray") {
  auto in = internal_param_ray<double>({}, Quadrant::I, Angle(2, 3));
  REQUIRE(in.status == RayStatus::landed);
  CHECK(in.landing_kind == "parabolic");
  auto ex = trace_parameter_ray<double>(Region::E1, Angle(1, 24), 1.0);
  REQUIRE(ex.status == RayStatus::landed);
  CHECK(std::abs(in.endpoint.a_d() - ex.endpoint.a_d()) < 1e-6);
}

TEST_CASE("type C internal parameter rays respect the real symmetry") {
  auto C0 = typeC_component(2, 0);
  auto p = internal_param_ray<double>(C0, Quadrant::none, Angle(1, 6));
  auto q = internal_param_ray<double>(C0, Quadrant::none, Angle(5, 6));
  REQUIRE(p.status == RayStatus::landed);
  REQUIRE(q.status == RayStatus::landed);
  CHECK(std::abs(p.endpoint.a_d() + std::conj(q.endpoint.a_d())) < 1e-9);
  auto h = internal_param_ray<double>(C0, Quadrant::none, Angle(1, 2));
  REQUIRE(h.status == RayStatus::landed);
  CHECK(std::abs(h.endpoint.a_d().real()) < 1e-9);
}
