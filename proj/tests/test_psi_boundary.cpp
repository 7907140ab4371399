#include <algorithm>

#include "cubicslice/psi_boundary.hpp"
#include "doctest.h"

using namespace cubicslice;

TEST_CASE("coperiod-2 rays co-land in both regions") {
  auto r = verify_transfer<double>(Angle(1, 24), Angle(1, 12));
  CHECK(r.verdict == Verdict::confirmed);
  CHECK(r.e1_coland);
  CHECK(r.e2b_coland);
  CHECK(r.d_e1 < 1e-6);
  CHECK(r.d_e2b < 1e-6);
}

TEST_CASE("separated rays stay separated") {
  auto r = verify_transfer<double>(Angle(1, 8), Angle(5, 8));
  CHECK(r.verdict == Verdict::confirmed);
  CHECK(!r.e1_coland);
  CHECK(!r.e2b_coland);
}

TEST_CASE("co-landing in E2B alone is allowed off the coperiodic case") {
  auto r = verify_transfer<double>(Angle(1, 8), Angle(3, 8));
  CHECK(r.verdict == Verdict::confirmed);
  CHECK(r.asymmetric);
}

TEST_CASE("psi-hat at a boundary point uses the rays at 2a") {
  auto ph = psi_hat<double>(Angle(1, 8));
  REQUIRE(ph.e1.status == RayStatus::landed);
  auto img = psi_hat_at<double>(ph.e1.endpoint);
  REQUIRE(img.ok);
  CHECK(std::find(img.angles.begin(), img.angles.end(), Angle(1, 8)) != img.angles.end());
  CHECK(std::abs(img.image.a_d() - ph.e2b.endpoint.a_d()) < 1e-6);
}

TEST_CASE("quotient portraits") {
  auto r = quotient_check<double>(2.0, Angle(1, 16), 2);
  CHECK(r.verdict == Verdict::confirmed);
  CHECK(r.e2b.classes().size() == r.predicted.classes().size());
}

TEST_CASE("principal fibre of a basilica angle in quadrant I") {
  auto r = principal_check<double>(Angle(5, 12), Quadrant::I);
  CHECK(r.status == PrincipalStatus::pair_same_quadrant);
  REQUIRE(r.partner);
  CHECK(*r.partner == Angle(7, 12));
  CHECK(r.window_ok);
  REQUIRE(r.certificate);
  CHECK(r.certificate->kind == CrossingCertificate::Kind::separation);
  CHECK(r.certificate->alpha_rays == std::pair{Angle(1, 4), Angle(3, 4)});
  CHECK(r.certificate->interleaves);
}

TEST_CASE("principal fibre whose image has alpha as cocritical point") {
  auto r = principal_check<double>(Angle(1, 6), Quadrant::II);
  CHECK(r.status == PrincipalStatus::pair_same_quadrant);
  REQUIRE(r.certificate);
  CHECK(r.certificate->kind == CrossingCertificate::Kind::alpha_cycle);
  CHECK(r.certificate->interleaves);
}

TEST_CASE("parabolic principal points stay distinct") {
  auto r = principal_check<double>(Angle(1, 3), Quadrant::I);
  CHECK(r.status == PrincipalStatus::parabolic_singleton);
  CHECK(r.parabolic_points.size() == 4);
  for (auto& a : r.parabolic_angles) CHECK(a.size() == 2);
}

TEST_CASE("a non-basilica principal angle has a singleton fibre") {
  auto r = principal_check<double>(Angle(1, 2), Quadrant::I);
  CHECK(r.status == PrincipalStatus::singleton);
}
