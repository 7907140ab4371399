#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubicslice/internal.hpp"
#include "cubicslice/lamination.hpp"
#include "cubicslice/slice.hpp"

namespace cubicslice {

enum class Verdict { confirmed, refuted, unresolved };
std::string_view to_string(Verdict v);

// Landing parameters of the parameter ray of angle t in E1 and in E2B.
struct PsiHatResult {
  bool ok = false;
  Angle angle;
  ParamRayTrace e1, e2b;
  std::string detail;
};

template <class T>
PsiHatResult psi_hat(const Angle& t, const ParamTraceOptions& opts = {});

// Rational external angles whose dynamical rays land at z, a preperiodic
// point of J(f). Periodic candidates have tripling period dividing some
// L <= max_period; preimages are selected by tracing.
struct AnglesAt {
  bool ok = false;
  std::vector<Angle> angles;
  unsigned preperiod = 0, period = 0;  // of z under f
  std::string detail;
};

template <class T>
AnglesAt external_angles_at(const CubicMap<T>& f, cplx<T> z, double tol = 1e-6,
                            unsigned max_period = 6, unsigned threads = 0);

// Psi-hat of a critically finite boundary point F of S1: the parameter rays
// landing at F are the dynamical rays landing at the cocritical point 2a;
// their E2B counterparts must land at one point.
struct BoundaryImage {
  bool ok = false;
  std::vector<Angle> angles;
  std::vector<SlicePoint> landings;  // E2B landing per angle
  SlicePoint image;
  double spread = 0;
  std::string detail;
};

template <class T>
BoundaryImage psi_hat_at(const SlicePoint& F, double tol = 1e-5, unsigned threads = 0);

struct TransferResult {
  Verdict verdict = Verdict::unresolved;
  bool e1_coland = false, e2b_coland = false;
  bool asymmetric = false;  // co-land in E2B only: allowed off the coperiodic case
  double d_e1 = 0, d_e2b = 0;
  std::string detail;
};

// "co-land on dE1 => co-land on dE2B", and the converse for coperiodic pairs.
// Distances in (tol, 10 tol] are unresolved.
template <class T>
TransferResult verify_transfer(const Angle& theta, const Angle& theta2, double tol = 1e-6,
                               const ParamTraceOptions& opts = {});

struct QuotientResult {
  Verdict verdict = Verdict::unresolved;  // confirmed = consistent
  AnglePartition e1, predicted, e2b;
  SlicePoint f, g;
  std::string detail;
};

// Compares the E2B portrait of psi(f) with the portrait predicted from f,
// for f = (rho, t)_1.
template <class T>
QuotientResult quotient_check(double rho, const Angle& t, unsigned q, double tol = 1e-6,
                              unsigned threads = 0);

enum class TypeCStatus { identified_with, injective_here, refuted, unresolved };
std::string_view to_string(TypeCStatus s);

struct TypeCResult {
  TypeCStatus status = TypeCStatus::unresolved;
  std::optional<Angle> partner;
  SlicePoint F;
  BoundaryImage image;
  std::vector<std::pair<Angle, double>> distances;  // to the images of other sample angles
  std::string detail;
};

// Default sample set for fibre checks.
std::vector<Angle> typeC_sample_angles();

template <class T>
TypeCResult typeC_check(const ParamComponent& comp, const Angle& t, double tol = 1e-5,
                        double separation = 1e-3, const std::vector<Angle>& samples = typeC_sample_angles(),
                        unsigned threads = 0);

enum class PrincipalStatus { pair_same_quadrant, singleton, parabolic_singleton, refuted, unresolved };
std::string_view to_string(PrincipalStatus s);

// The exact interleaving witness: the alpha rays separate the cocritical
// angles of F from those of the opposite-quadrant candidate. When the
// cocritical point of the image is alpha itself, the witness is that the
// opposite angles avoid the alpha cycle.
struct CrossingCertificate {
  enum class Kind { separation, alpha_cycle } kind = Kind::separation;
  std::pair<Angle, Angle> alpha_rays;
  std::vector<Angle> own, opposite;
  bool interleaves = false;
};

struct PrincipalResult {
  PrincipalStatus status = PrincipalStatus::unresolved;
  Quadrant quadrant = Quadrant::none;
  std::optional<Angle> partner;
  SlicePoint F, F_same, F_opposite;
  BoundaryImage image, image_same, image_opposite;
  double d_same = 0, d_opposite = 0;
  std::optional<CrossingCertificate> certificate;
  bool window_ok = true;  // quadrant I: external angles of F in (23/24, 1/24)
  // parabolic case: the four boundary points and their images
  std::vector<SlicePoint> parabolic_points;
  std::vector<SlicePoint> parabolic_images;
  std::vector<std::vector<Angle>> parabolic_angles;
  std::string detail;
};

template <class T>
PrincipalResult principal_check(const Angle& t, Quadrant quadrant, double tol = 1e-5,
                                double separation = 1e-3, unsigned threads = 0);

// Opposite quadrant (I <-> III, II <-> IV).
Quadrant opposite(Quadrant q);

}  // namespace cubicslice
