#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "cubicslice/angle.hpp"
#include "cubicslice/cubic_map.hpp"
#include "cubicslice/lamination.hpp"

namespace cubicslice {

enum class RayStatus { landed, crashed, budget_exhausted };
std::string_view to_string(RayStatus s);

struct RaySample {
  std::complex<double> z;
  double potential;
};

struct RayTrace {
  Angle angle;
  std::vector<RaySample> samples;
  RayStatus status = RayStatus::budget_exhausted;
  std::complex<double> endpoint;  // landing point, or the precritical point hit
  double cauchy = 0;              // last level-to-level displacement
  bool refined = false;           // endpoint polished by the periodicity equation
  std::string diagnostic;
};

struct TraceOptions {
  double start_potential = 0;  // 0: max(log 64, log 4R)
  double floor_potential = 1e-12;
  int steps_per_level = 16;
  double newton_tol = 0;  // 0: a few hundred ulps of the working type
  double landing_tol = 1e-9;
  int max_steps = 20000;
  bool refine = true;
  bool keep_samples = true;
  // Exact external angle of the cocritical point when the map comes from a
  // parameter ray; otherwise it is measured numerically.
  std::optional<Angle> crash_angle;
};

// First n >= 0 with 3^n theta = t_c +- 1/3 (mod 1), i.e. the ray hits a
// preimage of the free critical point.
std::optional<unsigned> crash_depth(const Angle& theta, const Angle& t_c);
std::optional<unsigned> crash_depth(const Angle& theta, double t_c, double tol = 1e-9);

template <class T>
RayTrace trace_dynamical_ray(const CubicMap<T>& f, const Angle& theta, const TraceOptions& opts = {});

// Solve f^{m+p}(w) = f^m(w) by Newton from w0.
template <class T>
std::optional<cplx<T>> refine_preperiodic(const CubicMap<T>& f, cplx<T> w0, unsigned m, unsigned p);

enum class PortraitStatus { ok, portrait_undefined, tolerance_ambiguous, unresolved };
std::string_view to_string(PortraitStatus s);

struct OrbitPortraitResult {
  PortraitStatus status = PortraitStatus::ok;
  AnglePartition partition;
  std::vector<std::complex<double>> landing;        // parallel to partition.ground()
  std::vector<std::complex<double>> class_points;   // parallel to partition.classes()
  double tolerance_used = 0;
  std::string detail;
};

// Clusters landing points; shared by dynamical and parameter-space pairing.
struct Clustering {
  std::vector<std::size_t> label;  // cluster id per point, ids ordered by first member
  bool ambiguous = false;
  std::string detail;
};
Clustering cluster_points(const std::vector<std::complex<double>>& pts, double tol);

template <class T>
OrbitPortraitResult orbit_portrait(const CubicMap<T>& f, unsigned q, double tol = 1e-6,
                                   const TraceOptions& opts = {}, unsigned threads = 0);

struct AlphaResult {
  bool found = false;
  std::complex<double> alpha;
  std::vector<Angle> angles;
  double spread = 0;          // largest distance between the co-landing rays
  double fixed_residual = 0;  // |f(alpha) - alpha|
  std::complex<double> multiplier;
  std::string detail;
};

template <class T>
AlphaResult find_alpha(const CubicMap<T>& f, const Angle& t_param, double tol = 1e-6,
                       const TraceOptions& opts = {});

}  // namespace cubicslice
