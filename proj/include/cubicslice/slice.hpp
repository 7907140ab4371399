#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cubicslice/angle.hpp"
#include "cubicslice/cubic_map.hpp"
#include "cubicslice/lamination.hpp"
#include "cubicslice/ray_trace.hpp"

namespace cubicslice {

using lcplx = std::complex<long double>;

enum class Slice { S1, S2 };
enum class Sheet { none, plus, minus };
enum class Region { E1, E2B, E2D };

std::string_view to_string(Slice s);
std::string_view to_string(Sheet s);
std::string_view to_string(Region r);
Region parse_region(std::string_view s);
inline Slice slice_of(Region r) { return r == Region::E1 ? Slice::S1 : Slice::S2; }

struct SlicePoint {
  Slice slice = Slice::S1;
  lcplx a, v;
  Sheet sheet = Sheet::none;
  bool branch_point = false;
  bool degenerate = false;

  template <class T>
  CubicMap<T> map() const {
    return {cplx<T>(T(a.real()), T(a.imag())), cplx<T>(T(v.real()), T(v.imag()))};
  }
  std::complex<double> a_d() const { return {double(a.real()), double(a.imag())}; }
  std::complex<double> v_d() const { return {double(v.real()), double(v.imag())}; }
};

SlicePoint s1(lcplx a);

// 3a sqrt(1 - 4/(9a^2)) with the principal root: the cut is the segment
// [-2/3, 2/3] and the value is ~3a at infinity. At a = 0 it is 2i.
lcplx s2_root(lcplx a);
// Both roots of v^2 + a v + 1 - 2a^2 = 0; one point at a = +-2/3.
std::vector<SlicePoint> s2_points(lcplx a);
SlicePoint s2_point(lcplx a, Sheet sheet);
// Root at a nearest to v_prev (sheet continuation).
SlicePoint s2_continue(lcplx a, lcplx v_prev);

struct PhiResult {
  bool ok = false;
  std::complex<double> value;
  std::string error;  // not_in_region / boettcher status
};

template <class T>
PhiResult phi(Region region, const SlicePoint& p);

struct ParamTraceOptions {
  double start_potential = 0;  // 0: automatic
  double floor_potential = 1e-11;
  int steps_per_level = 16;
  double landing_tol = 1e-10;
  int max_steps = 20000;
  bool refine = true;
  bool keep_samples = true;
};

struct ParamSample {
  SlicePoint p;
  double potential;
};

struct ParamRayTrace {
  Region region = Region::E1;
  Angle angle;
  std::vector<ParamSample> samples;
  RayStatus status = RayStatus::budget_exhausted;
  SlicePoint endpoint;
  double cauchy = 0;
  bool refined = false;
  std::string landing_kind;  // parabolic, misiurewicz or unrefined
  std::complex<double> parabolic_point;  // for parabolic landings
  std::string diagnostic;
};

// Parameter with Phi = rho e^{2 pi i t}; nullopt with *error set on failure.
template <class T>
std::optional<SlicePoint> param_from_coords(Region region, double rho, const Angle& t,
                                            std::string* error = nullptr);
// Same for a real angle (used by psi for arbitrary inputs).
template <class T>
std::optional<SlicePoint> param_from_coords(Region region, double rho, long double t,
                                            std::string* error = nullptr);

// rho_floor == 1 means trace to landing.
template <class T>
ParamRayTrace trace_parameter_ray(Region region, const Angle& t, double rho_floor,
                                  const ParamTraceOptions& opts = {});

template <class T>
std::optional<SlicePoint> psi(const SlicePoint& f, std::string* error = nullptr);

enum class EscapeClass { E2B, E2D, not_escape, unresolved };
std::string_view to_string(EscapeClass c);

struct ClassifyOptions {
  int resolution = 1024;
  int budget = 256;      // escape iterations per pixel
  int margin_px = 5;     // separation below which the answer is unresolved
};

struct ClassifyResult {
  EscapeClass cls = EscapeClass::unresolved;
  int separation_px = -1;  // pixel gap between the two components when distinct
  std::string detail;
};

template <class T>
ClassifyResult classify_escape_s2(const SlicePoint& p, const ClassifyOptions& opts = {});

struct WRegion {
  int label = 0;  // 1..4, 0 for none
  Angle lo, hi;
};
WRegion w_region(const Angle& t);

// Maps the exact angle of a parameter in a region to the external angle at
// which the cocritical point sits; used to pass crash data to dynamical rays.
inline TraceOptions crash_aware(TraceOptions o, const Angle& t) {
  o.crash_angle = t;
  return o;
}

}  // namespace cubicslice
