#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubicslice/numeric.hpp"
#include "cubicslice/ray_trace.hpp"
#include "cubicslice/slice.hpp"

namespace cubicslice {

// log of the Boettcher coordinate of the superattracting fixed point a of a
// map in S1, f(z) - a = (z - a)^2 (z + 2a). With u = 3a (z - a) the map reads
// u -> u^2 (1 + u / (9a^2)), so
//   log phi = log u + sum_n 2^{-(n+1)} log(1 + u_n / (9a^2)).
// The caller guarantees |u| <= near_radius(a); then every factor stays in
// [1/2, 3/2] and the principal logarithms are continuous. Generic over jets.
template <class S>
S log_phi_near(const S& a, const S& z) {
  using std::abs;
  S u = S(3.0) * a * (z - a);
  S c = S(9.0) * a * a;
  S out = log_c(u);
  double w = 0.5;
  for (int n = 0; n < 200; ++n) {
    S s = u / c;
    if (abs(value_of(s)) < 1e-40) break;
    out = out + S(w) * log1p_c(s);
    u = u * u * (S(1.0) + s);
    w *= 0.5;
  }
  return out;
}

// Largest |u| for which log_phi_near is used.
inline double near_radius(std::complex<double> a) {
  return std::min(0.5, 4.5 * std::norm(a));
}

// A Fatou component in the grand orbit of the immediate basin of a, named by
// inverse-branch labels. Starting from c_0 = a, label j picks the j-th
// distinct root of f(z) = c_{i-1}, roots ordered by argument in [0, 2 pi).
// The empty address is the immediate basin itself.
struct BasinComponent {
  std::vector<int> address;
};

// Centre of the addressed component (a point with f^n(c) = a).
template <class T>
std::optional<cplx<T>> component_centre(const CubicMap<T>& f, const BasinComponent& comp,
                                        std::string* error = nullptr);

struct InternalOptions {
  double floor_potential = 1e-12;  // in -log r
  int steps_per_level = 16;
  double landing_tol = 1e-9;
  int max_steps = 20000;
  bool refine = true;
  bool keep_samples = true;
};

// Internal ray of angle t in the addressed component. Samples carry the
// internal potential -log r. If -a lies in the immediate basin the ray is
// only defined above the level of -a; it then stops with status crashed.
template <class T>
RayTrace internal_ray_basin(const CubicMap<T>& f, const BasinComponent& comp, const Angle& t,
                            const InternalOptions& opts = {});

enum class Quadrant { none, I, II, III, IV };
std::string_view to_string(Quadrant q);
Quadrant parse_quadrant(std::string_view s);
// The quadrant of the principal component containing arg a.
Quadrant quadrant_of(std::complex<double> a);

// Components of the S1 parameter plane traced by internal parameter rays.
// principal: both critical points in the immediate basin; the coordinate is
//   -phi_a(2a), a double cover of the disc near a = 0 (phi_a(2a) ~ 2 sqrt3 a^2).
// typeC: -a lies in a strict preimage of the basin; the coordinate is
//   phi_a(f^n(-a)), where n is the depth of the component.
struct ParamComponent {
  enum Kind { principal, typeC } kind = principal;
  unsigned depth = 0;             // n for type C
  std::complex<double> centre{};  // type C centre, f^n(-a) = a
};

// Type C centres of depth n: roots of f_a^n(-a) = a (in S1) that are not
// roots at a smaller depth and are not 0. Ordered by argument.
std::vector<std::complex<double>> typeC_centres(unsigned n);
ParamComponent typeC_component(unsigned n, unsigned index);

struct InternalParamOptions {
  double start_radius = 0.02;
  double radius_step = 0.02;  // continuation step in r, shrunk near r = 1
  double floor_potential = 1e-11;
  double landing_tol = 1e-10;
  int max_steps = 20000;
  bool refine = true;
  bool keep_samples = true;
};

struct InternalParamTrace {
  ParamComponent component;
  Quadrant quadrant = Quadrant::none;
  Angle angle;
  std::vector<ParamSample> samples;  // potential = -log r
  RayStatus status = RayStatus::budget_exhausted;
  SlicePoint endpoint;
  double cauchy = 0;
  bool refined = false;
  std::string landing_kind;  // misiurewicz, parabolic or unrefined
  std::complex<double> parabolic_point;
  std::string diagnostic;
};

// Internal parameter ray of angle t in the component, traced to r = 1.
// For the principal component a quadrant is required and t must lie in its
// range: I and III carry [1/3, 2/3], II and IV carry [2/3, 4/3].
template <class T>
InternalParamTrace internal_param_ray(const ParamComponent& comp, Quadrant quadrant, const Angle& t,
                                      const InternalParamOptions& opts = {});

}  // namespace cubicslice
