#pragma once

#include <optional>

#include "cubicslice/internal.hpp"

namespace cubicslice::detail {

// The near-a Boettcher coordinate of a map in S1. For a = 0 the map is z^3
// and phi is the identity (degree 3); otherwise degree 2.
template <class T>
struct NearMap {
  CubicMap<T> f;
  int deg;
  T rho;

  explicit NearMap(const CubicMap<T>& g)
      : f(g),
        deg(g.a == cplx<T>(0) ? 3 : 2),
        rho(g.a == cplx<T>(0) ? T(0.5) : std::min(T(0.5), T(4.5) * std::norm(g.a))) {}

  cplx<T> u_of(cplx<T> w) const { return deg == 3 ? w : T(3) * f.a * (w - f.a); }
  bool valid(cplx<T> w) const { return std::abs(u_of(w)) <= rho; }

  template <class S>
  S log_phi(const S& a, const S& w) const {
    return deg == 3 ? log_c(w) : log_phi_near(a, w);
  }

  // Least k <= kmax with f^k(z) in the near disc.
  std::optional<int> level_of(cplx<T> z, int kmax) const {
    for (int k = 0; k <= kmax; ++k) {
      if (valid(z)) return k;
      z = f(z);
      if (!std::isfinite(std::abs(z)) || std::abs(z) > f.escape_radius()) return std::nullopt;
    }
    return std::nullopt;
  }
};

template <class T>
struct FlowResult {
  bool ok = false;
  bool in_immediate = false;
  cplx<T> log_phi{};  // valid when in_immediate
  int depth = 0;      // iterate count to the basin when in a strict preimage
};

// Follows the internal ray through z down to the centre of its component.
template <class T>
FlowResult<T> basin_flow(const CubicMap<T>& f, cplx<T> z);

// Internal potential -log|phi(-a)| when -a lies in the immediate basin.
template <class T>
std::optional<T> immediate_critical_level(const CubicMap<T>& f);

}  // namespace cubicslice::detail
