#include <algorithm>
#include <deque>
#include <sstream>

#include "cubicslice/slice.hpp"

namespace cubicslice {

namespace {

struct Grid {
  int n;
  std::vector<unsigned char> bounded;
  bool at(int i, int j) const { return bounded[static_cast<std::size_t>(j) * n + i] != 0; }
};

std::vector<unsigned char> flood(const Grid& g, int i0, int j0) {
  std::vector<unsigned char> mark(g.bounded.size(), 0);
  if (!g.at(i0, j0)) return mark;
  std::deque<std::pair<int, int>> q{{i0, j0}};
  mark[static_cast<std::size_t>(j0) * g.n + i0] = 1;
  while (!q.empty()) {
    auto [i, j] = q.front();
    q.pop_front();
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        int x = i + di, y = j + dj;
        if (x < 0 || y < 0 || x >= g.n || y >= g.n) continue;
        std::size_t idx = static_cast<std::size_t>(y) * g.n + x;
        if (mark[idx] || !g.bounded[idx]) continue;
        mark[idx] = 1;
        q.emplace_back(x, y);
      }
  }
  return mark;
}

// Chebyshev distance in pixels from set A to set B, capped.
int gap(const Grid& g, const std::vector<unsigned char>& A, const std::vector<unsigned char>& B, int cap) {
  std::vector<int> dist(A.size(), -1);
  std::deque<std::size_t> q;
  for (std::size_t k = 0; k < A.size(); ++k)
    if (A[k]) {
      dist[k] = 0;
      q.push_back(k);
    }
  while (!q.empty()) {
    std::size_t k = q.front();
    q.pop_front();
    if (B[k]) return dist[k] - 1;
    if (dist[k] >= cap + 1) continue;
    int i = static_cast<int>(k % g.n), j = static_cast<int>(k / g.n);
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        int x = i + di, y = j + dj;
        if (x < 0 || y < 0 || x >= g.n || y >= g.n) continue;
        std::size_t idx = static_cast<std::size_t>(y) * g.n + x;
        if (dist[idx] >= 0) continue;
        dist[idx] = dist[k] + 1;
        q.push_back(idx);
      }
  }
  return cap + 1;
}

}  // namespace

template <class T>
ClassifyResult classify_escape_s2(const SlicePoint& p, const ClassifyOptions& opts) {
  ClassifyResult out;
  if (p.slice != Slice::S2) {
    out.detail = "point is not on S2";
    return out;
  }
  CubicMap<T> f = p.map<T>();
  if (!escape_classification(f, -f.a, 4 * opts.budget).escaped) {
    out.cls = EscapeClass::not_escape;
    return out;
  }
  const int n = std::max(16, opts.resolution);
  cplx<T> center = (f.a + f.v) / T(2);
  T half = T(2.5) * std::abs(f.a - f.v);
  T px = T(2) * half / T(n);
  Grid g{n, std::vector<unsigned char>(static_cast<std::size_t>(n) * n)};
  // A pixel belongs to the thickened K when its orbit stays bounded or its
  // distance estimate G/|grad G| is below half a pixel. This keeps pinch
  // points such as alpha connected at finite resolution.
  const T bail = std::max(f.escape_radius(), T(1e6));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
    for (int i = 0; i < n; ++i) {
      cplx<T> z = center + cplx<T>(-half + (T(i) + T(0.5)) * px, -half + (T(j) + T(0.5)) * px);
      cplx<T> dz = 1;
      bool inside = true;
      for (int it = 0; it < opts.budget; ++it) {
        if (std::norm(z) > bail * bail) {
          T r = std::abs(z);
          T de = r * std::log(r) / std::abs(dz);
          inside = de < T(0.5) * px;
          break;
        }
        dz = f.derivative(z) * dz;
        z = f(z);
      }
      g.bounded[j * n + i] = inside ? 1 : 0;
    }
  });
  auto pixel = [&](cplx<T> z) {
    int i = static_cast<int>(std::floor((z.real() - center.real() + half) / px));
    int j = static_cast<int>(std::floor((z.imag() - center.imag() + half) / px));
    return std::pair{std::clamp(i, 0, n - 1), std::clamp(j, 0, n - 1)};
  };
  auto [ia, ja] = pixel(f.a);
  auto [iv, jv] = pixel(f.v);
  // a and v are superattracting, so their pixels meet K even when the
  // component is smaller than a pixel.
  g.bounded[static_cast<std::size_t>(ja) * n + ia] = 1;
  g.bounded[static_cast<std::size_t>(jv) * n + iv] = 1;
  auto A = flood(g, ia, ja);
  if (A[static_cast<std::size_t>(jv) * n + iv]) {
    out.cls = EscapeClass::E2B;
    out.separation_px = 0;
    return out;
  }
  auto B = flood(g, iv, jv);
  int sep = gap(g, A, B, opts.margin_px);
  out.separation_px = sep;
  if (sep < opts.margin_px) {
    std::ostringstream os;
    os << "components of a and v are " << sep << " px apart at resolution " << n
       << "; raise the resolution";
    out.detail = os.str();
    return out;
  }
  out.cls = EscapeClass::E2D;
  return out;
}

template ClassifyResult classify_escape_s2<double>(const SlicePoint&, const ClassifyOptions&);
template ClassifyResult classify_escape_s2<long double>(const SlicePoint&, const ClassifyOptions&);

}  // namespace cubicslice
