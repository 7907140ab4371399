#include "cubicslice/render.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "cubicslice/numeric.hpp"
#include "cubicslice/ray_trace.hpp"

namespace cubicslice {

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw std::invalid_argument("image size must be at least 1x1");
  data_.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

Rgb Image::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  return {data_[i], data_[i + 1], data_[i + 2]};
}

void Image::set(int x, int y, Rgb c) {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  data_[i] = c.r;
  data_[i + 1] = c.g;
  data_[i + 2] = c.b;
}

void write_ppm(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "P6\n" << img.width() << " " << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.bytes().data()), static_cast<std::streamsize>(img.bytes().size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

Image read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  auto token = [&]() {
    std::string t;
    while (in) {
      int c = in.get();
      if (c == '#') {
        std::string line;
        std::getline(in, line);
      } else if (std::isspace(c)) {
        if (!t.empty()) break;
      } else if (c != EOF) {
        t.push_back(static_cast<char>(c));
      }
    }
    return t;
  };
  if (token() != "P6") throw std::runtime_error(path + " is not a binary PPM");
  const int w = std::stoi(token()), h = std::stoi(token());
  if (std::stoi(token()) != 255) throw std::runtime_error(path + ": only 8-bit PPM is supported");
  Image img(w, h);
  std::vector<char> buf(static_cast<std::size_t>(w) * h * 3);
  in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!in) throw std::runtime_error(path + ": truncated pixel data");
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
      img.set(x, y, {static_cast<std::uint8_t>(buf[i]), static_cast<std::uint8_t>(buf[i + 1]),
                     static_cast<std::uint8_t>(buf[i + 2])});
    }
  return img;
}

void write_png(const Image& img, const std::string& path) {
  png_image pi{};
  pi.version = PNG_IMAGE_VERSION;
  pi.width = static_cast<png_uint_32>(img.width());
  pi.height = static_cast<png_uint_32>(img.height());
  pi.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&pi, path.c_str(), 0, img.bytes().data(), 0, nullptr))
    throw std::runtime_error("cannot write " + path + ": " + pi.message);
}

void write_image(const Image& img, const std::string& path) {
  const bool png = path.size() >= 4 && path.compare(path.size() - 4, 4, ".png") == 0;
  png ? write_png(img, path) : write_ppm(img, path);
}

std::complex<double> Window::at(double x, double y, int width, int height) const {
  return {lo.real() + (hi.real() - lo.real()) * x / width, hi.imag() - (hi.imag() - lo.imag()) * y / height};
}

std::pair<double, double> Window::pixel(std::complex<double> z, int width, int height) const {
  return {(z.real() - lo.real()) / (hi.real() - lo.real()) * width,
          (hi.imag() - z.imag()) / (hi.imag() - lo.imag()) * height};
}

Window parse_window(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3]))
    throw std::invalid_argument("window must be re0,re1,im0,im1 with re0<re1 and im0<im1");
  return Window{{v[0], v[2]}, {v[1], v[3]}};
}

JuliaStyle parse_julia_style(const std::string& s) {
  if (s == "escape_time") return JuliaStyle::escape_time;
  if (s == "distance_estimate") return JuliaStyle::distance_estimate;
  throw std::invalid_argument("unknown style: " + s);
}

SliceView parse_slice_view(const std::string& s) {
  if (s == "projected") return SliceView::projected;
  if (s == "plus") return SliceView::plus;
  if (s == "minus") return SliceView::minus;
  if (s == "both") return SliceView::both;
  throw std::invalid_argument("unknown view: " + s);
}

std::vector<Angle> w_boundary_angles() {
  std::vector<Angle> out;
  for (int k : {1, 2, 10, 11, 13, 14, 22, 23}) out.emplace_back(k, 24);
  return out;
}

namespace {

constexpr Rgb kBounded{30, 30, 30};

Rendering blank(const Window& w, int width, int height, int panels) {
  Rendering r;
  r.window = w;
  r.panel_width = width;
  r.panels = panels;
  r.image = Image(width * panels, height);
  r.bounded.assign(static_cast<std::size_t>(width) * panels * height, 0);
  r.overlay_id.assign(r.bounded.size(), -1);
  return r;
}

// Steps until |z| exceeds the escape radius; budget + 1 when bounded.
int escape_steps(const CubicMap<double>& f, std::complex<double> z, int budget) {
  const double R2 = f.escape_radius() * f.escape_radius();
  for (int n = 0; n <= budget; ++n) {
    if (std::norm(z) > R2) return n;
    z = f(z);
  }
  return budget + 1;
}

Rgb escape_shade(int n) {
  const auto s = static_cast<std::uint8_t>(255 - std::min(150, 10 * n));
  return {s, s, s};
}

double seg_distance(std::pair<double, double> p, std::pair<double, double> a, std::pair<double, double> b) {
  const double dx = b.first - a.first, dy = b.second - a.second;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((p.first - a.first) * dx + (p.second - a.second) * dy) / len2 : 0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.first - a.first - t * dx, p.second - a.second - t * dy);
}

Sheet sheet_at(const SlicePoint& p) {
  const SlicePoint plus = s2_point(p.a, Sheet::plus), minus = s2_point(p.a, Sheet::minus);
  return std::abs(plus.v - p.v) <= std::abs(minus.v - p.v) ? Sheet::plus : Sheet::minus;
}

}  // namespace

void draw_overlay(Rendering& r, Overlay ov) {
  const int id = static_cast<int>(r.overlays.size());
  const int W = r.panel_width, H = r.image.height();
  auto put = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= W || y >= H) return;
    const int X = x + ov.panel * W;
    r.image.set(X, y, ov.color);
    r.overlay_id[static_cast<std::size_t>(y) * r.image.width() + X] = id;
  };
  std::vector<std::pair<double, double>> px;
  for (auto z : ov.points) px.push_back(r.window.pixel(z, W, H));
  if (ov.marker) {
    for (auto [x, y] : px)
      for (int d = -3; d <= 3; ++d) {
        put(static_cast<int>(std::floor(x)) + d, static_cast<int>(std::floor(y)));
        put(static_cast<int>(std::floor(x)), static_cast<int>(std::floor(y)) + d);
      }
  } else if (px.size() == 1) {
    put(static_cast<int>(std::floor(px[0].first)), static_cast<int>(std::floor(px[0].second)));
  }
  for (std::size_t k = 0; !ov.marker && k + 1 < px.size(); ++k) {
    auto [x0, y0] = px[k];
    auto [x1, y1] = px[k + 1];
    if (std::max(x0, x1) < -1 || std::min(x0, x1) > W + 1 || std::max(y0, y1) < -1 || std::min(y0, y1) > H + 1)
      continue;
    const double len = std::hypot(x1 - x0, y1 - y0);
    const int steps = static_cast<int>(std::min(1e6, std::ceil(2 * len))) + 1;
    for (int s = 0; s <= steps; ++s) {
      const double t = static_cast<double>(s) / steps;
      put(static_cast<int>(std::floor(x0 + t * (x1 - x0))), static_cast<int>(std::floor(y0 + t * (y1 - y0))));
    }
  }
  r.overlays.push_back(std::move(ov));
}

Rendering render_julia(const JuliaJob& job) {
  Rendering r = blank(job.window, job.width, job.height, 1);
  const auto& f = job.f;
  const double R2 = f.escape_radius() * f.escape_radius();
  const double pixel_size = std::abs(job.window.hi.real() - job.window.lo.real()) / job.width;
  parallel_for(static_cast<std::size_t>(job.height), [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < job.width; ++x) {
      std::complex<double> z = job.window.at(x + 0.5, y + 0.5, job.width, job.height), dz = 1;
      int n = 0;
      while (n <= job.budget && std::norm(z) <= R2) {
        dz = f.derivative(z) * dz;
        z = f(z);
        ++n;
      }
      const std::size_t i = row * job.width + x;
      if (n > job.budget) {
        r.bounded[i] = 1;
        r.image.set(x, y, kBounded);
      } else if (job.style == JuliaStyle::distance_estimate) {
        const double az = std::abs(z);
        const double de = std::abs(dz) > 0 ? az * std::log(az) / std::abs(dz) : 1e300;
        r.image.set(x, y, de < 0.5 * pixel_size ? kBounded : Rgb{255, 255, 255});
      } else {
        r.image.set(x, y, escape_shade(n));
      }
    }
  }, job.threads);

  const Rgb palette[] = {{220, 30, 30}, {30, 90, 220}, {20, 150, 60}, {200, 120, 0}, {150, 40, 170}};
  std::vector<RayTrace> traces(job.rays.size());
  parallel_for(job.rays.size(), [&](std::size_t k) { traces[k] = trace_dynamical_ray<double>(f, job.rays[k]); },
               job.threads);
  for (std::size_t k = 0; k < traces.size(); ++k) {
    Overlay ov;
    ov.label = "ray " + job.rays[k].str();
    for (const auto& s : traces[k].samples) ov.points.push_back(s.z);
    ov.color = palette[k % 5];
    draw_overlay(r, std::move(ov));
  }
  if (job.markers) {
    auto mark = [&](const std::string& label, std::complex<double> z, Rgb c) {
      draw_overlay(r, Overlay{label, {z}, c, true, 0});
    };
    mark("a", f.a, {0, 160, 255});
    mark("-a", -f.a, {255, 0, 200});
    mark("2a", f.cocritical(), {0, 200, 120});
    mark("v", f.v, {255, 140, 0});
    for (auto z : periodic_points(f, 1)) mark("fixed", z, {160, 0, 0});
  }
  return r;
}

Rendering render_slice(const SliceJob& job) {
  const int panels = job.view == SliceView::both ? 2 : 1;
  Rendering r = blank(job.window, job.width, job.height, panels);
  const int W = r.image.width();
  parallel_for(static_cast<std::size_t>(job.height), [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < job.width; ++x) {
      const std::complex<double> a = job.window.at(x + 0.5, y + 0.5, job.width, job.height);
      auto steps_on = [&](std::complex<double> v) {
        CubicMap<double> f{a, v};
        return escape_steps(f, -a, job.budget);
      };
      int per_panel[2] = {0, 0};
      if (job.slice == Slice::S1) {
        per_panel[0] = steps_on(a);
      } else {
        const lcplx al(a.real(), a.imag());
        const auto vp = s2_point(al, Sheet::plus).v_d(), vm = s2_point(al, Sheet::minus).v_d();
        const int np = steps_on(vp), nm = steps_on(vm);
        switch (job.view) {
          case SliceView::projected: per_panel[0] = std::max(np, nm); break;
          case SliceView::plus: per_panel[0] = np; break;
          case SliceView::minus: per_panel[0] = nm; break;
          case SliceView::both:
            per_panel[0] = np;
            per_panel[1] = nm;
            break;
        }
      }
      for (int p = 0; p < panels; ++p) {
        const int X = x + p * job.width;
        const bool bounded = per_panel[p] > job.budget;
        r.bounded[row * W + X] = bounded;
        r.image.set(X, y, bounded ? kBounded : escape_shade(per_panel[p]));
      }
    }
  }, job.threads);

  auto rays = job.rays;
  if (job.w_boundaries)
    for (const Angle& t : w_boundary_angles()) rays.emplace_back(Region::E2B, t);
  std::vector<ParamRayTrace> traces(rays.size());
  parallel_for(rays.size(), [&](std::size_t k) {
    traces[k] = trace_parameter_ray<double>(rays[k].first, rays[k].second, job.ray_floor);
  }, job.threads);
  for (std::size_t k = 0; k < traces.size(); ++k) {
    const Rgb color = rays[k].first == Region::E2D ? Rgb{30, 90, 220} : Rgb{220, 30, 30};
    const std::string label = std::string(to_string(rays[k].first)) + " " + rays[k].second.str();
    // In the two-panel view a ray is split where it changes sheet.
    Overlay ov{label, {}, color, false, 0};
    for (const auto& s : traces[k].samples) {
      const int panel = job.view == SliceView::both && sheet_at(s.p) == Sheet::minus ? 1 : 0;
      if (panel != ov.panel && !ov.points.empty()) {
        draw_overlay(r, ov);
        ov.points.clear();
      }
      ov.panel = panel;
      ov.points.push_back(s.p.a_d());
    }
    draw_overlay(r, std::move(ov));
  }
  return r;
}

ComponentInfo bounded_component(const Rendering& r, std::complex<double> z) {
  ComponentInfo info;
  const int W = r.panel_width, H = r.image.height(), stride = r.image.width();
  auto [px, py] = r.window.pixel(z, W, H);
  const int x0 = static_cast<int>(std::floor(px)), y0 = static_cast<int>(std::floor(py));
  if (x0 < 0 || y0 < 0 || x0 >= W || y0 >= H || !r.bounded[static_cast<std::size_t>(y0) * stride + x0]) return info;
  info.found = true;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(W) * H, 0);
  std::queue<std::pair<int, int>> todo;
  todo.push({x0, y0});
  seen[static_cast<std::size_t>(y0) * W + x0] = 1;
  while (!todo.empty()) {
    auto [x, y] = todo.front();
    todo.pop();
    ++info.pixels;
    if (x == 0 || y == 0 || x == W - 1 || y == H - 1) info.touches_border = true;
    const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int nx = x + dx[k], ny = y + dy[k];
      if (nx < 0 || ny < 0 || nx >= W || ny >= H) continue;
      const std::size_t j = static_cast<std::size_t>(ny) * W + nx;
      if (seen[j] || !r.bounded[static_cast<std::size_t>(ny) * stride + nx]) continue;
      seen[j] = 1;
      todo.push({nx, ny});
    }
  }
  return info;
}

double bounded_fraction(const Rendering& r) {
  if (r.bounded.empty()) return 0;
  return static_cast<double>(std::count(r.bounded.begin(), r.bounded.end(), 1)) / r.bounded.size();
}

double overlay_deviation(const Rendering& r) {
  const int W = r.panel_width, H = r.image.height(), stride = r.image.width();
  double worst = 0;
  for (int y = 0; y < H; ++y)
    for (int X = 0; X < stride; ++X) {
      const int id = r.overlay_id[static_cast<std::size_t>(y) * stride + X];
      if (id < 0) continue;
      const Overlay& ov = r.overlays[id];
      if (ov.marker) continue;
      const std::pair<double, double> c{X - ov.panel * W + 0.5, y + 0.5};
      double best = 1e300;
      std::pair<double, double> prev = r.window.pixel(ov.points[0], W, H);
      if (ov.points.size() == 1) best = seg_distance(c, prev, prev);
      for (std::size_t k = 1; k < ov.points.size(); ++k) {
        auto cur = r.window.pixel(ov.points[k], W, H);
        best = std::min(best, seg_distance(c, prev, cur));
        prev = cur;
      }
      worst = std::max(worst, best);
    }
  return worst;
}

}  // namespace cubicslice
