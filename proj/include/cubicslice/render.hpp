#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubicslice/angle.hpp"
#include "cubicslice/cubic_map.hpp"
#include "cubicslice/slice.hpp"

namespace cubicslice {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {255, 255, 255});

  int width() const { return width_; }
  int height() const { return height_; }
  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
  const std::vector<std::uint8_t>& bytes() const { return data_; }

 private:
  int width_ = 0, height_ = 0;
  std::vector<std::uint8_t> data_;  // rows top to bottom, RGB
};

// Binary PPM (P6). Throws std::runtime_error on I/O failure.
void write_ppm(const Image& img, const std::string& path);
Image read_ppm(const std::string& path);
void write_png(const Image& img, const std::string& path);
// PNG for a .png suffix, PPM otherwise.
void write_image(const Image& img, const std::string& path);

// Rectangle [lo.re, hi.re] x [lo.im, hi.im]; row 0 is the top (largest imaginary part).
struct Window {
  std::complex<double> lo{-2, -2}, hi{2, 2};
  std::complex<double> at(double x, double y, int width, int height) const;
  std::pair<double, double> pixel(std::complex<double> z, int width, int height) const;
};

Window parse_window(const std::string& text);  // "re0,re1,im0,im1"

struct Overlay {
  std::string label;
  std::vector<std::complex<double>> points;  // polyline in window coordinates
  Rgb color{220, 30, 30};
  bool marker = false;  // a single point drawn as a small cross
  int panel = 0;
};

struct Rendering {
  Image image;
  Window window;
  int panel_width = 0;  // image width of one panel
  int panels = 1;
  std::vector<std::uint8_t> bounded;  // per pixel: 1 if the tested orbit stayed bounded
  std::vector<int> overlay_id;        // per pixel: index into overlays, -1 if none
  std::vector<Overlay> overlays;
};

enum class JuliaStyle { escape_time, distance_estimate };
JuliaStyle parse_julia_style(const std::string& s);

struct JuliaJob {
  CubicMap<double> f;
  Window window{{-1.5, -1.5}, {1.5, 1.5}};
  int width = 512, height = 512;
  JuliaStyle style = JuliaStyle::escape_time;
  int budget = 500;
  std::vector<Angle> rays;  // dynamical rays to overlay
  bool markers = false;     // a, -a, 2a, v and the fixed points
  unsigned threads = 0;
};

Rendering render_julia(const JuliaJob& job);

// S2 pixels are parameters a; `projected` picks per pixel the sheet whose
// free critical orbit is bounded or escapes more slowly.
enum class SliceView { projected, plus, minus, both };
SliceView parse_slice_view(const std::string& s);

struct SliceJob {
  Slice slice = Slice::S1;
  Window window;
  int width = 512, height = 512;
  SliceView view = SliceView::projected;
  int budget = 300;
  std::vector<std::pair<Region, Angle>> rays;  // parameter rays to overlay
  bool w_boundaries = false;                   // the eight E2B rays bounding W1..W4
  double ray_floor = 1.0;  // 1 traces to landing
  unsigned threads = 0;
};

Rendering render_slice(const SliceJob& job);

// Adds a polyline or marker and rasterizes it into the image.
void draw_overlay(Rendering& r, Overlay ov);

// The eight E2B angles k/24, k in {1, 2, 10, 11, 13, 14, 22, 23}.
std::vector<Angle> w_boundary_angles();

struct ComponentInfo {
  bool found = false;    // the pixel at z is bounded
  bool touches_border = false;
  std::size_t pixels = 0;
};

// 4-connected component of bounded pixels containing z, in panel 0.
ComponentInfo bounded_component(const Rendering& r, std::complex<double> z);
double bounded_fraction(const Rendering& r);
// Largest distance in pixels from an overlay pixel to its polyline.
double overlay_deviation(const Rendering& r);

}  // namespace cubicslice
