#include <cstdio>
#include <filesystem>

#include "cubicslice/render.hpp"
#include "doctest.h"

using namespace cubicslice;

TEST_CASE("z cubed fills the unit disk") {
  JuliaJob job;
  job.width = job.height = 200;
  auto r = render_julia(job);
  // The disk covers pi/9 of the window [-1.5, 1.5]^2.
  CHECK(bounded_fraction(r) == doctest::Approx(3.14159265 / 9).epsilon(0.02));
  auto c = bounded_component(r, 0);
  CHECK(c.found);
  CHECK(!c.touches_border);
}

TEST_CASE("rendering does not depend on the worker count") {
  JuliaJob job;
  job.f = {{0.3, 0.1}, {0.2, -0.4}};
  job.width = 97;
  job.height = 61;
  job.style = JuliaStyle::distance_estimate;
  job.threads = 1;
  auto a = render_julia(job);
  job.threads = 4;
  auto b = render_julia(job);
  CHECK(a.image.bytes() == b.image.bytes());
}

TEST_CASE("S1 shows a bounded central component") {
  SliceJob job;
  job.width = job.height = 200;
  auto r = render_slice(job);
  auto c = bounded_component(r, 0);
  CHECK(c.found);
  CHECK(!c.touches_border);
  CHECK(c.pixels > 100);
}

TEST_CASE("a window outside the locus renders as all escape") {
  SliceJob job;
  job.slice = Slice::S2;
  job.window = Window{{10, 10}, {12, 12}};
  job.width = job.height = 32;
  auto r = render_slice(job);
  CHECK(bounded_fraction(r) == 0);
}

TEST_CASE("ray overlays stay within one pixel of the traced polyline") {
  JuliaJob job;
  job.width = job.height = 120;
  job.rays = {Angle(1, 8), Angle(1, 4)};
  job.markers = true;
  auto r = render_julia(job);
  CHECK(r.overlays.size() >= 6);
  CHECK(overlay_deviation(r) <= 1.0);
}

TEST_CASE("two-panel S2 view doubles the width") {
  SliceJob job;
  job.slice = Slice::S2;
  job.view = SliceView::both;
  job.width = 40;
  job.height = 30;
  auto r = render_slice(job);
  CHECK(r.image.width() == 80);
  CHECK(r.panels == 2);
}

TEST_CASE("PPM round trip and PNG output") {
  Image img(3, 2, {1, 2, 3});
  img.set(2, 1, {200, 100, 50});
  const auto dir = std::filesystem::temp_directory_path();
  const std::string ppm = (dir / "cubicslice_test.ppm").string(), png = (dir / "cubicslice_test.png").string();
  write_image(img, ppm);
  Image back = read_ppm(ppm);
  CHECK(back.bytes() == img.bytes());
  write_image(img, png);
  CHECK(std::filesystem::file_size(png) > 8);
  std::remove(ppm.c_str());
  std::remove(png.c_str());
}

TEST_CASE("window parsing") {
  Window w = parse_window("-2,2,-1,1");
  CHECK(w.lo == std::complex<double>(-2, -1));
  CHECK(w.hi == std::complex<double>(2, 1));
  CHECK_THROWS(parse_window("1,0,0,1"));
  CHECK(w_boundary_angles().size() == 8);
}
