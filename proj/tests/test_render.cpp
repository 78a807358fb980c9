#include <unistd.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "tandyn/render.hpp"
#include "tandyn/types.hpp"

using namespace tandyn;

namespace {

std::array<unsigned char, 3> px(const RasterImage& img, int i, int j) {
  const size_t at = 3 * (static_cast<size_t>(i) * img.cols + j);
  return {img.pixels[at], img.pixels[at + 1], img.pixels[at + 2]};
}

}  // namespace

TEST_CASE("pixel_point maps pixel centers affinely and exactly") {
  Viewport vp;
  vp.center = Cx(0.25, -1.5);
  vp.width = 3.0;
  vp.cols = 7;
  vp.rows = 5;
  const double h = vp.width / (2.0 * vp.cols);
  for (int i = 0; i < vp.rows; ++i) {
    for (int j = 0; j < vp.cols; ++j) {
      const Cx expect(vp.center.real() + (2 * j + 1 - vp.cols) * h,
                      vp.center.imag() + (vp.rows - 1 - 2 * i) * h);
      CHECK(pixel_point(vp, i, j) == expect);
    }
  }
  // The width spans the pixel centers' extent plus one pixel.
  CHECK(pixel_point(vp, 0, vp.cols - 1).real() - pixel_point(vp, 0, 0).real() ==
        doctest::Approx(vp.width * (vp.cols - 1) / vp.cols));
}

TEST_CASE("a center-0 viewport has bitwise-negated mirror pixels") {
  Viewport vp;
  vp.center = Cx(0.0, 0.0);
  vp.width = 5.0;
  vp.cols = 6;
  vp.rows = 4;
  for (int i = 0; i < vp.rows; ++i) {
    for (int j = 0; j < vp.cols; ++j) {
      const Cx a = pixel_point(vp, i, j);
      const Cx b = pixel_point(vp, vp.rows - 1 - i, vp.cols - 1 - j);
      CHECK(b.real() == -a.real());
      CHECK(b.imag() == -a.imag());
    }
  }
}

TEST_CASE("single-pixel parameter renders hit the palette exactly") {
  Viewport vp;
  vp.width = 1e-6;
  vp.cols = 1;
  vp.rows = 1;

  vp.center = Cx(0.5, 0.0);
  CHECK(px(render_parameter_plane(vp, 500), 0, 0) == kUnitDiskColor);

  vp.center = Cx(0.0, 0.0);  // lambda = 0 is not a parameter: black
  CHECK(px(render_parameter_plane(vp, 500), 0, 0) == kUndeterminedColor);

  // The asymptotic value sits on a pole, so no component is certified;
  // undetermined parameter pixels are black regardless of the reason.
  vp.center = Cx(0.0, 0.5 * kPi);
  CHECK(px(render_parameter_plane(vp, 500), 0, 0) == kUndeterminedColor);

  vp.center = Cx(2.0, 0.0);
  CHECK(px(render_parameter_plane(vp, 500), 0, 0) ==
        param_palette_color(1, ComponentKind::TwoCycles));

  vp.center = Cx(-2.0, 0.0);
  CHECK(px(render_parameter_plane(vp, 500), 0, 0) ==
        param_palette_color(1, ComponentKind::SingleDoubled));
}

TEST_CASE("single-pixel dynamic renders color by orbit outcome") {
  Viewport vp;
  vp.width = 1e-6;
  vp.cols = 1;
  vp.rows = 1;
  const Parameter lam(2.0);

  vp.center = Cx(0.0, 1.0);  // attracted to the imaginary fixed point
  const auto attracted = px(render_dynamic_plane(lam, vp, 500), 0, 0);
  CHECK(attracted != kUndeterminedColor);
  CHECK(attracted != kPrepoleHitColor);

  vp.center = Cx(0.5 * kPi, 0.0);  // a pole: white
  CHECK(px(render_dynamic_plane(lam, vp, 500), 0, 0) == kPrepoleHitColor);

  vp.center = Cx(0.7, 0.0);  // the real line is the Julia set: never settles
  CHECK(px(render_dynamic_plane(lam, vp, 300), 0, 0) == kUndeterminedColor);
}

TEST_CASE("renders carry reproduction metadata") {
  Viewport vp;
  vp.center = Cx(0.5, -0.25);
  vp.width = 2.0;
  vp.cols = 3;
  vp.rows = 2;
  const RasterImage img = render_parameter_plane(vp, 77);
  CHECK(img.metadata.at("type") == "parameter");
  CHECK(img.metadata.at("center") == "0.5-0.25i");
  CHECK(img.metadata.at("width") == "2");
  CHECK(img.metadata.at("cols") == "3");
  CHECK(img.metadata.at("rows") == "2");
  CHECK(img.metadata.at("budget") == "77");
  CHECK(img.metadata.at("palette") == "default");
  CHECK(img.metadata.at("version") == kVersion);
  CHECK(img.metadata.count("lambda") == 0);

  const RasterImage dyn =
      render_dynamic_plane(Parameter(Cx(0.0, 1.2)), vp, 50);
  CHECK(dyn.metadata.at("type") == "dynamic");
  CHECK(dyn.metadata.at("lambda") == "0+1.2i");
}

TEST_CASE("renders are byte-identical across thread counts") {
  Viewport vp;
  vp.center = Cx(0.3, 0.4);
  vp.width = 8.0;
  vp.cols = 48;
  vp.rows = 32;
  RasterImage one, four, dyn1, dyn4;
  {
    testutil::EnvGuard guard("TANDYN_THREADS", "1");
    one = render_parameter_plane(vp, 300);
    dyn1 = render_dynamic_plane(Parameter(2.0), vp, 300);
  }
  {
    testutil::EnvGuard guard("TANDYN_THREADS", "4");
    four = render_parameter_plane(vp, 300);
    dyn4 = render_dynamic_plane(Parameter(2.0), vp, 300);
  }
  CHECK(one.pixels == four.pixels);
  CHECK(dyn1.pixels == dyn4.pixels);
}

TEST_CASE("render_thread_count honors and clamps TANDYN_THREADS") {
  {
    testutil::EnvGuard g("TANDYN_THREADS", "7");
    CHECK(render_thread_count() == 7);
  }
  {
    testutil::EnvGuard g("TANDYN_THREADS", "0");
    CHECK(render_thread_count() == 1);
  }
  {
    testutil::EnvGuard g("TANDYN_THREADS", "999");
    CHECK(render_thread_count() == 256);
  }
  {
    testutil::EnvGuard g("TANDYN_THREADS", "abc");
    CHECK(render_thread_count() >= 1);
  }
  {
    testutil::EnvGuard g("TANDYN_THREADS", nullptr);
    CHECK(render_thread_count() >= 1);
  }
}

TEST_CASE("conjugate viewports render as mirror images") {
  Viewport up;
  up.center = Cx(0.4, 0.9);
  up.width = 5.0;
  up.cols = 24;
  up.rows = 16;
  Viewport down = up;
  down.center = std::conj(up.center);
  const RasterImage a = render_parameter_plane(up, 400);
  const RasterImage b = render_parameter_plane(down, 400);
  for (int i = 0; i < up.rows; ++i) {
    for (int j = 0; j < up.cols; ++j) {
      CHECK(px(a, i, j) == px(b, up.rows - 1 - i, j));
    }
  }
}

TEST_CASE("dynamic images are invariant under 180-degree rotation") {
  Viewport vp;
  vp.center = Cx(0.0, 0.0);
  vp.width = 6.0;
  vp.cols = 48;
  vp.rows = 48;
  const RasterImage img =
      render_dynamic_plane(Parameter(Cx(1.0, 0.3)), vp, 400);
  for (int i = 0; i < vp.rows; ++i) {
    for (int j = 0; j < vp.cols; ++j) {
      CHECK(px(img, i, j) == px(img, vp.rows - 1 - i, vp.cols - 1 - j));
    }
  }
}

TEST_CASE("PPM encoding is the exact binary P6 format") {
  RasterImage img;
  img.cols = 1;
  img.rows = 1;
  img.pixels = {10, 20, 30};
  const std::string bytes = encode_ppm(img);
  std::string expect = "P6\n1 1\n255\n";
  expect.push_back(static_cast<char>(10));
  expect.push_back(static_cast<char>(20));
  expect.push_back(static_cast<char>(30));
  CHECK(bytes == expect);

  RasterImage wide;
  wide.cols = 3;
  wide.rows = 2;
  wide.pixels.assign(18, 0);
  for (size_t k = 0; k < wide.pixels.size(); ++k) {
    wide.pixels[k] = static_cast<unsigned char>(7 * k + 3);
  }
  const RasterImage back = decode_ppm(encode_ppm(wide));
  CHECK(back.cols == 3);
  CHECK(back.rows == 2);
  CHECK(back.pixels == wide.pixels);
}

TEST_CASE("decode_ppm rejects malformed input") {
  CHECK_THROWS_AS(decode_ppm("P5\n1 1\n255\nxyz"), std::invalid_argument);
  CHECK_THROWS_AS(decode_ppm("P6\n1 1\n254\nxyz"), std::invalid_argument);
  CHECK_THROWS_AS(decode_ppm("P6\n2 2\n255\nab"), std::invalid_argument);
  CHECK_THROWS_AS(decode_ppm(""), std::invalid_argument);
}

TEST_CASE("metadata sidecars round-trip through their text form") {
  RasterImage img;
  img.cols = 2;
  img.rows = 1;
  img.pixels.assign(6, 9);
  img.metadata["type"] = "parameter";
  img.metadata["center"] = "0+0i";
  img.metadata["width"] = "4";
  const std::string text = encode_meta(img);
  CHECK(parse_meta(text) == img.metadata);
  // Sorted key order, one key=value per line.
  CHECK(text == "center=0+0i\ntype=parameter\nwidth=4\n");
}

TEST_CASE("write_ppm_with_meta produces matching files on disk") {
  namespace fs = std::filesystem;
  Viewport vp;
  vp.center = Cx(0.0, 1.5);
  vp.width = 2.0;
  vp.cols = 8;
  vp.rows = 6;
  const RasterImage img = render_parameter_plane(vp, 150);
  const fs::path dir =
      fs::temp_directory_path() /
      ("tandyn_render_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string path = (dir / "out.ppm").string();
  write_ppm_with_meta(img, path);
  REQUIRE(fs::exists(path));
  REQUIRE(fs::exists(path + ".meta"));

  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  const RasterImage back = decode_ppm(bytes);
  CHECK(back.pixels == img.pixels);

  std::ifstream min(path + ".meta");
  std::string mtext((std::istreambuf_iterator<char>(min)),
                    std::istreambuf_iterator<char>());
  CHECK(parse_meta(mtext) == img.metadata);

  CHECK_THROWS_AS(
      write_ppm_with_meta(img, (dir / "no_such_dir" / "out.ppm").string()),
      Error);
  fs::remove_all(dir);
}

TEST_CASE("renders reject degenerate viewports") {
  Viewport bad;
  bad.width = 0.0;
  bad.cols = 4;
  bad.rows = 4;
  CHECK_THROWS_AS(render_parameter_plane(bad, 10), std::invalid_argument);
  bad.width = 1.0;
  bad.cols = 0;
  CHECK_THROWS_AS(render_parameter_plane(bad, 10), std::invalid_argument);
  bad.cols = 4;
  bad.rows = -1;
  CHECK_THROWS_AS(render_dynamic_plane(Parameter(1.0), bad, 10),
                  std::invalid_argument);
}
