#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "tandyn/parameter_plane.hpp"
#include "tandyn/types.hpp"

namespace tandyn {

// An axis-aligned window onto the plane.  Pixel (0,0) is the top-left
// corner; pixel centers map affinely to the plane with square pixels, so the
// viewport height is width * rows / cols.
struct Viewport {
  Cx center{0.0, 0.0};
  double width = 4.0;
  int cols = 1;
  int rows = 1;
};

// The plane coordinate of the center of pixel (row i, col j).  Offsets are
// formed from exact integers ((2j+1-cols), (rows-1-2i)) so that mirrored
// pixel pairs get bitwise-negated coordinates - the renders' symmetry
// guarantees are exact, not approximate.
Cx pixel_point(const Viewport& vp, int i, int j);

// Row-major 8-bit RGB raster plus the key=value metadata that reproduces it.
struct RasterImage {
  int cols = 0;
  int rows = 0;
  std::vector<unsigned char> pixels;  // 3 * cols * rows bytes
  std::map<std::string, std::string> metadata;
};

inline constexpr std::array<unsigned char, 3> kUndeterminedColor{0, 0, 0};
inline constexpr std::array<unsigned char, 3> kPrepoleHitColor{255, 255, 255};
inline constexpr std::array<unsigned char, 3> kUnitDiskColor{127, 127, 127};

// The parameter-plane palette: hue follows the component period around the
// golden-angle sequence, lightness separates the kinds (TwoCycles light,
// SingleDoubled dark), UnitDisk is a fixed grey.
std::array<unsigned char, 3> param_palette_color(int period,
                                                 ComponentKind kind);

// Number of worker threads renders use: the TANDYN_THREADS environment
// variable when set (clamped to [1, 256]), else the hardware concurrency.
int render_thread_count();

// Classifies the parameter under every pixel center and colors it through
// param_palette_color; undetermined pixels (and a pixel exactly at
// lambda = 0) are black.  Deterministic: identical bytes for any thread
// count, because tiles own disjoint pixel ranges and share nothing.
RasterImage render_parameter_plane(const Viewport& vp, int budget,
                                   const std::string& palette = "default");

// Iterates the orbit of every pixel center under f_lambda and colors by
// outcome: each attracting cycle gets a hue from a negation-invariant hash
// of its point set, shaded by how fast the orbit was captured; orbits that
// hit a pole are white; undetermined pixels are black.
RasterImage render_dynamic_plane(const Parameter& lam, const Viewport& vp,
                                 int budget,
                                 const std::string& palette = "default");

// Binary PPM: "P6\n<cols> <rows>\n255\n" + row-major RGB bytes.
std::string encode_ppm(const RasterImage& img);
RasterImage decode_ppm(const std::string& bytes);  // pixels + dims only

// The metadata sidecar: "key=value\n" lines sorted by key.
std::string encode_meta(const RasterImage& img);
std::map<std::string, std::string> parse_meta(const std::string& text);

// Writes the PPM to `path` and the metadata sidecar to `path` + ".meta".
void write_ppm_with_meta(const RasterImage& img, const std::string& path);

}  // namespace tandyn
