#include "tandyn/render.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "tandyn/dynamics.hpp"
#include "tandyn/format.hpp"

namespace tandyn {

Cx pixel_point(const Viewport& vp, int i, int j) {
  const double h = vp.width / (2.0 * vp.cols);  // half a pixel pitch
  const double x = vp.center.real() + (2 * j + 1 - vp.cols) * h;
  const double y = vp.center.imag() + (vp.rows - 1 - 2 * i) * h;
  return Cx(x, y);
}

namespace {

std::array<unsigned char, 3> hsl_to_rgb(double h, double s, double l) {
  h -= std::floor(h);  // into [0,1)
  const double c = (1.0 - std::fabs(2.0 * l - 1.0)) * s;
  const double hp = 6.0 * h;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0.0, g = 0.0, b = 0.0;
  if (hp < 1.0) {
    r = c; g = x;
  } else if (hp < 2.0) {
    r = x; g = c;
  } else if (hp < 3.0) {
    g = c; b = x;
  } else if (hp < 4.0) {
    g = x; b = c;
  } else if (hp < 5.0) {
    r = x; b = c;
  } else {
    r = c; b = x;
  }
  const double m = l - 0.5 * c;
  auto chan = [m](double v) {
    long q = std::lround(255.0 * (v + m));
    return static_cast<unsigned char>(std::clamp(q, 0L, 255L));
  };
  return {chan(r), chan(g), chan(b)};
}

double fract(double v) { return v - std::floor(v); }

constexpr int kTile = 64;

// Runs fn(i, j) over every pixel, parallel over 64x64 tiles.  Tiles write
// disjoint pixels and are handed out by an atomic counter, so the result is
// identical for every thread count.
template <typename Fn>
void for_each_pixel(int cols, int rows, const Fn& fn) {
  const int tx = (cols + kTile - 1) / kTile;
  const int ty = (rows + kTile - 1) / kTile;
  const int tiles = tx * ty;
  const int nthreads = std::max(1, std::min(render_thread_count(), tiles));

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= tiles) return;
      const int i0 = (t / tx) * kTile;
      const int j0 = (t % tx) * kTile;
      const int i1 = std::min(i0 + kTile, rows);
      const int j1 = std::min(j0 + kTile, cols);
      for (int i = i0; i < i1; ++i)
        for (int j = j0; j < j1; ++j) fn(i, j);
    }
  };

  if (nthreads == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(nthreads));
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
}

void put_pixel(RasterImage& img, int i, int j,
               const std::array<unsigned char, 3>& rgb) {
  const size_t off =
      3 * (static_cast<size_t>(i) * static_cast<size_t>(img.cols) +
           static_cast<size_t>(j));
  img.pixels[off] = rgb[0];
  img.pixels[off + 1] = rgb[1];
  img.pixels[off + 2] = rgb[2];
}

void base_metadata(RasterImage& img, const Viewport& vp, int budget,
                   const std::string& palette, const char* type) {
  img.metadata["type"] = type;
  img.metadata["center"] = format_complex(vp.center);
  img.metadata["width"] = format_double(vp.width);
  img.metadata["cols"] = std::to_string(vp.cols);
  img.metadata["rows"] = std::to_string(vp.rows);
  img.metadata["budget"] = std::to_string(budget);
  img.metadata["palette"] = palette;
  img.metadata["version"] = kVersion;
}

void check_viewport(const Viewport& vp) {
  if (!(vp.width > 0.0) || vp.cols < 1 || vp.rows < 1)
    throw std::invalid_argument(
        "render: viewport needs width > 0 and at least one pixel");
}

// Negation-invariant 64-bit key of a cycle's point set: magnitudes of the
// coordinates on a 1e-6 grid, sorted, through FNV-1a.  Cycles that are
// negatives (or conjugates) of each other hash identically, which is what
// makes the dynamic images' 180-degree symmetry exact.
std::uint64_t cycle_key(const std::vector<Cx>& pts) {
  std::vector<std::pair<long long, long long>> q;
  q.reserve(pts.size());
  for (const Cx& z : pts)
    q.emplace_back(std::llround(std::fabs(z.real()) * 1e6),
                   std::llround(std::fabs(z.imag()) * 1e6));
  std::sort(q.begin(), q.end());
  std::uint64_t hash = 1469598103934665603ull;
  auto mix = [&hash](unsigned long long v) {
    for (int b = 0; b < 8; ++b) {
      hash ^= (v >> (8 * b)) & 0xffu;
      hash *= 1099511628211ull;
    }
  };
  for (const auto& [re, im] : q) {
    mix(static_cast<unsigned long long>(re));
    mix(static_cast<unsigned long long>(im));
  }
  return hash;
}

}  // namespace

std::array<unsigned char, 3> param_palette_color(int period,
                                                 ComponentKind kind) {
  if (kind == ComponentKind::UnitDisk) return kUnitDiskColor;
  const double hue = fract(period * 0.6180339887498949);
  const double light = kind == ComponentKind::TwoCycles ? 0.62 : 0.38;
  return hsl_to_rgb(hue, 0.85, light);
}

int render_thread_count() {
  if (const char* env = std::getenv("TANDYN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      return static_cast<int>(std::min(v, 256L));
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

RasterImage render_parameter_plane(const Viewport& vp, int budget,
                                   const std::string& palette) {
  check_viewport(vp);
  RasterImage img;
  img.cols = vp.cols;
  img.rows = vp.rows;
  img.pixels.assign(3 * static_cast<size_t>(vp.cols) * vp.rows, 0);
  base_metadata(img, vp, budget, palette, "parameter");

  for_each_pixel(vp.cols, vp.rows, [&](int i, int j) {
    const Cx lam = pixel_point(vp, i, j);
    std::array<unsigned char, 3> rgb = kUndeterminedColor;
    if (lam != Cx(0.0, 0.0)) {
      const Classification c = classify_parameter(Parameter(lam), budget);
      if (c.determined)
        rgb = param_palette_color(c.sample.period, c.sample.kind);
    }
    put_pixel(img, i, j, rgb);
  });
  return img;
}

RasterImage render_dynamic_plane(const Parameter& lam, const Viewport& vp,
                                 int budget, const std::string& palette) {
  check_viewport(vp);
  RasterImage img;
  img.cols = vp.cols;
  img.rows = vp.rows;
  img.pixels.assign(3 * static_cast<size_t>(vp.cols) * vp.rows, 0);
  base_metadata(img, vp, budget, palette, "dynamic");
  img.metadata["lambda"] = format_complex(lam.lambda);

  for_each_pixel(vp.cols, vp.rows, [&](int i, int j) {
    const Cx z0 = pixel_point(vp, i, j);
    const OrbitOutcome o = iterate_orbit(lam, ComplexPoint(z0), budget);
    std::array<unsigned char, 3> rgb = kUndeterminedColor;
    if (o.tag == OrbitTag::PrepoleHit) {
      rgb = kPrepoleHitColor;
    } else if (o.tag == OrbitTag::Attracted) {
      const double hue =
          static_cast<double>(cycle_key(o.cycle_points) % 1000003ull) /
          1000003.0;
      const double frac =
          std::min(1.0, static_cast<double>(o.captured_step) / budget);
      const double light = 0.68 - 0.34 * frac;
      rgb = hsl_to_rgb(hue, 0.8, light);
    }
    put_pixel(img, i, j, rgb);
  });
  return img;
}

std::string encode_ppm(const RasterImage& img) {
  if (img.pixels.size() != 3 * static_cast<size_t>(img.cols) * img.rows)
    throw std::invalid_argument("encode_ppm: pixel buffer size mismatch");
  std::string out = "P6\n" + std::to_string(img.cols) + " " +
                    std::to_string(img.rows) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.pixels.data()),
             img.pixels.size());
  return out;
}

RasterImage decode_ppm(const std::string& bytes) {
  int cols = 0, rows = 0, maxval = 0, consumed = 0;
  if (std::sscanf(bytes.c_str(), "P6\n%d %d\n%d\n%n", &cols, &rows, &maxval,
                  &consumed) != 3 ||
      maxval != 255 || cols < 1 || rows < 1)
    throw std::invalid_argument("decode_ppm: not a tandyn P6 image");
  const size_t need = 3 * static_cast<size_t>(cols) * rows;
  if (bytes.size() != static_cast<size_t>(consumed) + need)
    throw std::invalid_argument("decode_ppm: truncated pixel data");
  RasterImage img;
  img.cols = cols;
  img.rows = rows;
  img.pixels.assign(bytes.begin() + consumed, bytes.end());
  return img;
}

std::string encode_meta(const RasterImage& img) {
  std::string out;
  for (const auto& [k, v] : img.metadata) out += k + "=" + v + "\n";
  return out;  // std::map iterates sorted by key
}

std::map<std::string, std::string> parse_meta(const std::string& text) {
  std::map<std::string, std::string> out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string line = text.substr(pos, nl - pos);
    const size_t eq = line.find('=');
    if (eq != std::string::npos)
      out[line.substr(0, eq)] = line.substr(eq + 1);
    pos = nl + 1;
  }
  return out;
}

void write_ppm_with_meta(const RasterImage& img, const std::string& path) {
  {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("write_ppm_with_meta: cannot open " + path);
    const std::string bytes = encode_ppm(img);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error("write_ppm_with_meta: short write to " + path);
  }
  {
    const std::string mpath = path + ".meta";
    std::ofstream f(mpath, std::ios::binary);
    if (!f) throw Error("write_ppm_with_meta: cannot open " + mpath);
    const std::string text = encode_meta(img);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw Error("write_ppm_with_meta: short write to " + mpath);
  }
}

}  // namespace tandyn
