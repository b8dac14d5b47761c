#include "zitterdyn/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "zitterdyn/errors.hpp"
#include "zitterdyn/parallel.hpp"

namespace zitterdyn {
namespace {

constexpr double kSaturation = 0.9;

double hue_to_channel(double p, double q, double t) {
  if (t < 0.0) t += 1.0;
  if (t >= 1.0) t -= 1.0;
  if (t < 1.0 / 6.0) return p + (q - p) * 6.0 * t;
  if (t < 0.5) return q;
  if (t < 2.0 / 3.0) return p + (q - p) * (2.0 / 3.0 - t) * 6.0;
  return p;
}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

}  // namespace

cplx DomainColorImage::pixel_center(int col, int row) const {
  const double sx = box.width() / width;
  const double sy = box.height() / height;
  return {box.re_min + (col + 0.5) * sx, box.im_max - (row + 0.5) * sy};
}

bool DomainColorImage::locate(cplx z, int& col, int& row) const {
  if (!box.contains(z)) return false;
  col = std::min(width - 1, static_cast<int>((z.real() - box.re_min) / box.width() * width));
  row = std::min(height - 1, static_cast<int>((box.im_max - z.imag()) / box.height() * height));
  return true;
}

void domain_color(cplx f, std::uint8_t out[3]) {
  const double mag = std::abs(f);
  if (!std::isfinite(mag)) {
    out[0] = out[1] = out[2] = 255;
    return;
  }
  if (mag == 0.0) {
    out[0] = out[1] = out[2] = 0;
    return;
  }
  double hue = std::atan2(f.imag(), f.real()) / (2.0 * std::numbers::pi);
  if (hue < 0.0) hue += 1.0;
  if (hue >= 1.0) hue = 0.0;
  const double octave = std::log2(mag);
  const double frac = octave - std::floor(octave);
  const double light = 0.35 + 0.3 * frac;
  const double q = light < 0.5 ? light * (1.0 + kSaturation) : light + kSaturation - light * kSaturation;
  const double p = 2.0 * light - q;
  out[0] = to_byte(hue_to_channel(p, q, hue + 1.0 / 3.0));
  out[1] = to_byte(hue_to_channel(p, q, hue));
  out[2] = to_byte(hue_to_channel(p, q, hue - 1.0 / 3.0));
}

DomainColorImage render_domain_coloring(double beta, const Box& box, int resolution) {
  if (!(std::abs(beta) < 1.0)) throw InvalidArgument("|beta| must be < 1");
  if (resolution < 1 || resolution > 8192) throw InvalidArgument("resolution must be in [1, 8192]");
  if (!(box.re_min < box.re_max) || !(box.im_min < box.im_max)) throw InvalidArgument("render box is degenerate");
  DomainColorImage img;
  img.width = resolution;
  img.height = resolution;
  img.box = box;
  img.rgb.assign(static_cast<std::size_t>(resolution) * resolution * 3, 0);
  parallel_for(static_cast<std::size_t>(resolution), [&](std::size_t row) {
    std::uint8_t* line = img.rgb.data() + row * static_cast<std::size_t>(resolution) * 3;
    for (int col = 0; col < resolution; ++col) {
      domain_color(char_fn(img.pixel_center(col, static_cast<int>(row)), beta), line + 3 * col);
    }
  });
  return img;
}

void overlay_roots(DomainColorImage& img, const RootSet& roots) {
  for (const auto& r : roots.roots) {
    int col = 0, row = 0;
    if (!img.locate(r.mu, col, row)) continue;
    for (int k = -2; k <= 2; ++k) {
      for (const auto& [c, rr] : {std::pair{col + k, row}, std::pair{col, row + k}}) {
        if (c < 0 || c >= img.width || rr < 0 || rr >= img.height) continue;
        std::uint8_t* px = img.rgb.data() + (static_cast<std::size_t>(rr) * img.width + c) * 3;
        px[0] = px[1] = px[2] = 255;
      }
    }
  }
}

std::vector<std::uint8_t> encode_ppm(const DomainColorImage& img) {
  const std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.rgb.begin(), img.rgb.end());
  return out;
}

void write_ppm(const DomainColorImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path);
  const auto bytes = encode_ppm(img);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InvalidArgument("failed writing " + path);
}

}  // namespace zitterdyn
