#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zitterdyn/spectrum.hpp"

namespace zitterdyn {

/// RGB raster of f over a box. Row 0 is the top edge (largest Im).
struct DomainColorImage {
  int width = 0;
  int height = 0;
  Box box;
  std::vector<std::uint8_t> rgb;  // width * height * 3

  /// Center of pixel (col, row) in the complex plane.
  cplx pixel_center(int col, int row) const;
  /// Pixel containing z, or false if z is outside the box.
  bool locate(cplx z, int& col, int& row) const;
};

/// Hue = arg f in [0, 360), lightness a sawtooth over each octave of |f|, fixed saturation.
void domain_color(cplx f, std::uint8_t out[3]);

/// Square image of resolution x resolution pixels; rows are evaluated in parallel.
DomainColorImage render_domain_coloring(double beta, const Box& box, int resolution);

/// Draws a 5-pixel white cross at every root inside the box.
void overlay_roots(DomainColorImage& image, const RootSet& roots);

/// Binary PPM (P6, maxval 255).
void write_ppm(const DomainColorImage& image, const std::string& path);
std::vector<std::uint8_t> encode_ppm(const DomainColorImage& image);

}  // namespace zitterdyn
