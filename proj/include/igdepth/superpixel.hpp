#ifndef IGDEPTH_SUPERPIXEL_HPP
#define IGDEPTH_SUPERPIXEL_HPP

#include <array>

#include "igdepth/core.hpp"

namespace igdepth {

struct SlicParams {
  int target_segments = 100;
  double compactness = 20.0;
  int max_iterations = 10;
  /// Connected pieces smaller than this fraction of the mean segment area
  /// are merged into their dominant 4-neighbor.
  double min_segment_fraction = 0.25;

  void validate() const;
};

/// CIELAB (D65) value of an 8-bit sRGB color.
std::array<double, 3> srgb_to_lab(Rgb c);

/// Initial cluster lattice shared by SLIC and the grid sampler: rows is the
/// aspect-preserving round(sqrt(n*h/w)), clamped to [1, h].
int lattice_rows(int width, int height, int n);

/// SLIC over-segmentation in CIELAB + xy space with distance
/// sqrt(d_lab^2 + (d_xy/S)^2 m^2), followed by connectivity enforcement.
/// Deterministic; equidistant centers resolve to the lower cluster id.
SegmentMap slic_segment(const RgbImage& image, const SlicParams& params);

}  // namespace igdepth

#endif  // IGDEPTH_SUPERPIXEL_HPP
