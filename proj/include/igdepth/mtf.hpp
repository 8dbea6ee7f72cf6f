#ifndef IGDEPTH_MTF_HPP
#define IGDEPTH_MTF_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "igdepth/core.hpp"

namespace igdepth {

struct ChartParams {
  int size = 1000;          // square chart side in pixels
  int sectors = 72;         // wedges; even sectors are near, odd are far
  double near_m = 5.0;
  double far_m = 20.0;
  std::uint64_t texture_seed = 1;

  void validate() const;
};

/// Sector star with binary depth and two procedural textures.
struct StarChart {
  RgbImage rgb;
  DepthMap depth;
  int sectors = 0;
  double center_x = 0.0;  // pixel coordinates of the star center
  double center_y = 0.0;
  double radius = 0.0;    // largest full circle inside the chart
  double near_m = 0.0;
  double far_m = 0.0;
};

StarChart generate_chart(const ChartParams& params);

/// Spatial frequency of the star pattern along a circle of radius r:
/// sectors / 2 cycles over the circumference 2 pi r.
double star_frequency(int sectors, double radius);

/// 16 log-spaced radii from 0.08 to 0.95 of the chart radius.
std::vector<double> default_radii(const StarChart& chart);

struct MtfPoint {
  double frequency = 0.0;   // cycles per pixel
  double mtf = 0.0;
  double radius = 0.0;      // pixels
  double modulation = 0.0;  // fundamental amplitude over the ideal
                            // square-wave fundamental of the depth step
};

/// Modulation transfer along circles of the given radii, sorted by
/// frequency. At each radius the fundamental of the reconstruction is
/// divided by the fundamental of the chart depth read the same way, then
/// the curve is normalized at the largest radius unless the response there
/// is below kMtfNoSignal.
std::vector<MtfPoint> compute_mtf(const StarChart& chart,
                                  const DepthMap& recon,
                                  std::span<const double> radii);

inline constexpr double kMtfNoSignal = 0.02;

}  // namespace igdepth

#endif  // IGDEPTH_MTF_HPP
