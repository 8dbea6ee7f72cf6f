#ifndef IGDEPTH_RECONSTRUCT_HPP
#define IGDEPTH_RECONSTRUCT_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "igdepth/core.hpp"
#include "igdepth/sampler.hpp"
#include "igdepth/superpixel.hpp"

namespace igdepth {

/// Depth in the log(d + 1) domain. Values are any finite real.
class LogDepthMap {
 public:
  LogDepthMap() = default;
  LogDepthMap(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  double at(int x, int y) const {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::span<const double> values() const { return values_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

enum class SceneType { Indoor, Outdoor };

struct BilateralParams {
  double spatial_sigma = 1.0;  // pixels
  double range_sigma = 0.05;   // log-depth units
  int window_radius = 2;       // pixels

  /// Defaults coupled to the superpixel pitch S = sqrt(pixels / n):
  /// spatial 0.75 S, range 0.05 indoor / 0.08 outdoor, radius ceil(2 sigma).
  static BilateralParams for_budget(int width, int height, std::size_t n,
                                    SceneType scene);
  void validate() const;
};

/// Range sigmas at or below this value return the input unchanged.
inline constexpr double kRangeSigmaShortcut = 1e-6;

enum class UnsampledSegments {
  Error,          // every segment must hold exactly one sample
  NearestSample,  // sample-less segments take the sample nearest their CoM
};

/// Piecewise-constant fill: each segment takes the depth of its sample.
/// Multiple samples in one segment is always an error.
DepthMap zero_order_fill(const SegmentMap& segments, const SampleSet& samples,
                         UnsampledSegments policy = UnsampledSegments::Error);

/// log(d + 1) on every pixel; invalid pixels are an error.
LogDepthMap log_transform(const DepthMap& d);
/// exp(v) - 1. Values below zero cannot be depths and are an error.
DepthMap exp_transform(const LogDepthMap& v);

/// Bilateral filter with Gaussian spatial and range kernels over a square
/// window clipped to the image.
LogDepthMap bilateral_filter(const LogDepthMap& input,
                             const BilateralParams& params);

/// Zero-order fill, log, bilateral, exp.
DepthMap zero_order_bilateral(const SegmentMap& segments,
                              const SampleSet& samples,
                              const BilateralParams& params,
                              UnsampledSegments policy =
                                  UnsampledSegments::NearestSample);

/// Partition assigning each pixel to its nearest sample (lower sample index
/// on ties). Label i is sample i.
SegmentMap nearest_sample_segments(const SampleSet& samples);

/// Delaunay triangulation of the sample positions with barycentric-linear
/// interpolation inside the hull and nearest-sample values outside.
DepthMap bilinear_baseline(const SampleSet& samples, int width, int height);

struct FirstOrderStats {
  std::size_t planar_segments = 0;
  std::size_t degenerate_segments = 0;  // fell back to the sample mean
  std::size_t unsampled_segments = 0;   // took the nearest sample
};

/// Least-squares plane per segment through the samples inside it. Planes
/// are evaluated over their segment and clamped at zero depth.
DepthMap first_order_fill(const SegmentMap& segments, const SampleSet& samples,
                          FirstOrderStats* stats = nullptr);

/// Simulated or real range measurement of a pattern. The segment map is
/// available for in-segment relocation of invalid reads.
using Sensor =
    std::function<SampleSet(const SamplePattern&, const SegmentMap*)>;

/// Noiseless sensor reading dense ground truth.
Sensor simulated_sensor(const DepthMap& gt, double noise_sigma = 0.0,
                        std::uint64_t noise_seed = 0);

struct PipelineParams {
  SlicParams slic;  // target_segments is overwritten by the budget
  SceneType scene = SceneType::Outdoor;
  /// When unset, BilateralParams::for_budget decides.
  std::optional<BilateralParams> bilateral;
};

struct Reconstruction {
  DepthMap depth;
  SampleSet samples;
  SegmentMap segments;
  BilateralParams bilateral;
};

/// The image-guided pipeline: SLIC with n segments, one sample at each
/// segment center of mass, zero-order fill, log-domain bilateral filter.
Reconstruction reconstruct_ours(const RgbImage& image, const Sensor& sensor,
                                std::size_t n, const PipelineParams& params);

/// n/3 SLIC segments, three spread samples each, per-segment planes.
Reconstruction first_order_baseline(const RgbImage& image,
                                    const Sensor& sensor, std::size_t n,
                                    const SlicParams& slic,
                                    FirstOrderStats* stats = nullptr);

}  // namespace igdepth

#endif  // IGDEPTH_RECONSTRUCT_HPP
