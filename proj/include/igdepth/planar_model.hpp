#ifndef IGDEPTH_PLANAR_MODEL_HPP
#define IGDEPTH_PLANAR_MODEL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "igdepth/core.hpp"

namespace igdepth {

/// depth(x, y) = a x + b y + c, x and y in pixels, depth in meters.
struct Plane {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double operator()(double x, double y) const { return a * x + b * y + c; }
};

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;
  double depth = 0.0;
};

/// Least-squares plane through the points (column-pivoted QR on centered
/// coordinates). Throws ErrorKind::Data for fewer than 3 points or when the
/// (x, y) positions are collinear.
Plane fit_plane(std::span<const PlanePoint> points);

struct ModelStats {
  int regions = 0;       // N
  double delta = 0.0;    // fraction of pixels outside the valid set V
  double epsilon = 0.0;  // RMSE over V, meters
};

/// Piecewise-planar approximation of a depth map.
struct PlanarModel {
  SegmentMap segments;        // region i carries planes[i]
  std::vector<Plane> planes;
  EvalMask validity;          // V
  ModelStats stats;

  /// Plane predictions over the whole image, clamped at zero depth.
  DepthMap render() const;
};

struct FitModelParams {
  double inlier_tol = 0.1;      // meters at depths up to depth_ref
  double depth_ref = 10.0;      // tolerance grows linearly beyond this depth
  bool relative_tol = true;     // false: inlier_tol is absolute everywhere
  double min_region_fraction = 0.002;
  std::size_t min_region_px = 0;  // overrides the fraction when non-zero
  double delta_target = 0.1;
  int max_regions = 128;
  int hypotheses = 64;          // RANSAC triples per extracted region
  int max_failures = 8;         // consecutive rejected rounds before stopping
  std::uint64_t seed = 1;

  void validate() const;
  double tolerance_at(double depth) const;
};

/// Greedy sequential plane extraction: local RANSAC triples, least-squares
/// refinement, largest 4-connected inlier component kept as a region.
/// Stops when delta <= delta_target, at max_regions, or after max_failures
/// consecutive rejected rounds. Pixels outside every region have v = 0 and
/// are attached to the nearest region for the partition.
PlanarModel fit_model(const DepthMap& depth, const FitModelParams& params);

/// RMSE of the model prediction over its validity set.
double rmse_v(const DepthMap& depth, const PlanarModel& model);

/// Lower bound on the sample count: three per plane.
std::size_t min_samples(const PlanarModel& model);
/// Same bound for a (possibly fractional) mean region count, rounded half up.
std::size_t min_samples(double mean_regions);

}  // namespace igdepth

#endif  // IGDEPTH_PLANAR_MODEL_HPP
