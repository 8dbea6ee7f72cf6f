#ifndef IGDEPTH_DELAUNAY_HPP
#define IGDEPTH_DELAUNAY_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "igdepth/core.hpp"

namespace igdepth {

/// Delaunay triangulation of integer pixel positions.
///
/// All predicates are exact (128-bit integer determinants). Cocircular
/// configurations are resolved by symbolic perturbation: point i is lifted
/// by eps^(i+1) on the paraboloid, so lower input indices dominate. The
/// result is therefore unique for a given input order and independent of
/// the insertion sequence.
class DelaunayTriangulation {
 public:
  /// Throws ErrorKind::Data for fewer than 3 points, duplicates, or an
  /// all-collinear input.
  explicit DelaunayTriangulation(std::span<const Pixel> points);

  /// Counter-clockwise vertex index triples (y axis pointing down means
  /// clockwise on screen).
  const std::vector<std::array<int, 3>>& triangles() const {
    return triangles_;
  }
  std::span<const Pixel> points() const { return points_; }

  /// Index of a triangle containing (x, y) (boundary inclusive), or nullopt
  /// outside the convex hull.
  std::optional<int> locate(double x, double y) const;

  /// Barycentric-linear interpolation of per-point values; nullopt outside
  /// the convex hull.
  std::optional<double> interpolate(std::span<const double> values, double x,
                                    double y) const;

 private:
  std::vector<Pixel> points_;
  std::vector<std::array<int, 3>> triangles_;
};

/// Orientation of (a, b, c): > 0 counter-clockwise in x-right/y-up terms.
std::int64_t orient2d(Pixel a, Pixel b, Pixel c);

/// Exact incircle determinant: > 0 iff d lies strictly inside the circle
/// through counter-clockwise a, b, c. No perturbation.
__int128 incircle(Pixel a, Pixel b, Pixel c, Pixel d);

}  // namespace igdepth

#endif  // IGDEPTH_DELAUNAY_HPP
