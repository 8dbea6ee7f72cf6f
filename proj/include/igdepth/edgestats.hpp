#ifndef IGDEPTH_EDGESTATS_HPP
#define IGDEPTH_EDGESTATS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "igdepth/core.hpp"

namespace igdepth {

/// Per-pixel boundary flags.
class BoundaryMap {
 public:
  BoundaryMap() = default;
  BoundaryMap(int width, int height);
  BoundaryMap(int width, int height, std::vector<std::uint8_t> flags);

  int width() const { return width_; }
  int height() const { return height_; }
  bool at(int x, int y) const {
    return flags_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool on) {
    flags_[static_cast<std::size_t>(y) * width_ + x] = on ? 1 : 0;
  }
  std::size_t count() const;
  std::span<const std::uint8_t> data() const { return flags_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> flags_;
};

inline constexpr double kDefaultDepthBoundaryThreshold = 0.05;

/// Marks (x, y) when max(|d(x+1,y) - d(x,y)|, |d(x,y+1) - d(x,y)|) / d(x,y)
/// exceeds `rel_threshold`. Differences toward invalid neighbors are skipped;
/// invalid or zero-depth pixels are never marked.
BoundaryMap depth_boundaries(const DepthMap& d,
                             double rel_threshold =
                                 kDefaultDepthBoundaryThreshold);

struct EdgeParams {
  /// Hysteresis thresholds as fractions of the Sobel response to a full
  /// black-to-white luma step (absolute, not relative to the image maximum).
  double high = 0.15;
  double low = 0.05;

  void validate() const;
};

/// Sobel gradient magnitude on luma, non-maximum suppression along the
/// quantized gradient direction, then hysteresis with 8-connectivity.
BoundaryMap rgb_edges(const RgbImage& image, const EdgeParams& params = {});

struct EdgeProbabilities {
  double rgb_given_depth = 0.0;  // fraction of depth boundaries near an RGB edge
  double depth_given_rgb = 0.0;  // fraction of RGB edges near a depth boundary
};

/// Matching within a (2 tol + 1)^2 window. Throws ErrorKind::Data when
/// either boundary set is empty.
EdgeProbabilities conditional_probabilities(const BoundaryMap& b_rgb,
                                            const BoundaryMap& b_depth,
                                            int tol = 2);

/// Overlay colors: depth-only red, RGB-only green, both blue, else black.
RgbImage boundary_overlay(const BoundaryMap& b_rgb, const BoundaryMap& b_depth);

}  // namespace igdepth

#endif  // IGDEPTH_EDGESTATS_HPP
