#ifndef IGDEPTH_SRC_NEAREST_HPP
#define IGDEPTH_SRC_NEAREST_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "igdepth/core.hpp"

namespace igdepth::detail {

// Bucket grid for nearest-point queries on integer positions. Equal
// distances resolve to the lower point index.
class NearestIndex {
 public:
  NearestIndex(std::span<const Pixel> points, int width, int height)
      : points_(points.begin(), points.end()) {
    const double area = static_cast<double>(width) * height;
    cell_ = std::max(1, static_cast<int>(std::sqrt(
                            area / std::max<std::size_t>(1, points_.size()))));
    gw_ = width / cell_ + 1;
    gh_ = height / cell_ + 1;
    buckets_.resize(static_cast<std::size_t>(gw_) * gh_);
    for (std::size_t i = 0; i < points_.size(); ++i) {
      buckets_[bucket(points_[i].x / cell_, points_[i].y / cell_)].push_back(
          static_cast<int>(i));
    }
  }

  int nearest(int x, int y) const {
    const int cx = x / cell_, cy = y / cell_;
    int best = -1;
    std::int64_t best_d = std::numeric_limits<std::int64_t>::max();
    const int max_ring = std::max(gw_, gh_);
    for (int r = 0; r <= max_ring; ++r) {
      for (int gy = cy - r; gy <= cy + r; ++gy) {
        if (gy < 0 || gy >= gh_) continue;
        const bool edge_row = (gy == cy - r || gy == cy + r);
        for (int gx = cx - r; gx <= cx + r; gx += (edge_row ? 1 : 2 * r)) {
          if (gx >= 0 && gx < gw_) {
            for (const int i : buckets_[bucket(gx, gy)]) {
              const std::int64_t dx = points_[i].x - x;
              const std::int64_t dy = points_[i].y - y;
              const std::int64_t d = dx * dx + dy * dy;
              if (d < best_d || (d == best_d && i < best)) {
                best_d = d;
                best = i;
              }
            }
          }
          if (r == 0) break;
        }
      }
      // Anything outside ring r is at least r * cell away.
      const std::int64_t reach = static_cast<std::int64_t>(r) * cell_;
      if (best >= 0 && best_d < reach * reach) break;
    }
    return best;
  }

 private:
  std::size_t bucket(int gx, int gy) const {
    return static_cast<std::size_t>(gy) * gw_ + gx;
  }

  std::vector<Pixel> points_;
  int cell_ = 1;
  int gw_ = 1;
  int gh_ = 1;
  std::vector<std::vector<int>> buckets_;
};

}  // namespace igdepth::detail

#endif  // IGDEPTH_SRC_NEAREST_HPP
