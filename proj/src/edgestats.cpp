#include "igdepth/edgestats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace igdepth {

BoundaryMap::BoundaryMap(int width, int height)
    : BoundaryMap(width, height,
                  std::vector<std::uint8_t>(
                      static_cast<std::size_t>(std::max(width, 0)) *
                          std::max(height, 0),
                      0)) {}

BoundaryMap::BoundaryMap(int width, int height, std::vector<std::uint8_t> flags)
    : width_(width), height_(height), flags_(std::move(flags)) {
  if (width < 1 || height < 1) throw_usage("BoundaryMap: empty image");
  if (flags_.size() != static_cast<std::size_t>(width) * height) {
    throw_data("BoundaryMap: buffer does not match width*height");
  }
}

std::size_t BoundaryMap::count() const {
  return static_cast<std::size_t>(
      std::count_if(flags_.begin(), flags_.end(), [](auto f) { return f; }));
}

BoundaryMap depth_boundaries(const DepthMap& d, double rel_threshold) {
  if (!(rel_threshold >= 0.0)) {
    throw_usage("depth_boundaries: threshold must be >= 0");
  }
  const int w = d.width(), h = d.height();
  BoundaryMap out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!d.valid(x, y)) continue;
      const double v = d.at(x, y);
      if (v <= 0.0) continue;
      double g = 0.0;
      if (x + 1 < w && d.valid(x + 1, y)) g = std::abs(d.at(x + 1, y) - v);
      if (y + 1 < h && d.valid(x, y + 1)) {
        g = std::max(g, std::abs(d.at(x, y + 1) - v));
      }
      if (g / v > rel_threshold) out.set(x, y, true);
    }
  }
  return out;
}

void EdgeParams::validate() const {
  if (!(low > 0.0 && low <= high)) {
    throw_usage("rgb_edges: need 0 < low <= high");
  }
}

BoundaryMap rgb_edges(const RgbImage& image, const EdgeParams& params) {
  params.validate();
  const int w = image.width(), h = image.height();
  const auto px = [w](int x, int y) {
    return static_cast<std::size_t>(y) * w + x;
  };
  std::vector<double> luma(image.pixel_count());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Rgb c = image.at(x, y);
      luma[px(x, y)] = (0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2]) / 255.0;
    }
  }
  const auto l = [&](int x, int y) {
    return luma[px(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1))];
  };

  // A unit luma step gives a Sobel response of 4.
  constexpr double kStep = 4.0;
  std::vector<double> mag(luma.size());
  std::vector<std::uint8_t> dir(luma.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = (l(x + 1, y - 1) + 2 * l(x + 1, y) + l(x + 1, y + 1)) -
                        (l(x - 1, y - 1) + 2 * l(x - 1, y) + l(x - 1, y + 1));
      const double gy = (l(x - 1, y + 1) + 2 * l(x, y + 1) + l(x + 1, y + 1)) -
                        (l(x - 1, y - 1) + 2 * l(x, y - 1) + l(x + 1, y - 1));
      mag[px(x, y)] = std::hypot(gx, gy) / kStep;
      // 0: horizontal gradient, 1: 45 deg, 2: vertical, 3: 135 deg.
      const double ax = std::abs(gx), ay = std::abs(gy);
      std::uint8_t q;
      if (ay <= ax * 0.41421356237309503) {
        q = 0;
      } else if (ax <= ay * 0.41421356237309503) {
        q = 2;
      } else {
        q = (gx > 0) == (gy > 0) ? 1 : 3;
      }
      dir[px(x, y)] = q;
    }
  }

  static constexpr int kDx[4] = {1, 1, 0, -1};
  static constexpr int kDy[4] = {0, 1, 1, 1};
  const auto m = [&](int x, int y) {
    return (x < 0 || y < 0 || x >= w || y >= h) ? 0.0 : mag[px(x, y)];
  };
  // 0 none, 1 weak, 2 strong. Strict against the preceding neighbor and
  // non-strict against the following one, so a plateau keeps one pixel.
  std::vector<std::uint8_t> cls(luma.size(), 0);
  std::vector<std::size_t> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = mag[px(x, y)];
      if (v < params.low) continue;
      const int q = dir[px(x, y)];
      if (!(v > m(x - kDx[q], y - kDy[q]) && v >= m(x + kDx[q], y + kDy[q]))) {
        continue;
      }
      cls[px(x, y)] = v >= params.high ? 2 : 1;
      if (cls[px(x, y)] == 2) stack.push_back(px(x, y));
    }
  }

  std::vector<std::uint8_t> out(luma.size(), 0);
  for (const auto i : stack) out[i] = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const std::size_t j = px(nx, ny);
        if (cls[j] == 1 && !out[j]) {
          out[j] = 1;
          stack.push_back(j);
        }
      }
    }
  }
  return {w, h, std::move(out)};
}

namespace {

// Summed-area table with a zero border row and column.
class BoxCounter {
 public:
  explicit BoxCounter(const BoundaryMap& b)
      : w_(b.width()), h_(b.height()),
        sums_(static_cast<std::size_t>(w_ + 1) * (h_ + 1), 0) {
    for (int y = 0; y < h_; ++y) {
      std::size_t row = 0;
      for (int x = 0; x < w_; ++x) {
        row += b.at(x, y) ? 1 : 0;
        sums_[idx(x + 1, y + 1)] = sums_[idx(x + 1, y)] + row;
      }
    }
  }

  bool any_within(int x, int y, int tol) const {
    const int x0 = std::max(0, x - tol), x1 = std::min(w_, x + tol + 1);
    const int y0 = std::max(0, y - tol), y1 = std::min(h_, y + tol + 1);
    return sums_[idx(x1, y1)] + sums_[idx(x0, y0)] >
           sums_[idx(x0, y1)] + sums_[idx(x1, y0)];
  }

 private:
  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(y) * (w_ + 1) + x;
  }
  int w_, h_;
  std::vector<std::size_t> sums_;
};

double matched_fraction(const BoundaryMap& given, const BoundaryMap& target,
                        int tol) {
  const BoxCounter box(target);
  std::size_t total = 0, hit = 0;
  for (int y = 0; y < given.height(); ++y) {
    for (int x = 0; x < given.width(); ++x) {
      if (!given.at(x, y)) continue;
      ++total;
      hit += box.any_within(x, y, tol) ? 1 : 0;
    }
  }
  return static_cast<double>(hit) / static_cast<double>(total);
}

}  // namespace

EdgeProbabilities conditional_probabilities(const BoundaryMap& b_rgb,
                                            const BoundaryMap& b_depth,
                                            int tol) {
  if (tol < 0) throw_usage("conditional_probabilities: tol must be >= 0");
  if (b_rgb.width() != b_depth.width() || b_rgb.height() != b_depth.height()) {
    throw_data("conditional_probabilities: boundary map sizes differ");
  }
  if (b_depth.count() == 0) {
    throw_data("conditional_probabilities: no depth boundaries");
  }
  if (b_rgb.count() == 0) {
    throw_data("conditional_probabilities: no RGB edges");
  }
  return {matched_fraction(b_depth, b_rgb, tol),
          matched_fraction(b_rgb, b_depth, tol)};
}

RgbImage boundary_overlay(const BoundaryMap& b_rgb,
                          const BoundaryMap& b_depth) {
  if (b_rgb.width() != b_depth.width() || b_rgb.height() != b_depth.height()) {
    throw_data("boundary_overlay: boundary map sizes differ");
  }
  RgbImage out(b_rgb.width(), b_rgb.height());
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const bool r = b_rgb.at(x, y), d = b_depth.at(x, y);
      if (r && d) {
        out.set(x, y, {0, 0, 255});
      } else if (d) {
        out.set(x, y, {255, 0, 0});
      } else if (r) {
        out.set(x, y, {0, 255, 0});
      }
    }
  }
  return out;
}

}  // namespace igdepth
