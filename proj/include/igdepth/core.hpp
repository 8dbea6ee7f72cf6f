#ifndef IGDEPTH_CORE_HPP
#define IGDEPTH_CORE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "igdepth/error.hpp"

namespace igdepth {

/// Integer pixel position: x is the column, y the row.
struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

using Rgb = std::array<std::uint8_t, 3>;

/// 8-bit, 3-channel color image stored row-major.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height);
  RgbImage(int width, int height, std::vector<std::uint8_t> interleaved);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  Rgb at(int x, int y) const {
    const std::size_t i = 3 * index(x, y);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = 3 * index(x, y);
    data_[i] = c[0];
    data_[i + 1] = c[1];
    data_[i + 2] = c[2];
  }
  std::span<const std::uint8_t> data() const { return data_; }

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Dense range image in meters with a per-pixel validity mask.
///
/// Valid pixels always hold a finite, non-negative depth. Invalid pixels
/// read back as 0 and are ignored by every metric.
class DepthMap {
 public:
  DepthMap() = default;
  /// All pixels valid with the given depth.
  DepthMap(int width, int height, double fill = 0.0);
  /// `valid` may be empty, meaning every pixel is valid.
  DepthMap(int width, int height, std::vector<double> depth,
           std::vector<std::uint8_t> valid = {});

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }
  bool same_shape(int width, int height) const {
    return width_ == width && height_ == height;
  }

  double at(int x, int y) const { return depth_[index(x, y)]; }
  bool valid(int x, int y) const { return valid_[index(x, y)] != 0; }
  double at(std::size_t i) const { return depth_[i]; }
  bool valid(std::size_t i) const { return valid_[i] != 0; }

  void set(int x, int y, double depth);
  void invalidate(int x, int y);

  std::span<const double> depth() const { return depth_; }
  std::span<const std::uint8_t> valid_mask() const { return valid_; }
  std::size_t valid_count() const;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> depth_;
  std::vector<std::uint8_t> valid_;
};

/// Per-pixel segment labels forming a partition of the image domain.
///
/// Construction checks that labels lie in [0, N) and that every label is
/// used. 4-connectivity is a property of SLIC output, not of the type; use
/// `is_four_connected` to check it.
class SegmentMap {
 public:
  SegmentMap() = default;
  SegmentMap(int width, int height, std::vector<std::int32_t> labels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return labels_.size(); }
  int num_segments() const { return num_segments_; }

  std::int32_t at(int x, int y) const {
    return labels_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::span<const std::int32_t> labels() const { return labels_; }

  /// Pixel count per segment.
  std::vector<std::size_t> segment_sizes() const;

 private:
  int width_ = 0;
  int height_ = 0;
  int num_segments_ = 0;
  std::vector<std::int32_t> labels_;
};

bool is_four_connected(const SegmentMap& segments);

struct Sample {
  int x = 0;
  int y = 0;
  double depth = 0.0;
};

/// Point depth measurements taken on a width x height image.
class SampleSet {
 public:
  SampleSet() = default;
  SampleSet(int width, int height, std::vector<Sample> entries,
            std::string sampler_id, std::size_t budget);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const Sample> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::string& sampler_id() const { return sampler_id_; }
  std::size_t budget() const { return budget_; }

  // Execution bookkeeping; see sampler::execute.
  std::size_t dropped = 0;
  std::size_t relocated = 0;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Sample> entries_;
  std::string sampler_id_;
  std::size_t budget_ = 0;
};

/// Evaluation region. A default-constructed mask of matching size includes
/// every pixel.
class EvalMask {
 public:
  EvalMask() = default;
  EvalMask(int width, int height, bool include_all = true);
  EvalMask(int width, int height, std::vector<std::uint8_t> include);

  static EvalMask all(int width, int height) { return {width, height, true}; }

  int width() const { return width_; }
  int height() const { return height_; }
  bool includes(std::size_t i) const { return include_[i] != 0; }
  bool includes(int x, int y) const {
    return include_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool on) {
    include_[static_cast<std::size_t>(y) * width_ + x] = on ? 1 : 0;
  }
  std::size_t count() const;
  std::span<const std::uint8_t> data() const { return include_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> include_;
};

inline constexpr double kNoRangeCap = std::numeric_limits<double>::infinity();

/// Root mean squared error over pixels inside `mask` whose ground truth is
/// valid and not above `range_cap`. Predictions are not clipped.
/// Throws ErrorKind::Data when the evaluated set is empty.
double rmse(const DepthMap& gt, const DepthMap& pred, const EvalMask& mask,
            double range_cap = kNoRangeCap);

/// Mean absolute relative error |gt - pred| / gt over the same pixel set as
/// `rmse`. Not symmetric in its arguments. Throws if an evaluated ground
/// truth pixel is zero.
double rel(const DepthMap& gt, const DepthMap& pred, const EvalMask& mask,
           double range_cap = kNoRangeCap);

/// Sampled pixels over total pixels.
double pixel_density(const SampleSet& samples, const DepthMap& image);

}  // namespace igdepth

#endif  // IGDEPTH_CORE_HPP
