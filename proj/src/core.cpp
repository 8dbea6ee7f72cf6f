#include "igdepth/core.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace igdepth {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    std::ostringstream os;
    os << "image dimensions must be positive, got " << width << "x" << height;
    throw_usage(os.str());
  }
}

template <class A, class B>
void check_same_shape(const A& a, const B& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    std::ostringstream os;
    os << what << ": dimension mismatch " << a.width() << "x" << a.height()
       << " vs " << b.width() << "x" << b.height();
    throw_data(os.str());
  }
}

bool evaluated(const DepthMap& gt, const EvalMask& mask, double range_cap,
               std::size_t i) {
  return mask.includes(i) && gt.valid(i) && gt.at(i) <= range_cap;
}

}  // namespace

RgbImage::RgbImage(int width, int height)
    : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(pixel_count() * 3, 0);
}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> interleaved)
    : width_(width), height_(height), data_(std::move(interleaved)) {
  check_dims(width, height);
  if (data_.size() != pixel_count() * 3) {
    throw_data("RgbImage: buffer length does not match width*height*3");
  }
}

DepthMap::DepthMap(int width, int height, double fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  if (!std::isfinite(fill) || fill < 0.0) {
    throw_data("DepthMap: fill depth must be finite and non-negative");
  }
  depth_.assign(pixel_count(), fill);
  valid_.assign(pixel_count(), 1);
}

DepthMap::DepthMap(int width, int height, std::vector<double> depth,
                   std::vector<std::uint8_t> valid)
    : width_(width),
      height_(height),
      depth_(std::move(depth)),
      valid_(std::move(valid)) {
  check_dims(width, height);
  if (valid_.empty()) valid_.assign(pixel_count(), 1);
  if (depth_.size() != pixel_count() || valid_.size() != pixel_count()) {
    throw_data("DepthMap: buffer length does not match width*height");
  }
  for (std::size_t i = 0; i < depth_.size(); ++i) {
    if (!valid_[i]) {
      depth_[i] = 0.0;
      continue;
    }
    valid_[i] = 1;
    if (!std::isfinite(depth_[i]) || depth_[i] < 0.0) {
      std::ostringstream os;
      os << "DepthMap: valid pixel " << i << " has depth " << depth_[i];
      throw_data(os.str());
    }
  }
}

void DepthMap::set(int x, int y, double depth) {
  if (!std::isfinite(depth) || depth < 0.0) {
    throw_data("DepthMap::set: depth must be finite and non-negative");
  }
  depth_[index(x, y)] = depth;
  valid_[index(x, y)] = 1;
}

void DepthMap::invalidate(int x, int y) {
  depth_[index(x, y)] = 0.0;
  valid_[index(x, y)] = 0;
}

std::size_t DepthMap::valid_count() const {
  return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), 1));
}

SegmentMap::SegmentMap(int width, int height, std::vector<std::int32_t> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
  check_dims(width, height);
  if (labels_.size() != static_cast<std::size_t>(width) * height) {
    throw_data("SegmentMap: label buffer does not match width*height");
  }
  const auto [lo, hi] = std::minmax_element(labels_.begin(), labels_.end());
  if (*lo < 0) throw_data("SegmentMap: negative label");
  num_segments_ = *hi + 1;
  std::vector<std::uint8_t> used(num_segments_, 0);
  for (auto l : labels_) used[l] = 1;
  if (std::find(used.begin(), used.end(), 0) != used.end()) {
    throw_data("SegmentMap: labels are not contiguous in [0, N)");
  }
}

std::vector<std::size_t> SegmentMap::segment_sizes() const {
  std::vector<std::size_t> sizes(num_segments_, 0);
  for (auto l : labels_) ++sizes[l];
  return sizes;
}

bool is_four_connected(const SegmentMap& segments) {
  const int w = segments.width();
  const int h = segments.height();
  const auto labels = segments.labels();
  std::vector<std::uint8_t> seen_label(segments.num_segments(), 0);
  std::vector<std::uint8_t> visited(labels.size(), 0);
  std::queue<std::size_t> todo;
  for (std::size_t start = 0; start < labels.size(); ++start) {
    if (visited[start]) continue;
    const auto label = labels[start];
    // A second component for an already seen label breaks connectivity.
    if (seen_label[label]) return false;
    seen_label[label] = 1;
    visited[start] = 1;
    todo.push(start);
    while (!todo.empty()) {
      const std::size_t i = todo.front();
      todo.pop();
      const int x = static_cast<int>(i % w);
      const int y = static_cast<int>(i / w);
      const std::size_t nbrs[4] = {i - 1, i + 1, i - w, i + w};
      const bool ok[4] = {x > 0, x + 1 < w, y > 0, y + 1 < h};
      for (int k = 0; k < 4; ++k) {
        if (ok[k] && !visited[nbrs[k]] && labels[nbrs[k]] == label) {
          visited[nbrs[k]] = 1;
          todo.push(nbrs[k]);
        }
      }
    }
  }
  return true;
}

SampleSet::SampleSet(int width, int height, std::vector<Sample> entries,
                     std::string sampler_id, std::size_t budget)
    : width_(width),
      height_(height),
      entries_(std::move(entries)),
      sampler_id_(std::move(sampler_id)),
      budget_(budget) {
  check_dims(width, height);
  if (entries_.size() > budget_) {
    throw_data("SampleSet: more entries than the sampling budget");
  }
  std::vector<std::uint8_t> taken(static_cast<std::size_t>(width) * height, 0);
  for (const auto& s : entries_) {
    if (s.x < 0 || s.y < 0 || s.x >= width || s.y >= height) {
      std::ostringstream os;
      os << "SampleSet: sample (" << s.x << "," << s.y << ") out of bounds";
      throw_data(os.str());
    }
    if (!std::isfinite(s.depth) || s.depth < 0.0) {
      throw_data("SampleSet: sample depth must be finite and non-negative");
    }
    auto& t = taken[static_cast<std::size_t>(s.y) * width + s.x];
    if (t) {
      std::ostringstream os;
      os << "SampleSet: duplicate sample at (" << s.x << "," << s.y << ")";
      throw_data(os.str());
    }
    t = 1;
  }
}

EvalMask::EvalMask(int width, int height, bool include_all)
    : width_(width), height_(height) {
  check_dims(width, height);
  include_.assign(static_cast<std::size_t>(width) * height,
                  include_all ? 1 : 0);
}

EvalMask::EvalMask(int width, int height, std::vector<std::uint8_t> include)
    : width_(width), height_(height), include_(std::move(include)) {
  check_dims(width, height);
  if (include_.size() != static_cast<std::size_t>(width) * height) {
    throw_data("EvalMask: buffer does not match width*height");
  }
  for (auto& v : include_) v = v ? 1 : 0;
}

std::size_t EvalMask::count() const {
  return static_cast<std::size_t>(
      std::count(include_.begin(), include_.end(), 1));
}

double rmse(const DepthMap& gt, const DepthMap& pred, const EvalMask& mask,
            double range_cap) {
  check_same_shape(gt, pred, "rmse");
  check_same_shape(gt, mask, "rmse");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
    if (!evaluated(gt, mask, range_cap, i)) continue;
    const double e = gt.at(i) - pred.at(i);
    sum += e * e;
    ++n;
  }
  if (n == 0) throw_data("rmse: evaluation set is empty");
  return std::sqrt(sum / static_cast<double>(n));
}

double rel(const DepthMap& gt, const DepthMap& pred, const EvalMask& mask,
           double range_cap) {
  check_same_shape(gt, pred, "rel");
  check_same_shape(gt, mask, "rel");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
    if (!evaluated(gt, mask, range_cap, i)) continue;
    if (gt.at(i) == 0.0) {
      throw_data("rel: ground truth is zero on an evaluated pixel");
    }
    sum += std::abs(gt.at(i) - pred.at(i)) / gt.at(i);
    ++n;
  }
  if (n == 0) throw_data("rel: evaluation set is empty");
  return sum / static_cast<double>(n);
}

double pixel_density(const SampleSet& samples, const DepthMap& image) {
  return static_cast<double>(samples.size()) /
         static_cast<double>(image.pixel_count());
}

}  // namespace igdepth
