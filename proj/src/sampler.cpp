#include "igdepth/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <numeric>
#include <sstream>

#include "igdepth/superpixel.hpp"
#include "rng.hpp"

namespace igdepth {

namespace {

// Pixel indices grouped by segment (counting sort, raster order inside).
struct Members {
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> pixels;

  explicit Members(const SegmentMap& segments) {
    const auto labels = segments.labels();
    offsets.assign(segments.num_segments() + 1, 0);
    for (auto l : labels) ++offsets[l + 1];
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    pixels.resize(labels.size());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      pixels[cursor[labels[i]]++] = i;
    }
  }

  std::span<const std::size_t> of(int segment) const {
    return std::span<const std::size_t>(pixels).subspan(
        offsets[segment], offsets[segment + 1] - offsets[segment]);
  }
};

// Ordering for equal distances: smaller y, then smaller x. Raster index
// order is exactly that.
template <class Dist>
std::size_t nearest_member(std::span<const std::size_t> members, Dist dist) {
  std::size_t best = members.front();
  auto best_d = dist(best);
  for (const std::size_t i : members) {
    const auto d = dist(i);
    if (d < best_d || (d == best_d && i < best)) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

// Center-of-mass pixel for one segment, exact integer arithmetic.
std::size_t com_pixel(const SegmentMap& segments,
                      std::span<const std::size_t> members, int segment) {
  const int w = segments.width();
  std::int64_t sx = 0, sy = 0;
  for (const std::size_t i : members) {
    sx += static_cast<std::int64_t>(i % w);
    sy += static_cast<std::int64_t>(i / w);
  }
  const auto count = static_cast<std::int64_t>(members.size());
  // round half up: floor(s/count + 1/2) = floor((2s + count) / (2 count))
  const std::int64_t rx = (2 * sx + count) / (2 * count);
  const std::int64_t ry = (2 * sy + count) / (2 * count);
  if (segments.at(static_cast<int>(rx), static_cast<int>(ry)) == segment) {
    return static_cast<std::size_t>(ry) * w + static_cast<std::size_t>(rx);
  }
  // Squared distance to the exact CoM, scaled by count^2 to stay integral.
  return nearest_member(members, [&](std::size_t i) {
    const std::int64_t dx = count * static_cast<std::int64_t>(i % w) - sx;
    const std::int64_t dy = count * static_cast<std::int64_t>(i / w) - sy;
    return dx * dx + dy * dy;
  });
}

Pixel to_pixel(std::size_t i, int w) {
  return {static_cast<int>(i % w), static_cast<int>(i / w)};
}

}  // namespace

SamplePattern com_pattern(const SegmentMap& segments) {
  const Members members(segments);
  SamplePattern pattern{segments.width(), segments.height(), {},
                        sampler_ids::kCom,
                        static_cast<std::size_t>(segments.num_segments())};
  pattern.coords.reserve(segments.num_segments());
  for (int s = 0; s < segments.num_segments(); ++s) {
    pattern.coords.push_back(
        to_pixel(com_pixel(segments, members.of(s), s), segments.width()));
  }
  return pattern;
}

SamplePattern com3_pattern(const SegmentMap& segments) {
  const Members members(segments);
  const int w = segments.width();
  SamplePattern pattern{w, segments.height(), {}, sampler_ids::kCom3,
                        3 * static_cast<std::size_t>(segments.num_segments())};
  auto d2 = [w](std::size_t a, std::size_t b) {
    const std::int64_t dx = static_cast<std::int64_t>(a % w) -
                            static_cast<std::int64_t>(b % w);
    const std::int64_t dy = static_cast<std::int64_t>(a / w) -
                            static_cast<std::int64_t>(b / w);
    return dx * dx + dy * dy;
  };
  for (int s = 0; s < segments.num_segments(); ++s) {
    const auto m = members.of(s);
    const std::size_t p1 = com_pixel(segments, m, s);
    pattern.coords.push_back(to_pixel(p1, w));
    if (m.size() < 2) continue;
    // nearest_member on negated distance picks the farthest point.
    const std::size_t p2 =
        nearest_member(m, [&](std::size_t i) { return -d2(i, p1); });
    pattern.coords.push_back(to_pixel(p2, w));
    if (m.size() < 3) continue;
    // Farthest from both, skipping members on the p1-p2 line unless the
    // whole segment lies on it.
    const auto off_line = [&](std::size_t i) {
      const std::int64_t ax = static_cast<std::int64_t>(p2 % w) - static_cast<std::int64_t>(p1 % w);
      const std::int64_t ay = static_cast<std::int64_t>(p2 / w) - static_cast<std::int64_t>(p1 / w);
      const std::int64_t bx = static_cast<std::int64_t>(i % w) - static_cast<std::int64_t>(p1 % w);
      const std::int64_t by = static_cast<std::int64_t>(i / w) - static_cast<std::int64_t>(p1 / w);
      return ax * by - ay * bx != 0;
    };
    const bool flat = std::none_of(m.begin(), m.end(), off_line);
    const std::size_t p3 = nearest_member(m, [&](std::size_t i) {
      if (!flat && !off_line(i)) return std::int64_t{1};
      return -std::min(d2(i, p1), d2(i, p2));
    });
    pattern.coords.push_back(to_pixel(p3, w));
  }
  return pattern;
}

SamplePattern random_pattern(int width, int height, std::size_t n,
                             std::uint64_t seed) {
  const std::size_t total = static_cast<std::size_t>(width) * height;
  if (width < 1 || height < 1) throw_usage("random_pattern: empty image");
  if (n > total) {
    std::ostringstream os;
    os << "random_pattern: n = " << n << " exceeds pixel count " << total;
    throw_usage(os.str());
  }
  // Partial Fisher-Yates; step i only depends on the draws before it, so
  // patterns for the same seed are prefixes of each other.
  std::vector<std::size_t> perm(total);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  detail::Rng rng(seed);
  SamplePattern pattern{width, height, {}, sampler_ids::kRandom, n};
  pattern.coords.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng.below(total - i);
    std::swap(perm[i], perm[j]);
    pattern.coords.push_back(to_pixel(perm[i], width));
  }
  return pattern;
}

SamplePattern grid_pattern(int width, int height, std::size_t n) {
  if (width < 1 || height < 1) throw_usage("grid_pattern: empty image");
  if (n < 1) throw_usage("grid_pattern: n must be >= 1");
  const int nn = static_cast<int>(
      std::min<std::size_t>(n, static_cast<std::size_t>(width) * height));
  const int rows = lattice_rows(width, height, nn);
  const int cols = std::clamp(nn / rows, 1, width);
  SamplePattern pattern{width, height, {}, sampler_ids::kGrid, n};
  pattern.coords.reserve(static_cast<std::size_t>(rows) * cols);
  const double cell_w = static_cast<double>(width) / cols;
  const double cell_h = static_cast<double>(height) / rows;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      pattern.coords.push_back(
          {std::min(width - 1, static_cast<int>((c + 0.5) * cell_w)),
           std::min(height - 1, static_cast<int>((r + 0.5) * cell_h))});
    }
  }
  return pattern;
}

SampleSet execute(const SamplePattern& pattern, const DepthMap& gt,
                  const ExecuteOptions& options) {
  const int w = gt.width();
  if (!gt.same_shape(pattern.width, pattern.height)) {
    throw_data("execute: pattern and ground truth sizes differ");
  }
  if (options.segments &&
      !gt.same_shape(options.segments->width(), options.segments->height())) {
    throw_data("execute: segment map and ground truth sizes differ");
  }
  if (options.noise_sigma < 0.0) throw_usage("execute: negative noise sigma");

  std::optional<Members> members;
  if (options.segments) members.emplace(*options.segments);
  std::vector<std::uint8_t> taken(gt.pixel_count(), 0);
  detail::Rng rng(options.noise_seed);

  std::vector<Sample> entries;
  entries.reserve(pattern.coords.size());
  std::size_t dropped = 0, relocated = 0;
  for (const Pixel& p : pattern.coords) {
    if (p.x < 0 || p.y < 0 || p.x >= w || p.y >= gt.height()) {
      throw_data("execute: pattern coordinate out of bounds");
    }
    std::size_t at = static_cast<std::size_t>(p.y) * w + p.x;
    if (!gt.valid(at)) {
      bool found = false;
      if (members) {
        const auto m = members->of(options.segments->at(p.x, p.y));
        std::size_t best = 0;
        std::int64_t best_d = std::numeric_limits<std::int64_t>::max();
        for (const std::size_t i : m) {
          if (!gt.valid(i) || taken[i]) continue;
          const std::int64_t dx = static_cast<std::int64_t>(i % w) - p.x;
          const std::int64_t dy = static_cast<std::int64_t>(i / w) - p.y;
          const std::int64_t d = dx * dx + dy * dy;
          if (d < best_d) {  // members are in raster order: ties keep first
            best_d = d;
            best = i;
            found = true;
          }
        }
        if (found) at = best;
      }
      if (!found) {
        ++dropped;
        continue;
      }
      ++relocated;
    }
    if (taken[at]) {
      ++dropped;
      continue;
    }
    taken[at] = 1;
    double depth = gt.at(at);
    if (options.noise_sigma > 0.0) {
      depth = std::max(0.0, depth + options.noise_sigma * rng.gaussian());
    }
    entries.push_back({static_cast<int>(at % w), static_cast<int>(at / w), depth});
  }
  SampleSet out(w, gt.height(), std::move(entries), pattern.sampler_id,
                std::max(pattern.budget, pattern.coords.size()));
  out.dropped = dropped;
  out.relocated = relocated;
  return out;
}

}  // namespace igdepth
