#ifndef IGDEPTH_SAMPLER_HPP
#define IGDEPTH_SAMPLER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "igdepth/core.hpp"

namespace igdepth {

/// Where to measure; produced by a sampler, consumed by `execute`.
struct SamplePattern {
  int width = 0;
  int height = 0;
  std::vector<Pixel> coords;
  std::string sampler_id;
  std::size_t budget = 0;
};

namespace sampler_ids {
inline constexpr const char* kCom = "com";
inline constexpr const char* kGrid = "grid";
inline constexpr const char* kRandom = "random";
inline constexpr const char* kCom3 = "com3";
}  // namespace sampler_ids

/// One sample per segment at its rounded center of mass (round half up per
/// axis). When that pixel lies outside the segment, the member pixel nearest
/// to the exact center of mass is used; ties go to smaller y, then smaller x.
/// Coordinate i belongs to segment i.
SamplePattern com_pattern(const SegmentMap& segments);

/// n distinct pixels drawn uniformly without replacement. Patterns for the
/// same seed are nested: the pattern for n is a prefix of the one for n+1.
SamplePattern random_pattern(int width, int height, std::size_t n,
                             std::uint64_t seed);

/// Near-square lattice: rows = round(sqrt(n*h/w)), cols = floor(n/rows),
/// one sample at the pixel containing each cell center.
SamplePattern grid_pattern(int width, int height, std::size_t n);

/// Three samples per segment for planar fits: the center-of-mass pixel plus
/// two greedy farthest-point members. The third skips members on the line
/// through the first two unless the whole segment lies on it. Segments with
/// fewer pixels get fewer.
SamplePattern com3_pattern(const SegmentMap& segments);

struct ExecuteOptions {
  /// When set, samples on invalid ground truth move to the nearest valid
  /// pixel of the same segment instead of being dropped.
  const SegmentMap* segments = nullptr;
  /// Additive Gaussian range noise in meters; 0 reads ground truth exactly.
  double noise_sigma = 0.0;
  std::uint64_t noise_seed = 0;
};

/// Simulated sensor read of `pattern` against dense ground truth.
SampleSet execute(const SamplePattern& pattern, const DepthMap& gt,
                  const ExecuteOptions& options = {});

}  // namespace igdepth

#endif  // IGDEPTH_SAMPLER_HPP
