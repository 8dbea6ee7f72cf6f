#ifndef IGDEPTH_IO_HPP
#define IGDEPTH_IO_HPP

#include <optional>
#include <string>

#include "igdepth/core.hpp"
#include "igdepth/sampler.hpp"

namespace igdepth {

/// 8-bit RGB PNG. Gray, palette and alpha inputs are converted on read.
RgbImage read_rgb_png(const std::string& path);
void write_rgb_png(const std::string& path, const RgbImage& image);

inline constexpr double kMillimeter = 0.001;

/// 16-bit gray depth PNG: depth = value * meters_per_unit, value 0 marks an
/// invalid pixel. The scale is read from the sidecar `<path>.scale` when it
/// exists and defaults to millimeters otherwise.
DepthMap read_depth_png(const std::string& path);
/// Writes the PNG and its sidecar. Without an explicit scale, millimeters
/// are used unless the largest depth exceeds 65.535 m, in which case the
/// unit grows in whole millimeters until it fits. Valid depths that would
/// quantize to 0 are written as 1.
void write_depth_png(const std::string& path, const DepthMap& depth,
                     std::optional<double> meters_per_unit = std::nullopt);
/// Scale recorded for `path`, millimeters when no sidecar exists.
double depth_png_scale(const std::string& path);

/// 16-bit gray label image; at most 65536 segments.
SegmentMap read_labels_png(const std::string& path);
void write_labels_png(const std::string& path, const SegmentMap& labels);

/// Any gray PNG; non-zero pixels are included.
EvalMask read_mask_png(const std::string& path);
/// 8-bit gray, 255 for included pixels.
void write_mask_png(const std::string& path, std::span<const std::uint8_t> mask,
                    int width, int height);

/// Sample CSV: an optional `# igdepth samples width=.. height=..` comment
/// line, then the header `x,y,depth_m` and one row per sample. Pattern rows
/// leave depth_m empty.
void write_samples_csv(const std::string& path, const SampleSet& samples);
void write_pattern_csv(const std::string& path, const SamplePattern& pattern);

struct SampleCsv {
  std::optional<int> width;
  std::optional<int> height;
  std::string sampler_id;
  std::optional<std::size_t> budget;
  std::vector<Sample> entries;
  bool has_depth = true;  // false for executed-less patterns
};
SampleCsv read_samples_csv(const std::string& path);

/// Builds a SampleSet from parsed CSV rows for a width x height image.
SampleSet to_sample_set(const SampleCsv& csv, int width, int height);

/// Whole file as a string; ErrorKind::Data when unreadable.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace igdepth

#endif  // IGDEPTH_IO_HPP
