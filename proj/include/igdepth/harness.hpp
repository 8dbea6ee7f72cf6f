#ifndef IGDEPTH_HARNESS_HPP
#define IGDEPTH_HARNESS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "igdepth/core.hpp"
#include "igdepth/edgestats.hpp"
#include "igdepth/planar_model.hpp"
#include "igdepth/reconstruct.hpp"
#include "igdepth/superpixel.hpp"

namespace igdepth {

namespace reconstructor_ids {
inline constexpr const char* kOurs = "ours";              // zero-order + bilateral
inline constexpr const char* kZeroOrder = "zero-order";   // no bilateral
inline constexpr const char* kBilinear = "bilinear";
inline constexpr const char* kFirstOrder = "first-order";
}  // namespace reconstructor_ids

/// One evaluation image.
struct ImageRecord {
  std::string id;
  RgbImage rgb;
  DepthMap gt;
  std::optional<EvalMask> mask;
  SceneType type = SceneType::Outdoor;
  std::optional<SegmentMap> regions;  // true planar partition, when known
};

/// Parameters for one scene type.
struct MethodParams {
  SlicParams slic;
  std::optional<BilateralParams> bilateral;  // unset: BilateralParams::for_budget
  SceneType scene = SceneType::Outdoor;
  std::uint64_t seed = 1;                    // random sampler seed
};

/// Whether `reconstructor` can consume samples from `sampler`. first-order
/// needs its own three-per-segment layout and so only pairs with com.
bool method_supported(const std::string& sampler,
                      const std::string& reconstructor);

struct MethodOutput {
  DepthMap depth;
  std::size_t samples = 0;
};

/// Runs one sampler x reconstructor pair. For com, `n` is the superpixel
/// target; grid and random draw `sample_count` samples (default n).
/// ours and zero-order on grid or random samples use the nearest-sample
/// partition in place of superpixels.
MethodOutput run_method(const ImageRecord& image, const std::string& sampler,
                        const std::string& reconstructor, std::size_t n,
                        const MethodParams& params,
                        std::optional<std::size_t> sample_count = std::nullopt);

/// Exact reconstruction check: three samples per segment (the member
/// nearest the center of mass, the member farthest from it, and the member
/// spanning the largest triangle with both), all inside `valid`; per-segment
/// planes; RMSE over `valid`. Exact for noiseless piecewise-planar depth
/// whose planes follow the segments.
double optimal_scenario_rmse(const DepthMap& gt, const SegmentMap& segments,
                             const EvalMask& valid);
/// Same, on the regions and validity set of a fitted model.
double optimal_scenario_rmse(const DepthMap& gt, const PlanarModel& model);

struct SweepMethod {
  std::string sampler;
  std::string reconstructor;
};

struct SweepConfig {
  bool enabled = false;
  SweepMethod reference{"com", reconstructor_ids::kOurs};
  std::size_t reference_n = 60;
  std::vector<SweepMethod> methods{{"random", reconstructor_ids::kBilinear}};
  bool use_mask = true;   // metric: obstacle-mask RMSE, else full-image RMSE
  std::size_t max_n = 0;  // 0: pixel count
};

struct AnalysisConfig {
  bool planar_model = false;
  FitModelParams model;
  bool edge_stats = false;
  double depth_threshold = kDefaultDepthBoundaryThreshold;
  EdgeParams edges;
  int tol_px = 2;
};

struct ExperimentConfig {
  std::string dataset_dir;  // <id>_rgb.png, <id>_depth.png, optional <id>_mask.png, <id>_labels.png
  std::vector<std::string> scene_files;  // INI scene specs rendered in memory
  std::vector<std::pair<std::string, std::vector<std::uint64_t>>> presets;
  SceneType dataset_type = SceneType::Outdoor;

  std::vector<std::size_t> budgets{100};
  std::vector<std::string> samplers{"com", "random"};
  std::vector<std::string> reconstructors{reconstructor_ids::kOurs};
  double range_cap = 100.0;
  std::uint64_t seed = 1;
  int workers = 0;  // 0: hardware concurrency

  std::map<SceneType, MethodParams> params{
      {SceneType::Indoor, {SlicParams{}, std::nullopt, SceneType::Indoor, 1}},
      {SceneType::Outdoor, {SlicParams{}, std::nullopt, SceneType::Outdoor, 1}}};
  AnalysisConfig analysis;
  SweepConfig sweep;

  /// Canonical text used for hashing: sorted `section.key=value` lines.
  std::string canonical;

  void validate() const;
  const MethodParams& for_type(SceneType t) const { return params.at(t); }
};

/// INI config. Relative paths resolve against `base_dir`.
ExperimentConfig parse_config(const std::string& text,
                              const std::string& base_dir);
ExperimentConfig load_config(const std::string& path);

struct EvalRow {
  std::string id;
  std::string sampler;
  std::string reconstructor;
  std::size_t n = 0;        // nominal budget
  std::size_t samples = 0;  // realized sample count
  double density = 0.0;
  double rmse = 0.0;
  double rel = 0.0;
  std::optional<double> mask_rmse;
  std::optional<double> mask_rel;
};

struct Aggregate {
  std::string sampler;
  std::string reconstructor;
  std::size_t n = 0;
  std::size_t images = 0;
  double samples = 0.0;
  double density = 0.0;
  double rmse = 0.0;
  double rel = 0.0;
  std::size_t mask_images = 0;
  std::optional<double> mask_rmse;
  std::optional<double> mask_rel;
};

struct ImageError {
  std::string id;
  std::string context;
  std::string message;
};

struct AnalysisRow {
  std::string id;
  std::optional<ModelStats> model;
  std::optional<std::size_t> min_samples;
  std::optional<double> optimal_rmse;          // on the model's regions
  std::optional<int> true_regions;             // synthetic scenes only
  std::optional<double> true_optimal_rmse;     // at n = 3 * true_regions
  std::optional<EdgeProbabilities> edges;
};

struct SweepRow {
  std::string id;
  std::string sampler;
  std::string reconstructor;
  double target = 0.0;                  // reference method's error
  std::size_t reference_samples = 0;
  std::optional<std::size_t> required;  // unset: not reached within max_n
  std::size_t pixels = 0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::vector<Aggregate> aggregates;
  std::vector<ImageError> errors;
  std::vector<AnalysisRow> analysis;
  std::vector<SweepRow> sweeps;
  std::vector<std::string> skipped;  // unsupported sampler/reconstructor pairs
  std::size_t images = 0;
  // Wall-clock run times (UTC, ISO 8601). Written to the manifest only.
  std::string started_utc;
  std::string finished_utc;
};

/// Loads every image named by the config. Unreadable or mismatched inputs
/// become ImageError entries.
std::vector<ImageRecord> load_images(const ExperimentConfig& config,
                                     std::vector<ImageError>& errors);

/// Full cross product over images, budgets, samplers and reconstructors.
/// Throws ErrorKind::Data when no image could be loaded.
EvalReport run_matrix(const ExperimentConfig& config);
EvalReport run_matrix(const ExperimentConfig& config,
                      const std::vector<ImageRecord>& images,
                      std::vector<ImageError> load_errors = {});

/// Smallest sample count at which `method` reaches `target` on one image:
/// doubling from `start`, then bisection. nullopt when max_n does not reach.
std::optional<std::size_t> required_samples(const ImageRecord& image,
                                            const SweepMethod& method,
                                            double target, bool use_mask,
                                            std::size_t start,
                                            std::size_t max_n,
                                            const MethodParams& params,
                                            double range_cap);

std::string report_csv(const EvalReport& report);
std::string aggregates_csv(const EvalReport& report);
std::string report_json(const EvalReport& report);

/// Writes report.csv, aggregates.csv, report.json, analysis files when
/// present, and manifest.json (the only file with timestamps).
void write_report(const EvalReport& report, const ExperimentConfig& config,
                  const std::string& out_dir);

/// Hex SHA-256 of the canonical config text.
std::string config_hash(const ExperimentConfig& config);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace igdepth

#endif  // IGDEPTH_HARNESS_HPP
