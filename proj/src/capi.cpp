#include "igdepth/igdepth.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <filesystem>
#include <new>
#include <sstream>
#include <string>

#include "igdepth/core.hpp"
#include "igdepth/edgestats.hpp"
#include "igdepth/harness.hpp"
#include "igdepth/io.hpp"
#include "igdepth/mtf.hpp"
#include "igdepth/planar_model.hpp"
#include "igdepth/reconstruct.hpp"
#include "igdepth/sampler.hpp"
#include "igdepth/scene.hpp"
#include "igdepth/superpixel.hpp"

using namespace igdepth;
namespace fs = std::filesystem;

struct igd_rgb {
  RgbImage v;
};
struct igd_depth {
  DepthMap v;
};
struct igd_labels {
  SegmentMap v;
};
struct igd_mask {
  EvalMask v;
};
struct igd_samples {
  SamplePattern pattern;          // always filled
  std::optional<SampleSet> set;   // set once measured
};
struct igd_model {
  PlanarModel v;
};
struct igd_chart {
  ChartParams params;
  StarChart v;
  igd_rgb rgb;
  igd_depth depth;
};
struct igd_scene {
  SceneSpec spec;
  std::uint64_t seed = 0;
  SyntheticScene v;
};

namespace {

thread_local std::string g_error;

template <class F>
igd_status guard(F&& f) {
  try {
    f();
    g_error.clear();
    return IGD_OK;
  } catch (const Error& e) {
    g_error = e.what();
    return static_cast<igd_status>(e.kind());
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return IGD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_error = e.what();
    return IGD_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) throw_usage(std::string(what) + " must not be NULL");
}

SceneType scene_of(igd_scene_type t) {
  if (t == IGD_INDOOR) return SceneType::Indoor;
  if (t == IGD_OUTDOOR) return SceneType::Outdoor;
  throw_usage("unknown scene type");
}

SlicParams slic_of(const igd_slic_params* p) {
  SlicParams s;
  if (p != nullptr) {
    s.target_segments = p->target_segments;
    s.compactness = p->compactness;
    s.max_iterations = p->max_iterations;
    s.min_segment_fraction = p->min_segment_fraction;
  }
  return s;
}

std::optional<BilateralParams> bilateral_of(const igd_bilateral_params* p) {
  if (p == nullptr) return std::nullopt;
  return BilateralParams{p->spatial_sigma, p->range_sigma, p->window_radius};
}

const SampleSet& measured(const igd_samples* s) {
  need(s, "samples");
  if (!s->set) throw_usage("samples carry no depth; measure the pattern first");
  return *s->set;
}

SamplePattern pattern_of(const SampleSet& set) {
  SamplePattern p{set.width(), set.height(), {}, set.sampler_id(), set.budget()};
  for (const auto& e : set.entries()) p.coords.push_back({e.x, e.y});
  return p;
}

igd_samples* wrap(SampleSet set) {
  auto* out = new igd_samples{pattern_of(set), std::move(set)};
  return out;
}

double cap_of(double range_cap) {
  return range_cap > 0.0 ? range_cap : kNoRangeCap;
}

const EvalMask& mask_or_all(const igd_mask* mask, const DepthMap& gt,
                            EvalMask& storage) {
  if (mask != nullptr) return mask->v;
  storage = EvalMask::all(gt.width(), gt.height());
  return storage;
}

BoundaryMap boundary_of(const igd_mask* m) {
  need(m, "edge map");
  return BoundaryMap(m->v.width(), m->v.height(),
                     std::vector<std::uint8_t>(m->v.data().begin(),
                                               m->v.data().end()));
}

igd_mask* mask_of(const BoundaryMap& b) {
  return new igd_mask{EvalMask(
      b.width(), b.height(),
      std::vector<std::uint8_t>(b.data().begin(), b.data().end()))};
}

}  // namespace

extern "C" {

const char* igd_last_error(void) { return g_error.c_str(); }
const char* igd_version(void) { return kToolVersion; }

// ---- images

igd_status igd_rgb_read_png(const char* path, igd_rgb** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new igd_rgb{read_rgb_png(path)};
  });
}

igd_status igd_rgb_write_png(const igd_rgb* img, const char* path) {
  return guard([&] {
    need(img, "image");
    need(path, "path");
    write_rgb_png(path, img->v);
  });
}

igd_status igd_rgb_create(int width, int height, const uint8_t* data,
                          igd_rgb** out) {
  return guard([&] {
    need(data, "data");
    need(out, "out");
    if (width <= 0 || height <= 0) throw_usage("image size must be positive");
    const std::size_t n = static_cast<std::size_t>(width) * height * 3;
    *out = new igd_rgb{RgbImage(width, height,
                                std::vector<std::uint8_t>(data, data + n))};
  });
}

void igd_rgb_size(const igd_rgb* img, int* width, int* height) {
  if (width) *width = img ? img->v.width() : 0;
  if (height) *height = img ? img->v.height() : 0;
}

void igd_rgb_free(igd_rgb* img) { delete img; }

igd_status igd_depth_read_png(const char* path, igd_depth** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new igd_depth{read_depth_png(path)};
  });
}

igd_status igd_depth_write_png(const igd_depth* depth, const char* path) {
  return guard([&] {
    need(depth, "depth");
    need(path, "path");
    write_depth_png(path, depth->v);
  });
}

igd_status igd_depth_create(int width, int height, const double* depth,
                            const uint8_t* valid, igd_depth** out) {
  return guard([&] {
    need(depth, "depth");
    need(out, "out");
    if (width <= 0 || height <= 0) throw_usage("image size must be positive");
    const std::size_t n = static_cast<std::size_t>(width) * height;
    std::vector<std::uint8_t> v;
    if (valid != nullptr) v.assign(valid, valid + n);
    *out = new igd_depth{
        DepthMap(width, height, std::vector<double>(depth, depth + n), std::move(v))};
  });
}

void igd_depth_size(const igd_depth* depth, int* width, int* height) {
  if (width) *width = depth ? depth->v.width() : 0;
  if (height) *height = depth ? depth->v.height() : 0;
}

void igd_depth_copy(const igd_depth* depth, double* values, uint8_t* valid) {
  if (depth == nullptr) return;
  const auto d = depth->v.depth();
  const auto m = depth->v.valid_mask();
  if (values) std::copy(d.begin(), d.end(), values);
  if (valid) std::copy(m.begin(), m.end(), valid);
}

void igd_depth_free(igd_depth* depth) { delete depth; }

igd_status igd_rmse(const igd_depth* gt, const igd_depth* pred,
                    const igd_mask* mask, double range_cap, double* out) {
  return guard([&] {
    need(gt, "gt");
    need(pred, "pred");
    need(out, "out");
    EvalMask all;
    *out = rmse(gt->v, pred->v, mask_or_all(mask, gt->v, all), cap_of(range_cap));
  });
}

igd_status igd_rel(const igd_depth* gt, const igd_depth* pred,
                   const igd_mask* mask, double range_cap, double* out) {
  return guard([&] {
    need(gt, "gt");
    need(pred, "pred");
    need(out, "out");
    EvalMask all;
    *out = rel(gt->v, pred->v, mask_or_all(mask, gt->v, all), cap_of(range_cap));
  });
}

igd_status igd_mask_read_png(const char* path, igd_mask** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new igd_mask{read_mask_png(path)};
  });
}

igd_status igd_mask_write_png(const igd_mask* mask, const char* path) {
  return guard([&] {
    need(mask, "mask");
    need(path, "path");
    write_mask_png(path, mask->v.data(), mask->v.width(), mask->v.height());
  });
}

void igd_mask_size(const igd_mask* mask, int* width, int* height) {
  if (width) *width = mask ? mask->v.width() : 0;
  if (height) *height = mask ? mask->v.height() : 0;
}

size_t igd_mask_count(const igd_mask* mask) {
  return mask ? mask->v.count() : 0;
}

void igd_mask_free(igd_mask* mask) { delete mask; }

// ---- superpixels

void igd_slic_defaults(igd_slic_params* params) {
  if (params == nullptr) return;
  const SlicParams s;
  *params = {s.target_segments, s.compactness, s.max_iterations,
             s.min_segment_fraction};
}

igd_status igd_slic(const igd_rgb* img, const igd_slic_params* params,
                    igd_labels** out) {
  return guard([&] {
    need(img, "image");
    need(params, "params");
    need(out, "out");
    *out = new igd_labels{slic_segment(img->v, slic_of(params))};
  });
}

igd_status igd_labels_read_png(const char* path, igd_labels** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new igd_labels{read_labels_png(path)};
  });
}

igd_status igd_labels_write_png(const igd_labels* labels, const char* path) {
  return guard([&] {
    need(labels, "labels");
    need(path, "path");
    write_labels_png(path, labels->v);
  });
}

void igd_labels_size(const igd_labels* labels, int* width, int* height) {
  if (width) *width = labels ? labels->v.width() : 0;
  if (height) *height = labels ? labels->v.height() : 0;
}

int igd_labels_count(const igd_labels* labels) {
  return labels ? labels->v.num_segments() : 0;
}

void igd_labels_free(igd_labels* labels) { delete labels; }

// ---- samples

igd_status igd_pattern_com(const igd_labels* labels, igd_samples** out) {
  return guard([&] {
    need(labels, "labels");
    need(out, "out");
    *out = new igd_samples{com_pattern(labels->v), std::nullopt};
  });
}

igd_status igd_pattern_com3(const igd_labels* labels, igd_samples** out) {
  return guard([&] {
    need(labels, "labels");
    need(out, "out");
    *out = new igd_samples{com3_pattern(labels->v), std::nullopt};
  });
}

igd_status igd_pattern_grid(int width, int height, size_t n,
                            igd_samples** out) {
  return guard([&] {
    need(out, "out");
    *out = new igd_samples{grid_pattern(width, height, n), std::nullopt};
  });
}

igd_status igd_pattern_random(int width, int height, size_t n, uint64_t seed,
                              igd_samples** out) {
  return guard([&] {
    need(out, "out");
    *out = new igd_samples{random_pattern(width, height, n, seed), std::nullopt};
  });
}

igd_status igd_samples_measure(const igd_samples* pattern, const igd_depth* gt,
                               const igd_labels* labels, double noise_sigma,
                               uint64_t noise_seed, igd_samples** out) {
  return guard([&] {
    need(pattern, "pattern");
    need(gt, "gt");
    need(out, "out");
    ExecuteOptions opt{labels ? &labels->v : nullptr, noise_sigma, noise_seed};
    *out = wrap(execute(pattern->pattern, gt->v, opt));
  });
}

igd_status igd_samples_read_csv(const char* path, int width, int height,
                                igd_samples** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    const SampleCsv csv = read_samples_csv(path);
    const int w = width > 0 ? width : csv.width.value_or(0);
    const int h = height > 0 ? height : csv.height.value_or(0);
    if (w <= 0 || h <= 0) {
      throw_usage(std::string(path) +
                  ": image size unknown; pass it or add the comment line");
    }
    if (csv.has_depth) {
      *out = wrap(to_sample_set(csv, w, h));
    } else {
      SamplePattern p{w, h, {}, csv.sampler_id, csv.budget.value_or(csv.entries.size())};
      for (const auto& e : csv.entries) {
        if (e.x < 0 || e.y < 0 || e.x >= w || e.y >= h) {
          throw_data(std::string(path) + ": sample outside the image");
        }
        p.coords.push_back({e.x, e.y});
      }
      *out = new igd_samples{std::move(p), std::nullopt};
    }
  });
}

igd_status igd_samples_write_csv(const igd_samples* samples, const char* path) {
  return guard([&] {
    need(samples, "samples");
    need(path, "path");
    if (samples->set) {
      write_samples_csv(path, *samples->set);
    } else {
      write_pattern_csv(path, samples->pattern);
    }
  });
}

size_t igd_samples_count(const igd_samples* samples) {
  return samples ? samples->pattern.coords.size() : 0;
}

int igd_samples_has_depth(const igd_samples* samples) {
  return samples && samples->set ? 1 : 0;
}

size_t igd_samples_budget(const igd_samples* samples) {
  if (samples == nullptr) return 0;
  return std::max(samples->pattern.budget, samples->pattern.coords.size());
}

void igd_samples_set_budget(igd_samples* samples, size_t budget) {
  if (samples == nullptr) return;
  samples->pattern.budget = budget;
  if (samples->set) {
    std::vector<Sample> entries(samples->set->entries().begin(),
                                samples->set->entries().end());
    SampleSet updated(samples->set->width(), samples->set->height(),
                      std::move(entries), samples->set->sampler_id(),
                      std::max(budget, samples->set->size()));
    updated.dropped = samples->set->dropped;
    updated.relocated = samples->set->relocated;
    samples->set = std::move(updated);
  }
}

void igd_samples_size(const igd_samples* samples, int* width, int* height) {
  if (width) *width = samples ? samples->pattern.width : 0;
  if (height) *height = samples ? samples->pattern.height : 0;
}

igd_status igd_samples_get(const igd_samples* samples, size_t index, int* x,
                           int* y, double* depth) {
  return guard([&] {
    need(samples, "samples");
    if (index >= samples->pattern.coords.size()) {
      throw_usage("sample index out of range");
    }
    const Pixel p = samples->pattern.coords[index];
    if (x) *x = p.x;
    if (y) *y = p.y;
    if (depth) *depth = samples->set ? samples->set->entries()[index].depth : 0.0;
  });
}

void igd_samples_free(igd_samples* samples) { delete samples; }

// ---- reconstruction

igd_status igd_bilateral_for_budget(int width, int height, size_t n,
                                    igd_scene_type scene,
                                    igd_bilateral_params* out) {
  return guard([&] {
    need(out, "out");
    const BilateralParams b =
        BilateralParams::for_budget(width, height, n, scene_of(scene));
    *out = {b.spatial_sigma, b.range_sigma, b.window_radius};
  });
}

igd_status igd_fill_ours(const igd_samples* samples, const igd_labels* labels,
                         const igd_bilateral_params* bilateral,
                         igd_scene_type scene, igd_depth** out) {
  return guard([&] {
    const SampleSet& set = measured(samples);
    need(out, "out");
    const SegmentMap seg = labels ? labels->v : nearest_sample_segments(set);
    const BilateralParams bp =
        bilateral ? *bilateral_of(bilateral)
                  : BilateralParams::for_budget(
                        set.width(), set.height(),
                        std::max<std::size_t>(1, set.budget()), scene_of(scene));
    *out = new igd_depth{zero_order_bilateral(seg, set, bp)};
  });
}

igd_status igd_fill_zero_order(const igd_samples* samples,
                               const igd_labels* labels, igd_depth** out) {
  return guard([&] {
    const SampleSet& set = measured(samples);
    need(out, "out");
    if (labels) {
      *out = new igd_depth{
          zero_order_fill(labels->v, set, UnsampledSegments::NearestSample)};
    } else {
      *out = new igd_depth{zero_order_fill(nearest_sample_segments(set), set)};
    }
  });
}

igd_status igd_fill_bilinear(const igd_samples* samples, igd_depth** out) {
  return guard([&] {
    const SampleSet& set = measured(samples);
    need(out, "out");
    *out = new igd_depth{bilinear_baseline(set, set.width(), set.height())};
  });
}

igd_status igd_fill_first_order(const igd_samples* samples,
                                const igd_labels* labels, igd_depth** out) {
  return guard([&] {
    const SampleSet& set = measured(samples);
    need(labels, "labels");
    need(out, "out");
    *out = new igd_depth{first_order_fill(labels->v, set)};
  });
}

igd_status igd_pipeline_ours(const igd_rgb* img, const igd_depth* gt, size_t n,
                             const igd_slic_params* slic,
                             const igd_bilateral_params* bilateral,
                             igd_scene_type scene, igd_depth** out,
                             igd_samples** samples_out,
                             igd_labels** labels_out) {
  return guard([&] {
    need(img, "image");
    need(gt, "gt");
    need(out, "out");
    const PipelineParams pp{slic_of(slic), scene_of(scene), bilateral_of(bilateral)};
    Reconstruction r = reconstruct_ours(img->v, simulated_sensor(gt->v), n, pp);
    *out = new igd_depth{std::move(r.depth)};
    if (samples_out) *samples_out = wrap(std::move(r.samples));
    if (labels_out) *labels_out = new igd_labels{std::move(r.segments)};
  });
}

igd_status igd_pipeline_first_order(const igd_rgb* img, const igd_depth* gt,
                                    size_t n, const igd_slic_params* slic,
                                    igd_depth** out, igd_samples** samples_out,
                                    igd_labels** labels_out) {
  return guard([&] {
    need(img, "image");
    need(gt, "gt");
    need(out, "out");
    Reconstruction r =
        first_order_baseline(img->v, simulated_sensor(gt->v), n, slic_of(slic));
    *out = new igd_depth{std::move(r.depth)};
    if (samples_out) *samples_out = wrap(std::move(r.samples));
    if (labels_out) *labels_out = new igd_labels{std::move(r.segments)};
  });
}

// ---- planar model

void igd_model_defaults(igd_model_params* params) {
  if (params == nullptr) return;
  const FitModelParams p;
  *params = {p.inlier_tol,   p.depth_ref,   p.relative_tol ? 1 : 0,
             p.min_region_fraction, p.min_region_px, p.delta_target,
             p.max_regions,  p.seed};
}

igd_status igd_fit_model(const igd_depth* depth, const igd_model_params* params,
                         igd_model** out) {
  return guard([&] {
    need(depth, "depth");
    need(out, "out");
    FitModelParams p;
    if (params) {
      p.inlier_tol = params->inlier_tol;
      p.depth_ref = params->depth_ref;
      p.relative_tol = params->relative_tol != 0;
      p.min_region_fraction = params->min_region_fraction;
      p.min_region_px = params->min_region_px;
      p.delta_target = params->delta_target;
      p.max_regions = params->max_regions;
      p.seed = params->seed;
    }
    *out = new igd_model{fit_model(depth->v, p)};
  });
}

void igd_model_stats(const igd_model* model, int* regions, double* delta,
                     double* epsilon) {
  if (model == nullptr) return;
  if (regions) *regions = model->v.stats.regions;
  if (delta) *delta = model->v.stats.delta;
  if (epsilon) *epsilon = model->v.stats.epsilon;
}

size_t igd_model_min_samples(const igd_model* model) {
  return model ? min_samples(model->v) : 0;
}

igd_status igd_model_plane(const igd_model* model, int index, double* a,
                           double* b, double* c) {
  return guard([&] {
    need(model, "model");
    if (index < 0 || index >= static_cast<int>(model->v.planes.size())) {
      throw_usage("plane index out of range");
    }
    const Plane& p = model->v.planes[static_cast<std::size_t>(index)];
    if (a) *a = p.a;
    if (b) *b = p.b;
    if (c) *c = p.c;
  });
}

igd_status igd_model_labels(const igd_model* model, igd_labels** out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    *out = new igd_labels{model->v.segments};
  });
}

igd_status igd_model_validity(const igd_model* model, igd_mask** out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    *out = new igd_mask{model->v.validity};
  });
}

igd_status igd_model_render(const igd_model* model, igd_depth** out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    *out = new igd_depth{model->v.render()};
  });
}

igd_status igd_model_optimal_rmse(const igd_model* model, const igd_depth* depth,
                                  double* out) {
  return guard([&] {
    need(model, "model");
    need(depth, "depth");
    need(out, "out");
    *out = optimal_scenario_rmse(depth->v, model->v);
  });
}

void igd_model_free(igd_model* model) { delete model; }

// ---- edge statistics

igd_status igd_rgb_edges(const igd_rgb* img, double high, double low,
                         igd_mask** out) {
  return guard([&] {
    need(img, "image");
    need(out, "out");
    *out = mask_of(rgb_edges(img->v, EdgeParams{high, low}));
  });
}

igd_status igd_depth_boundaries(const igd_depth* depth, double threshold,
                                igd_mask** out) {
  return guard([&] {
    need(depth, "depth");
    need(out, "out");
    *out = mask_of(depth_boundaries(depth->v, threshold));
  });
}

igd_status igd_edge_probabilities(const igd_mask* rgb, const igd_mask* depth,
                                  int tol_px, double* rgb_given_depth,
                                  double* depth_given_rgb) {
  return guard([&] {
    const EdgeProbabilities p =
        conditional_probabilities(boundary_of(rgb), boundary_of(depth), tol_px);
    if (rgb_given_depth) *rgb_given_depth = p.rgb_given_depth;
    if (depth_given_rgb) *depth_given_rgb = p.depth_given_rgb;
  });
}

igd_status igd_boundary_overlay(const igd_mask* rgb, const igd_mask* depth,
                                igd_rgb** out) {
  return guard([&] {
    need(out, "out");
    *out = new igd_rgb{boundary_overlay(boundary_of(rgb), boundary_of(depth))};
  });
}

// ---- MTF

void igd_chart_defaults(igd_chart_params* params) {
  if (params == nullptr) return;
  const ChartParams c;
  *params = {c.size, c.sectors, c.near_m, c.far_m, c.texture_seed};
}

igd_status igd_chart_generate(const igd_chart_params* params, igd_chart** out) {
  return guard([&] {
    need(params, "params");
    need(out, "out");
    const ChartParams p{params->size, params->sectors, params->near_m,
                        params->far_m, params->texture_seed};
    StarChart chart = generate_chart(p);
    auto* c = new igd_chart{p, chart, {chart.rgb}, {chart.depth}};
    *out = c;
  });
}

igd_status igd_chart_save(const igd_chart* chart, const char* dir) {
  return guard([&] {
    need(chart, "chart");
    need(dir, "dir");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw_data(std::string("cannot create directory ") + dir);
    const fs::path d(dir);
    write_rgb_png((d / "chart_rgb.png").string(), chart->v.rgb);
    write_depth_png((d / "chart_depth.png").string(), chart->v.depth);
    std::ostringstream os;
    os.precision(17);
    os << "[chart]\nsize=" << chart->params.size
       << "\nsectors=" << chart->params.sectors
       << "\nnear_m=" << chart->params.near_m
       << "\nfar_m=" << chart->params.far_m
       << "\ntexture_seed=" << chart->params.texture_seed << "\n";
    write_text_file((d / "chart.ini").string(), os.str());
  });
}

igd_status igd_chart_load(const char* dir, igd_chart** out) {
  return guard([&] {
    need(dir, "dir");
    need(out, "out");
    const std::string text =
        read_text_file((fs::path(dir) / "chart.ini").string());
    boost::property_tree::ptree tree;
    ChartParams p;
    try {
      std::istringstream in(text);
      boost::property_tree::read_ini(in, tree);
      p.size = tree.get<int>("chart.size");
      p.sectors = tree.get<int>("chart.sectors");
      p.near_m = tree.get<double>("chart.near_m");
      p.far_m = tree.get<double>("chart.far_m");
      p.texture_seed = tree.get<std::uint64_t>("chart.texture_seed");
    } catch (const boost::property_tree::ptree_error& e) {
      throw_data(std::string(dir) + "/chart.ini: " + e.what());
    }
    StarChart chart = generate_chart(p);
    *out = new igd_chart{p, chart, {chart.rgb}, {chart.depth}};
  });
}

const igd_rgb* igd_chart_rgb(const igd_chart* chart) {
  return chart ? &chart->rgb : nullptr;
}

const igd_depth* igd_chart_depth(const igd_chart* chart) {
  return chart ? &chart->depth : nullptr;
}

igd_status igd_mtf(const igd_chart* chart, const igd_depth* recon,
                   const double* radii, size_t num_radii, igd_mtf_point* points,
                   size_t capacity, size_t* count) {
  return guard([&] {
    need(chart, "chart");
    need(recon, "reconstruction");
    std::vector<double> r;
    if (radii != nullptr) {
      r.assign(radii, radii + num_radii);
    } else {
      r = default_radii(chart->v);
    }
    const auto curve = compute_mtf(chart->v, recon->v, r);
    if (count) *count = curve.size();
    for (std::size_t i = 0; i < curve.size() && i < capacity && points; ++i) {
      points[i] = {curve[i].frequency, curve[i].mtf, curve[i].radius,
                   curve[i].modulation};
    }
  });
}

void igd_chart_free(igd_chart* chart) { delete chart; }

// ---- synthetic scenes

igd_status igd_scene_load(const char* path, igd_scene** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    const SceneFile f = load_scene_file(path);
    *out = new igd_scene{f.spec, f.seed, generate_synthetic_scene(f.spec, f.seed)};
  });
}

igd_status igd_scene_preset(const char* name, uint64_t seed, igd_scene** out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    const SceneSpec spec = scene_preset(name, seed);
    *out = new igd_scene{spec, seed, generate_synthetic_scene(spec, seed)};
  });
}

igd_status igd_scene_save(const igd_scene* scene, const char* dir,
                          const char* id) {
  return guard([&] {
    need(scene, "scene");
    need(dir, "dir");
    need(id, "id");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw_data(std::string("cannot create directory ") + dir);
    const fs::path d(dir);
    const std::string base = id;
    write_rgb_png((d / (base + "_rgb.png")).string(), scene->v.rgb);
    write_depth_png((d / (base + "_depth.png")).string(), scene->v.depth);
    if (!scene->spec.objects.empty()) {
      write_mask_png((d / (base + "_mask.png")).string(),
                     scene->v.obstacles.data(), scene->v.obstacles.width(),
                     scene->v.obstacles.height());
    }
    write_labels_png((d / (base + "_labels.png")).string(), scene->v.regions);
    write_text_file((d / (base + ".ini")).string(),
                    scene_to_ini(scene->spec, scene->seed));
  });
}

void igd_scene_free(igd_scene* scene) { delete scene; }

// ---- evaluation

igd_status igd_evaluate(const char* config_path, const char* out_dir,
                        int workers, igd_eval_summary* summary) {
  return guard([&] {
    need(config_path, "config path");
    need(out_dir, "output directory");
    ExperimentConfig config = load_config(config_path);
    if (workers > 0) config.workers = workers;
    const EvalReport report = run_matrix(config);
    write_report(report, config, out_dir);
    if (summary) *summary = {report.images, report.rows.size(), report.errors.size()};
  });
}

}  // extern "C"
