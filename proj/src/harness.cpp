#include "igdepth/harness.hpp"

#include <openssl/evp.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "igdepth/delaunay.hpp"
#include "igdepth/io.hpp"
#include "igdepth/sampler.hpp"
#include "igdepth/scene.hpp"

namespace igdepth {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;
using nlohmann::json;

namespace {

bool is_sampler(const std::string& s) {
  return s == sampler_ids::kCom || s == sampler_ids::kGrid ||
         s == sampler_ids::kRandom;
}

bool is_reconstructor(const std::string& r) {
  return r == reconstructor_ids::kOurs || r == reconstructor_ids::kZeroOrder ||
         r == reconstructor_ids::kBilinear ||
         r == reconstructor_ids::kFirstOrder;
}

const char* type_name(SceneType t) {
  return t == SceneType::Indoor ? "indoor" : "outdoor";
}

}  // namespace

bool method_supported(const std::string& sampler,
                      const std::string& reconstructor) {
  if (!is_sampler(sampler) || !is_reconstructor(reconstructor)) return false;
  return reconstructor != reconstructor_ids::kFirstOrder ||
         sampler == sampler_ids::kCom;
}

MethodOutput run_method(const ImageRecord& image, const std::string& sampler,
                        const std::string& reconstructor, std::size_t n,
                        const MethodParams& params,
                        std::optional<std::size_t> sample_count) {
  if (!is_sampler(sampler)) throw_usage("unknown sampler '" + sampler + "'");
  if (!is_reconstructor(reconstructor)) {
    throw_usage("unknown reconstructor '" + reconstructor + "'");
  }
  if (!method_supported(sampler, reconstructor)) {
    throw_usage(reconstructor + " reconstruction needs the com sampler");
  }
  if (n < 1) throw_usage("budget must be >= 1");
  const int w = image.rgb.width(), h = image.rgb.height();
  if (!image.gt.same_shape(w, h)) {
    throw_data(image.id + ": RGB and depth sizes differ");
  }
  const Sensor sensor = simulated_sensor(image.gt);

  if (reconstructor == reconstructor_ids::kFirstOrder) {
    auto r = first_order_baseline(image.rgb, sensor, n, params.slic);
    return {std::move(r.depth), r.samples.size()};
  }
  if (sampler == sampler_ids::kCom) {
    if (reconstructor == reconstructor_ids::kOurs) {
      PipelineParams pp{params.slic, params.scene, params.bilateral};
      auto r = reconstruct_ours(image.rgb, sensor, n, pp);
      return {std::move(r.depth), r.samples.size()};
    }
    SlicParams slic = params.slic;
    slic.target_segments = static_cast<int>(
        std::min<std::size_t>(n, image.rgb.pixel_count()));
    const SegmentMap segments = slic_segment(image.rgb, slic);
    const SampleSet samples = sensor(com_pattern(segments), &segments);
    if (reconstructor == reconstructor_ids::kZeroOrder) {
      return {zero_order_fill(segments, samples,
                              UnsampledSegments::NearestSample),
              samples.size()};
    }
    return {bilinear_baseline(samples, w, h), samples.size()};
  }

  const std::size_t count =
      std::min(sample_count.value_or(n), image.rgb.pixel_count());
  const SamplePattern pattern =
      sampler == sampler_ids::kGrid
          ? grid_pattern(w, h, count)
          : random_pattern(w, h, count, params.seed);
  const SampleSet samples = sensor(pattern, nullptr);
  if (reconstructor == reconstructor_ids::kBilinear) {
    return {bilinear_baseline(samples, w, h), samples.size()};
  }
  const SegmentMap cells = nearest_sample_segments(samples);
  if (reconstructor == reconstructor_ids::kZeroOrder) {
    return {zero_order_fill(cells, samples), samples.size()};
  }
  const BilateralParams bp =
      params.bilateral ? *params.bilateral
                       : BilateralParams::for_budget(
                             w, h, std::max<std::size_t>(1, samples.size()),
                             params.scene);
  return {zero_order_bilateral(cells, samples, bp), samples.size()};
}

double optimal_scenario_rmse(const DepthMap& gt, const SegmentMap& seg,
                             const EvalMask& valid) {
  const int w = seg.width();
  if (!gt.same_shape(w, seg.height()) || valid.width() != w ||
      valid.height() != seg.height()) {
    throw_data("optimal scenario: segment map and depth sizes differ");
  }
  std::vector<std::vector<std::size_t>> members(seg.num_segments());
  const auto labels = seg.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (valid.includes(i) && gt.valid(i)) members[labels[i]].push_back(i);
  }
  const auto xy = [w](std::size_t i) {
    return Pixel{static_cast<int>(i % w), static_cast<int>(i / w)};
  };
  const auto d2 = [](Pixel a, Pixel b) {
    const std::int64_t dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
  };
  std::vector<Sample> entries;
  for (const auto& m : members) {
    if (m.empty()) continue;
    double cx = 0.0, cy = 0.0;
    for (const auto i : m) {
      cx += static_cast<double>(i % w);
      cy += static_cast<double>(i / w);
    }
    cx /= static_cast<double>(m.size());
    cy /= static_cast<double>(m.size());
    // Members are in raster order, so strict comparisons keep the first of
    // equally good candidates.
    std::size_t p1 = m[0];
    double best = std::numeric_limits<double>::infinity();
    for (const auto i : m) {
      const double dx = static_cast<double>(i % w) - cx;
      const double dy = static_cast<double>(i / w) - cy;
      if (dx * dx + dy * dy < best) {
        best = dx * dx + dy * dy;
        p1 = i;
      }
    }
    std::size_t p2 = p1;
    std::int64_t far = 0;
    for (const auto i : m) {
      if (d2(xy(i), xy(p1)) > far) {
        far = d2(xy(i), xy(p1));
        p2 = i;
      }
    }
    std::size_t p3 = p1;
    std::int64_t area = 0;
    for (const auto i : m) {
      const std::int64_t a = std::abs(orient2d(xy(p1), xy(p2), xy(i)));
      if (a > area) {
        area = a;
        p3 = i;
      }
    }
    std::vector<std::size_t> picks{p1};
    if (p2 != p1) picks.push_back(p2);
    if (p3 != p1 && p3 != p2) picks.push_back(p3);
    for (const auto i : picks) {
      entries.push_back({xy(i).x, xy(i).y, gt.at(i)});
    }
  }
  const std::size_t count = entries.size();
  const SampleSet samples(w, seg.height(), std::move(entries), "com3", count);
  return rmse(gt, first_order_fill(seg, samples), valid);
}

double optimal_scenario_rmse(const DepthMap& gt, const PlanarModel& model) {
  return optimal_scenario_rmse(gt, model.segments, model.validity);
}

// ---------------------------------------------------------------- config

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (const char c : text + ",") {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  return out;
}

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T value{};
  in >> std::boolalpha >> value;
  std::string rest;
  if (in.fail() || (in >> rest)) {
    throw_usage("config: bad value '" + text + "' for " + key);
  }
  return value;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  if (text.empty() || text.front() == '-') {
    throw_usage("config: " + key + " must be a non-negative integer");
  }
  return parse_value<std::uint64_t>(key, text);
}

SceneType parse_scene_type(const std::string& key, const std::string& text) {
  if (text == "indoor") return SceneType::Indoor;
  if (text == "outdoor") return SceneType::Outdoor;
  throw_usage("config: " + key + " must be indoor or outdoor");
}

std::pair<std::string, std::string> parse_method(const std::string& key,
                                                 const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw_usage("config: " + key + " entries look like sampler:reconstructor");
  }
  return {text.substr(0, colon), text.substr(colon + 1)};
}

std::vector<std::uint64_t> parse_seed_range(const std::string& key,
                                            const std::string& text) {
  const auto dash = text.find('-');
  if (dash == std::string::npos) return {parse_u64(key, text)};
  const std::uint64_t lo = parse_u64(key, text.substr(0, dash));
  const std::uint64_t hi = parse_u64(key, text.substr(dash + 1));
  if (hi < lo || hi - lo > 100000) throw_usage("config: bad seed range " + text);
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  return out;
}

std::string resolve(const std::string& base, const std::string& path) {
  if (path.empty() || fs::path(path).is_absolute() || base.empty()) return path;
  return (fs::path(base) / path).lexically_normal().string();
}

// Applies slic/bilateral keys from one section onto `p`.
void apply_method_keys(const std::string& section, const pt::ptree& tree,
                       MethodParams& p) {
  std::optional<double> spatial, range;
  std::optional<int> radius;
  for (const auto& [key, node] : tree) {
    const std::string v = node.data();
    const std::string name = section + "." + key;
    if (key == "compactness") {
      p.slic.compactness = parse_value<double>(name, v);
    } else if (key == "max_iterations") {
      p.slic.max_iterations = parse_value<int>(name, v);
    } else if (key == "min_segment_fraction") {
      p.slic.min_segment_fraction = parse_value<double>(name, v);
    } else if (key == "spatial_sigma") {
      spatial = parse_value<double>(name, v);
    } else if (key == "range_sigma") {
      range = parse_value<double>(name, v);
    } else if (key == "window_radius") {
      radius = parse_value<int>(name, v);
    } else {
      throw_usage("config: unknown key " + name);
    }
  }
  if (spatial || range || radius) {
    if (!(spatial && range && radius)) {
      throw_usage("config: [" + section +
                  "] must set spatial_sigma, range_sigma and window_radius "
                  "together");
    }
    p.bilateral = BilateralParams{*spatial, *range, *radius};
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (dataset_dir.empty() && scene_files.empty() && presets.empty()) {
    throw_usage("config: [dataset] needs dir, scenes or presets");
  }
  if (budgets.empty()) throw_usage("config: no budgets");
  for (const auto n : budgets) {
    if (n < 1) throw_usage("config: budgets must be >= 1");
  }
  if (samplers.empty() || reconstructors.empty()) {
    throw_usage("config: samplers and reconstructors must be non-empty");
  }
  for (const auto& s : samplers) {
    if (!is_sampler(s)) throw_usage("config: unknown sampler '" + s + "'");
  }
  for (const auto& r : reconstructors) {
    if (!is_reconstructor(r)) {
      throw_usage("config: unknown reconstructor '" + r + "'");
    }
  }
  if (!(range_cap > 0.0)) throw_usage("config: range_cap must be > 0");
  if (workers < 0) throw_usage("config: workers must be >= 0");
  for (const auto& [type, p] : params) {
    p.slic.validate();
    if (p.bilateral) p.bilateral->validate();
  }
  if (analysis.planar_model) analysis.model.validate();
  if (analysis.edge_stats) {
    analysis.edges.validate();
    if (analysis.tol_px < 0) throw_usage("config: tol_px must be >= 0");
    if (!(analysis.depth_threshold >= 0.0)) {
      throw_usage("config: depth_threshold must be >= 0");
    }
  }
  if (sweep.enabled) {
    if (sweep.reference_n < 1) throw_usage("config: sweep reference_n >= 1");
    const auto check = [](const SweepMethod& m) {
      if (!method_supported(m.sampler, m.reconstructor)) {
        throw_usage("config: unsupported sweep method " + m.sampler + ":" +
                    m.reconstructor);
      }
    };
    check(sweep.reference);
    for (const auto& m : sweep.methods) check(m);
  }
}

ExperimentConfig parse_config(const std::string& text,
                              const std::string& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw_usage(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  std::vector<std::string> canonical;
  for (const auto& [section, node] : tree) {
    if (node.empty()) {
      throw_usage("config: key '" + section + "' outside a section");
    }
    for (const auto& [key, value] : node) {
      std::string v = value.data();
      canonical.push_back(section + "." + key + "=" + v);
    }
  }
  std::sort(canonical.begin(), canonical.end());
  for (const auto& line : canonical) c.canonical += line + "\n";

  MethodParams base{SlicParams{}, std::nullopt, SceneType::Outdoor, 1};
  if (const auto s = tree.get_child_optional("slic")) {
    apply_method_keys("slic", *s, base);
  }
  if (const auto s = tree.get_child_optional("bilateral")) {
    apply_method_keys("bilateral", *s, base);
  }
  for (const auto& [section, node] : tree) {
    if (section == "dataset") {
      for (const auto& [key, value] : node) {
        const std::string v = value.data();
        if (key == "dir") {
          c.dataset_dir = resolve(base_dir, v);
        } else if (key == "scenes") {
          for (const auto& f : split_list(v)) {
            c.scene_files.push_back(resolve(base_dir, f));
          }
        } else if (key == "presets") {
          for (const auto& item : split_list(v)) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) {
              throw_usage("config: presets entries look like name:1-10");
            }
            c.presets.emplace_back(
                item.substr(0, colon),
                parse_seed_range("dataset.presets", item.substr(colon + 1)));
          }
        } else if (key == "type") {
          c.dataset_type = parse_scene_type("dataset.type", v);
        } else {
          throw_usage("config: unknown key dataset." + key);
        }
      }
    } else if (section == "experiment") {
      for (const auto& [key, value] : node) {
        const std::string v = value.data();
        const std::string name = "experiment." + key;
        if (key == "budgets") {
          c.budgets.clear();
          for (const auto& b : split_list(v)) {
            c.budgets.push_back(parse_u64(name, b));
          }
        } else if (key == "samplers") {
          c.samplers = split_list(v);
        } else if (key == "reconstructors") {
          c.reconstructors = split_list(v);
        } else if (key == "range_cap") {
          c.range_cap = parse_value<double>(name, v);
        } else if (key == "seed") {
          c.seed = parse_u64(name, v);
        } else if (key == "workers") {
          c.workers = parse_value<int>(name, v);
        } else {
          throw_usage("config: unknown key " + name);
        }
      }
    } else if (section == "analysis") {
      auto& a = c.analysis;
      for (const auto& [key, value] : node) {
        const std::string v = value.data();
        const std::string name = "analysis." + key;
        if (key == "planar_model") {
          a.planar_model = parse_value<bool>(name, v);
        } else if (key == "edge_stats") {
          a.edge_stats = parse_value<bool>(name, v);
        } else if (key == "depth_threshold") {
          a.depth_threshold = parse_value<double>(name, v);
        } else if (key == "edge_high") {
          a.edges.high = parse_value<double>(name, v);
        } else if (key == "edge_low") {
          a.edges.low = parse_value<double>(name, v);
        } else if (key == "tol_px") {
          a.tol_px = parse_value<int>(name, v);
        } else if (key == "inlier_tol") {
          a.model.inlier_tol = parse_value<double>(name, v);
        } else if (key == "depth_ref") {
          a.model.depth_ref = parse_value<double>(name, v);
        } else if (key == "relative_tol") {
          a.model.relative_tol = parse_value<bool>(name, v);
        } else if (key == "min_region_fraction") {
          a.model.min_region_fraction = parse_value<double>(name, v);
        } else if (key == "min_region_px") {
          a.model.min_region_px = parse_u64(name, v);
        } else if (key == "delta_target") {
          a.model.delta_target = parse_value<double>(name, v);
        } else if (key == "max_regions") {
          a.model.max_regions = parse_value<int>(name, v);
        } else if (key == "model_seed") {
          a.model.seed = parse_u64(name, v);
        } else {
          throw_usage("config: unknown key " + name);
        }
      }
    } else if (section == "sweep") {
      auto& s = c.sweep;
      for (const auto& [key, value] : node) {
        const std::string v = value.data();
        const std::string name = "sweep." + key;
        if (key == "enabled") {
          s.enabled = parse_value<bool>(name, v);
        } else if (key == "reference") {
          const auto [a, b] = parse_method(name, v);
          s.reference = {a, b};
        } else if (key == "reference_n") {
          s.reference_n = parse_u64(name, v);
        } else if (key == "methods") {
          s.methods.clear();
          for (const auto& item : split_list(v)) {
            const auto [a, b] = parse_method(name, item);
            s.methods.push_back({a, b});
          }
        } else if (key == "metric") {
          if (v != "mask_rmse" && v != "rmse") {
            throw_usage("config: sweep.metric must be mask_rmse or rmse");
          }
          s.use_mask = v == "mask_rmse";
        } else if (key == "max_n") {
          s.max_n = parse_u64(name, v);
        } else {
          throw_usage("config: unknown key " + name);
        }
      }
    } else if (section != "slic" && section != "bilateral" &&
               section != "indoor" && section != "outdoor") {
      throw_usage("config: unknown section [" + section + "]");
    }
  }
  for (const SceneType t : {SceneType::Indoor, SceneType::Outdoor}) {
    MethodParams p = base;
    p.scene = t;
    p.seed = c.seed;
    if (const auto s = tree.get_child_optional(type_name(t))) {
      apply_method_keys(type_name(t), *s, p);
    }
    c.params[t] = p;
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  const std::string text = read_text_file(path);
  return parse_config(text, fs::path(path).parent_path().string());
}

std::string config_hash(const ExperimentConfig& config) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(config.canonical.data(), config.canonical.size(), digest,
                 &len, EVP_sha256(), nullptr) != 1) {
    throw_internal("SHA-256 digest failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0')
       << static_cast<int>(digest[i]);
  }
  return os.str();
}

// ---------------------------------------------------------------- data

std::vector<ImageRecord> load_images(const ExperimentConfig& config,
                                     std::vector<ImageError>& errors) {
  std::vector<ImageRecord> images;
  if (!config.dataset_dir.empty()) {
    std::error_code ec;
    if (!fs::is_directory(config.dataset_dir, ec)) {
      throw_data("dataset directory not found: " + config.dataset_dir);
    }
    std::set<std::string> ids;
    for (const auto& entry : fs::directory_iterator(config.dataset_dir)) {
      const std::string name = entry.path().filename().string();
      const std::string suffix = "_rgb.png";
      if (name.size() > suffix.size() &&
          name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
        ids.insert(name.substr(0, name.size() - suffix.size()));
      }
    }
    for (const auto& id : ids) {
      const fs::path dir(config.dataset_dir);
      try {
        ImageRecord r;
        r.id = id;
        r.type = config.dataset_type;
        r.rgb = read_rgb_png((dir / (id + "_rgb.png")).string());
        r.gt = read_depth_png((dir / (id + "_depth.png")).string());
        if (!r.gt.same_shape(r.rgb.width(), r.rgb.height())) {
          throw_data("RGB and depth sizes differ");
        }
        const fs::path mask = dir / (id + "_mask.png");
        if (fs::exists(mask)) {
          r.mask = read_mask_png(mask.string());
          if (r.mask->width() != r.rgb.width() ||
              r.mask->height() != r.rgb.height()) {
            throw_data("mask size differs from the RGB image");
          }
        }
        const fs::path labels = dir / (id + "_labels.png");
        if (fs::exists(labels)) {
          r.regions = read_labels_png(labels.string());
          if (r.regions->width() != r.rgb.width() ||
              r.regions->height() != r.rgb.height()) {
            throw_data("label image size differs from the RGB image");
          }
        }
        images.push_back(std::move(r));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Data) throw;
        errors.push_back({id, "load", e.what()});
      }
    }
  }
  const auto add_scene = [&](const std::string& id, const SceneSpec& spec,
                             std::uint64_t seed) {
    SyntheticScene s = generate_synthetic_scene(spec, seed);
    ImageRecord r;
    r.id = id;
    r.type = s.type;
    r.rgb = std::move(s.rgb);
    r.gt = std::move(s.depth);
    if (!spec.objects.empty()) r.mask = std::move(s.obstacles);
    if (spec.depth_noise == 0.0) r.regions = std::move(s.regions);
    images.push_back(std::move(r));
  };
  for (const auto& file : config.scene_files) {
    const std::string id = fs::path(file).stem().string();
    try {
      const SceneFile scene = load_scene_file(file);
      add_scene(id, scene.spec, scene.seed);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Internal) throw;
      errors.push_back({id, "load", e.what()});
    }
  }
  for (const auto& [name, seeds] : config.presets) {
    for (const auto seed : seeds) {
      add_scene(name + "_" + std::to_string(seed), scene_preset(name, seed),
                seed);
    }
  }
  return images;
}

// ---------------------------------------------------------------- running

namespace {

struct Metrics {
  double rmse = 0.0;
  double rel = 0.0;
  std::optional<double> mask_rmse;
  std::optional<double> mask_rel;
};

Metrics evaluate(const ImageRecord& image, const DepthMap& pred,
                 double range_cap) {
  Metrics m;
  const EvalMask all = EvalMask::all(image.gt.width(), image.gt.height());
  m.rmse = rmse(image.gt, pred, all, range_cap);
  m.rel = rel(image.gt, pred, all, range_cap);
  if (image.mask && image.mask->count() > 0) {
    try {
      m.mask_rmse = rmse(image.gt, pred, *image.mask, range_cap);
      m.mask_rel = rel(image.gt, pred, *image.mask, range_cap);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Data) throw;
      m.mask_rmse.reset();
      m.mask_rel.reset();
    }
  }
  return m;
}

std::optional<double> sweep_metric(const ImageRecord& image,
                                   const DepthMap& pred, bool use_mask,
                                   double range_cap) {
  if (!use_mask) {
    return rmse(image.gt, pred, EvalMask::all(pred.width(), pred.height()),
                range_cap);
  }
  if (!image.mask || image.mask->count() == 0) return std::nullopt;
  return rmse(image.gt, pred, *image.mask, range_cap);
}

struct ImageResult {
  std::vector<EvalRow> rows;
  std::vector<ImageError> errors;
  std::optional<AnalysisRow> analysis;
  std::vector<SweepRow> sweeps;
};

ImageResult process_image(const ExperimentConfig& config,
                          const ImageRecord& image) {
  ImageResult out;
  const MethodParams& params = config.for_type(image.type);
  const std::size_t pixels = image.rgb.pixel_count();
  for (const std::size_t n : config.budgets) {
    // Baselines are compared at the realized com sample count.
    std::optional<std::size_t> com_count;
    const bool has_com =
        std::find(config.samplers.begin(), config.samplers.end(),
                  sampler_ids::kCom) != config.samplers.end();
    for (const auto& sampler : config.samplers) {
      for (const auto& recon : config.reconstructors) {
        if (!method_supported(sampler, recon)) continue;
        std::ostringstream context;
        context << sampler << ":" << recon << " n=" << n;
        try {
          std::optional<std::size_t> count;
          if (sampler != sampler_ids::kCom && has_com) {
            if (!com_count) {
              SlicParams slic = params.slic;
              slic.target_segments =
                  static_cast<int>(std::min<std::size_t>(n, pixels));
              const SegmentMap seg = slic_segment(image.rgb, slic);
              com_count =
                  execute(com_pattern(seg), image.gt, {&seg, 0.0, 0}).size();
            }
            count = *com_count;
          }
          const MethodOutput result =
              run_method(image, sampler, recon, n, params, count);
          if (sampler == sampler_ids::kCom &&
              recon != reconstructor_ids::kFirstOrder) {
            com_count = result.samples;
          }
          const Metrics m = evaluate(image, result.depth, config.range_cap);
          out.rows.push_back({image.id, sampler, recon, n, result.samples,
                              static_cast<double>(result.samples) /
                                  static_cast<double>(pixels),
                              m.rmse, m.rel, m.mask_rmse, m.mask_rel});
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::Data) throw;
          out.errors.push_back({image.id, context.str(), e.what()});
        }
      }
    }
  }

  const auto& a = config.analysis;
  if (a.planar_model || a.edge_stats) {
    AnalysisRow row;
    row.id = image.id;
    if (a.planar_model) {
      try {
        const PlanarModel model = fit_model(image.gt, a.model);
        row.model = model.stats;
        row.min_samples = min_samples(model);
        row.optimal_rmse = optimal_scenario_rmse(image.gt, model);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Data) throw;
        out.errors.push_back({image.id, "planar-model", e.what()});
      }
      if (image.regions) {
        row.true_regions = image.regions->num_segments();
        row.true_optimal_rmse = optimal_scenario_rmse(
            image.gt, *image.regions,
            EvalMask::all(image.gt.width(), image.gt.height()));
      }
    }
    if (a.edge_stats) {
      try {
        row.edges = conditional_probabilities(
            rgb_edges(image.rgb, a.edges),
            depth_boundaries(image.gt, a.depth_threshold), a.tol_px);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Data) throw;
        out.errors.push_back({image.id, "edge-stats", e.what()});
      }
    }
    out.analysis = row;
  }

  const auto& s = config.sweep;
  if (s.enabled) {
    try {
      const MethodOutput ref = run_method(image, s.reference.sampler,
                                          s.reference.reconstructor,
                                          s.reference_n, params);
      const auto target =
          sweep_metric(image, ref.depth, s.use_mask, config.range_cap);
      if (!target) throw_data("sweep metric needs a non-empty mask");
      const std::size_t max_n = s.max_n == 0 ? pixels : std::min(s.max_n, pixels);
      for (const auto& m : s.methods) {
        SweepRow row{image.id, m.sampler, m.reconstructor, *target,
                     ref.samples, std::nullopt, pixels};
        row.required = required_samples(image, m, *target, s.use_mask,
                                        std::max<std::size_t>(3, ref.samples),
                                        max_n, params, config.range_cap);
        out.sweeps.push_back(row);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Data) throw;
      out.errors.push_back({image.id, "sweep", e.what()});
    }
  }
  return out;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

std::optional<std::size_t> required_samples(const ImageRecord& image,
                                            const SweepMethod& method,
                                            double target, bool use_mask,
                                            std::size_t start,
                                            std::size_t max_n,
                                            const MethodParams& params,
                                            double range_cap) {
  if (start < 1 || max_n < start) throw_usage("sweep: need 1 <= start <= max_n");
  const auto reaches = [&](std::size_t k) {
    const MethodOutput out =
        run_method(image, method.sampler, method.reconstructor, k, params, k);
    const auto v = sweep_metric(image, out.depth, use_mask, range_cap);
    if (!v) throw_data("sweep metric needs a non-empty mask");
    return *v <= target;
  };
  std::size_t fail = 0, pass = start;
  while (!reaches(pass)) {
    if (pass >= max_n) return std::nullopt;
    fail = pass;
    pass = std::min(max_n, 2 * pass);
  }
  while (fail != 0 && pass - fail > 1) {
    const std::size_t mid = fail + (pass - fail) / 2;
    if (reaches(mid)) {
      pass = mid;
    } else {
      fail = mid;
    }
  }
  return pass;
}

EvalReport run_matrix(const ExperimentConfig& config) {
  config.validate();
  std::vector<ImageError> errors;
  const std::string started = utc_now();
  std::vector<ImageRecord> images = load_images(config, errors);
  EvalReport report = run_matrix(config, images, std::move(errors));
  report.started_utc = started;
  return report;
}

EvalReport run_matrix(const ExperimentConfig& config,
                      const std::vector<ImageRecord>& images,
                      std::vector<ImageError> load_errors) {
  config.validate();
  EvalReport report;
  report.started_utc = utc_now();
  report.errors = std::move(load_errors);
  if (images.empty()) throw_data("dataset is empty: no image could be loaded");
  report.images = images.size();

  std::vector<ImageResult> results(images.size());
  std::vector<std::exception_ptr> failures(images.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < images.size(); i = next++) {
      try {
        results[i] = process_image(config, images[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int hw = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  const int threads = std::min<int>(config.workers > 0 ? config.workers : hw,
                                    static_cast<int>(images.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  for (auto& r : results) {
    for (auto& row : r.rows) report.rows.push_back(std::move(row));
    for (auto& e : r.errors) report.errors.push_back(std::move(e));
    if (r.analysis) report.analysis.push_back(std::move(*r.analysis));
    for (auto& s : r.sweeps) report.sweeps.push_back(std::move(s));
  }
  for (const auto& s : config.samplers) {
    for (const auto& r : config.reconstructors) {
      if (!method_supported(s, r)) report.skipped.push_back(s + ":" + r);
    }
  }

  for (const std::size_t n : config.budgets) {
    for (const auto& s : config.samplers) {
      for (const auto& r : config.reconstructors) {
        std::vector<double> samples, density, e_rmse, e_rel, m_rmse, m_rel;
        for (const auto& row : report.rows) {
          if (row.n != n || row.sampler != s || row.reconstructor != r) continue;
          samples.push_back(static_cast<double>(row.samples));
          density.push_back(row.density);
          e_rmse.push_back(row.rmse);
          e_rel.push_back(row.rel);
          if (row.mask_rmse) {
            m_rmse.push_back(*row.mask_rmse);
            m_rel.push_back(*row.mask_rel);
          }
        }
        if (samples.empty()) continue;
        Aggregate agg{s, r, n, samples.size(), mean(samples), mean(density),
                      mean(e_rmse), mean(e_rel), m_rmse.size(),
                      std::nullopt, std::nullopt};
        if (!m_rmse.empty()) {
          agg.mask_rmse = mean(m_rmse);
          agg.mask_rel = mean(m_rel);
        }
        report.aggregates.push_back(agg);
      }
    }
  }
  report.finished_utc = utc_now();
  return report;
}

// ---------------------------------------------------------------- output

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(9) << v;
  return os.str();
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : ""; }

json opt_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Histogram {
  std::string statistic;
  std::vector<double> values;
};

std::string histogram_csv(const std::vector<Histogram>& stats, int bins) {
  std::ostringstream os;
  os << "statistic,bin_lo,bin_hi,count\n";
  for (const auto& h : stats) {
    if (h.values.empty()) continue;
    const auto [lo_it, hi_it] = std::minmax_element(h.values.begin(), h.values.end());
    const double lo = *lo_it;
    const double hi = *hi_it > lo ? *hi_it : lo + 1.0;
    std::vector<std::size_t> counts(bins, 0);
    for (const double v : h.values) {
      const int b = std::min(bins - 1, static_cast<int>((v - lo) / (hi - lo) * bins));
      ++counts[b];
    }
    for (int b = 0; b < bins; ++b) {
      os << h.statistic << "," << num(lo + (hi - lo) * b / bins) << ","
         << num(lo + (hi - lo) * (b + 1) / bins) << "," << counts[b] << "\n";
    }
  }
  return os.str();
}

}  // namespace

std::string report_csv(const EvalReport& report) {
  std::ostringstream os;
  os << "id,sampler,reconstructor,n,samples,density,rmse,rel,mask_rmse,"
        "mask_rel\n";
  for (const auto& r : report.rows) {
    os << csv_field(r.id) << "," << r.sampler << "," << r.reconstructor << ","
       << r.n << "," << r.samples << "," << num(r.density) << ","
       << num(r.rmse) << "," << num(r.rel) << "," << opt(r.mask_rmse) << ","
       << opt(r.mask_rel) << "\n";
  }
  return os.str();
}

std::string aggregates_csv(const EvalReport& report) {
  std::ostringstream os;
  os << "sampler,reconstructor,n,images,samples,density,rmse,rel,mask_images,"
        "mask_rmse,mask_rel\n";
  for (const auto& a : report.aggregates) {
    os << a.sampler << "," << a.reconstructor << "," << a.n << "," << a.images
       << "," << num(a.samples) << "," << num(a.density) << "," << num(a.rmse)
       << "," << num(a.rel) << "," << a.mask_images << "," << opt(a.mask_rmse)
       << "," << opt(a.mask_rel) << "\n";
  }
  return os.str();
}

std::string report_json(const EvalReport& report) {
  json j;
  j["images"] = report.images;
  j["rows"] = json::array();
  for (const auto& r : report.rows) {
    j["rows"].push_back({{"id", r.id},
                         {"sampler", r.sampler},
                         {"reconstructor", r.reconstructor},
                         {"n", r.n},
                         {"samples", r.samples},
                         {"density", r.density},
                         {"rmse", r.rmse},
                         {"rel", r.rel},
                         {"mask_rmse", opt_json(r.mask_rmse)},
                         {"mask_rel", opt_json(r.mask_rel)}});
  }
  j["aggregates"] = json::array();
  for (const auto& a : report.aggregates) {
    j["aggregates"].push_back({{"sampler", a.sampler},
                               {"reconstructor", a.reconstructor},
                               {"n", a.n},
                               {"images", a.images},
                               {"samples", a.samples},
                               {"density", a.density},
                               {"rmse", a.rmse},
                               {"rel", a.rel},
                               {"mask_images", a.mask_images},
                               {"mask_rmse", opt_json(a.mask_rmse)},
                               {"mask_rel", opt_json(a.mask_rel)}});
  }
  j["errors"] = json::array();
  for (const auto& e : report.errors) {
    j["errors"].push_back(
        {{"id", e.id}, {"context", e.context}, {"message", e.message}});
  }
  j["skipped"] = report.skipped;
  if (!report.analysis.empty()) {
    j["analysis"] = json::array();
    for (const auto& a : report.analysis) {
      json row{{"id", a.id}};
      if (a.model) {
        row["regions"] = a.model->regions;
        row["delta"] = a.model->delta;
        row["epsilon"] = a.model->epsilon;
        row["min_samples"] = *a.min_samples;
        row["optimal_rmse"] = opt_json(a.optimal_rmse);
      }
      if (a.true_regions) {
        row["true_regions"] = *a.true_regions;
        row["true_optimal_rmse"] = opt_json(a.true_optimal_rmse);
      }
      if (a.edges) {
        row["p_rgb_given_depth"] = a.edges->rgb_given_depth;
        row["p_depth_given_rgb"] = a.edges->depth_given_rgb;
      }
      j["analysis"].push_back(row);
    }
  }
  if (!report.sweeps.empty()) {
    j["sweeps"] = json::array();
    for (const auto& s : report.sweeps) {
      json row{{"id", s.id},
               {"sampler", s.sampler},
               {"reconstructor", s.reconstructor},
               {"target", s.target},
               {"reference_samples", s.reference_samples},
               {"pixels", s.pixels}};
      row["required"] = s.required ? json(*s.required) : json(nullptr);
      j["sweeps"].push_back(row);
    }
  }
  return j.dump(2) + "\n";
}

void write_report(const EvalReport& report, const ExperimentConfig& config,
                  const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw_data("cannot create output directory " + out_dir);
  const fs::path dir(out_dir);
  std::vector<std::string> outputs{"report.csv", "aggregates.csv",
                                   "report.json"};
  write_text_file((dir / "report.csv").string(), report_csv(report));
  write_text_file((dir / "aggregates.csv").string(), aggregates_csv(report));
  write_text_file((dir / "report.json").string(), report_json(report));

  if (!report.analysis.empty()) {
    std::ostringstream model, edges;
    model << "id,regions,delta,epsilon,min_samples,optimal_rmse,true_regions,"
             "true_optimal_rmse\n";
    edges << "id,p_rgb_given_depth,p_depth_given_rgb\n";
    Histogram hn{"regions", {}}, hd{"delta", {}}, he{"epsilon", {}};
    bool any_model = false, any_edges = false;
    for (const auto& a : report.analysis) {
      if (a.model) {
        any_model = true;
        model << csv_field(a.id) << "," << a.model->regions << ","
              << num(a.model->delta) << "," << num(a.model->epsilon) << ","
              << *a.min_samples << "," << opt(a.optimal_rmse) << ","
              << (a.true_regions ? std::to_string(*a.true_regions) : "") << ","
              << opt(a.true_optimal_rmse) << "\n";
        hn.values.push_back(a.model->regions);
        hd.values.push_back(a.model->delta);
        he.values.push_back(a.model->epsilon);
      }
      if (a.edges) {
        any_edges = true;
        edges << csv_field(a.id) << "," << num(a.edges->rgb_given_depth) << ","
              << num(a.edges->depth_given_rgb) << "\n";
      }
    }
    if (any_model) {
      write_text_file((dir / "model_stats.csv").string(), model.str());
      write_text_file((dir / "model_histograms.csv").string(),
                      histogram_csv({hn, hd, he}, 10));
      outputs.push_back("model_stats.csv");
      outputs.push_back("model_histograms.csv");
    }
    if (any_edges) {
      write_text_file((dir / "edge_stats.csv").string(), edges.str());
      outputs.push_back("edge_stats.csv");
    }
  }
  if (!report.sweeps.empty()) {
    std::ostringstream os;
    os << "id,sampler,reconstructor,target,reference_samples,required,"
          "required_density,ratio\n";
    for (const auto& s : report.sweeps) {
      os << csv_field(s.id) << "," << s.sampler << "," << s.reconstructor
         << "," << num(s.target) << "," << s.reference_samples << ",";
      if (s.required) {
        os << *s.required << ","
           << num(static_cast<double>(*s.required) / s.pixels) << ","
           << num(static_cast<double>(*s.required) / s.reference_samples);
      } else {
        os << ",,";
      }
      os << "\n";
    }
    write_text_file((dir / "sweep.csv").string(), os.str());
    outputs.push_back("sweep.csv");
  }

  json params;
  for (const auto& [type, p] : config.params) {
    json entry{{"slic",
                {{"compactness", p.slic.compactness},
                 {"max_iterations", p.slic.max_iterations},
                 {"min_segment_fraction", p.slic.min_segment_fraction}}}};
    if (p.bilateral) {
      entry["bilateral"] = {{"spatial_sigma", p.bilateral->spatial_sigma},
                            {"range_sigma", p.bilateral->range_sigma},
                            {"window_radius", p.bilateral->window_radius}};
    } else {
      entry["bilateral"] =
          "auto: spatial 0.75*sqrt(pixels/n), range " +
          std::string(type == SceneType::Indoor ? "0.05" : "0.08") +
          ", radius ceil(2*spatial)";
    }
    params[type_name(type)] = entry;
  }
  json manifest{
      {"tool", "igdepth"},
      {"version", kToolVersion},
      {"config_hash", config_hash(config)},
      {"seed", config.seed},
      {"started_utc", report.started_utc},
      {"finished_utc", report.finished_utc},
      {"images", report.images},
      {"errors", report.errors.size()},
      {"outputs", outputs},
      {"parameters",
       {{"budgets", config.budgets},
        {"samplers", config.samplers},
        {"reconstructors", config.reconstructors},
        {"range_cap", config.range_cap},
        {"scene_types", params},
        {"analysis",
         {{"planar_model", config.analysis.planar_model},
          {"inlier_tol", config.analysis.model.inlier_tol},
          {"depth_ref", config.analysis.model.depth_ref},
          {"relative_tol", config.analysis.model.relative_tol},
          {"min_region_fraction", config.analysis.model.min_region_fraction},
          {"min_region_px", config.analysis.model.min_region_px},
          {"delta_target", config.analysis.model.delta_target},
          {"max_regions", config.analysis.model.max_regions},
          {"model_seed", config.analysis.model.seed},
          {"edge_stats", config.analysis.edge_stats},
          {"depth_threshold", config.analysis.depth_threshold},
          {"edge_high", config.analysis.edges.high},
          {"edge_low", config.analysis.edges.low},
          {"tol_px", config.analysis.tol_px}}},
        {"sweep",
         {{"enabled", config.sweep.enabled},
          {"reference", config.sweep.reference.sampler + ":" +
                            config.sweep.reference.reconstructor},
          {"reference_n", config.sweep.reference_n},
          {"metric", config.sweep.use_mask ? "mask_rmse" : "rmse"},
          {"max_n", config.sweep.max_n}}}}}};
  write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
}

}  // namespace igdepth
