#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "igdepth/igdepth.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Thrown on a failed library call; carries the status as exit code.
struct Failure {
  int code;
  std::string message;
};

void check(igd_status s) {
  if (s != IGD_OK) throw Failure{static_cast<int>(s), igd_last_error()};
}

[[noreturn]] void usage(const std::string& msg) { throw Failure{1, msg}; }

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Rgb = std::unique_ptr<igd_rgb, Deleter<igd_rgb, igd_rgb_free>>;
using Depth = std::unique_ptr<igd_depth, Deleter<igd_depth, igd_depth_free>>;
using Labels = std::unique_ptr<igd_labels, Deleter<igd_labels, igd_labels_free>>;
using Samples =
    std::unique_ptr<igd_samples, Deleter<igd_samples, igd_samples_free>>;
using Mask = std::unique_ptr<igd_mask, Deleter<igd_mask, igd_mask_free>>;
using Model = std::unique_ptr<igd_model, Deleter<igd_model, igd_model_free>>;
using Chart = std::unique_ptr<igd_chart, Deleter<igd_chart, igd_chart_free>>;
using Scene = std::unique_ptr<igd_scene, Deleter<igd_scene, igd_scene_free>>;

template <class Ptr, class F, class... A>
Ptr make(F f, A&&... args) {
  typename Ptr::pointer raw = nullptr;
  check(f(std::forward<A>(args)..., &raw));
  return Ptr(raw);
}

Rgb read_rgb(const std::string& path) {
  return make<Rgb>(igd_rgb_read_png, path.c_str());
}
Depth read_depth(const std::string& path) {
  return make<Depth>(igd_depth_read_png, path.c_str());
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Failure{2, "cannot write " + path};
}

void make_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{2, "cannot create directory " + dir};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

igd_scene_type scene_type(const std::string& s) {
  return s == "indoor" ? IGD_INDOOR : IGD_OUTDOOR;
}

struct SlicOpts {
  double compactness = 0.0;
  int max_iterations = 0;
  double min_segment_fraction = 0.0;

  void add(CLI::App* app) {
    igd_slic_params d;
    igd_slic_defaults(&d);
    compactness = d.compactness;
    max_iterations = d.max_iterations;
    min_segment_fraction = d.min_segment_fraction;
    app->add_option("--compactness", compactness, "SLIC compactness")
        ->capture_default_str();
    app->add_option("--max-iterations", max_iterations, "SLIC iterations")
        ->capture_default_str();
    app->add_option("--min-segment-fraction", min_segment_fraction,
                    "Merge segments below this fraction of the mean size")
        ->capture_default_str();
  }
  igd_slic_params params(int n) const {
    return {n, compactness, max_iterations, min_segment_fraction};
  }
};

struct BilateralOpts {
  std::optional<double> spatial;
  std::optional<double> range;
  std::optional<int> radius;

  void add(CLI::App* app) {
    app->add_option("--spatial-sigma", spatial, "Bilateral spatial sigma (px)");
    app->add_option("--range-sigma", range, "Bilateral range sigma (log depth)");
    app->add_option("--window-radius", radius, "Bilateral window radius (px)");
  }
  std::optional<igd_bilateral_params> params() const {
    if (!spatial && !range && !radius) return std::nullopt;
    if (!(spatial && range && radius)) {
      usage("--spatial-sigma, --range-sigma and --window-radius go together");
    }
    return igd_bilateral_params{*spatial, *range, *radius};
  }
};

int to_int(std::size_t n) {
  if (n > 0x7fffffff) usage("--n is too large");
  return static_cast<int>(n);
}

// ---- segment

struct SegmentCmd {
  std::string rgb, out;
  std::size_t n = 0;
  SlicOpts slic;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("segment", "SLIC superpixels as a 16-bit label PNG");
    c->add_option("rgb", rgb, "RGB PNG")->required();
    c->add_option("--n", n, "Target segment count")->required();
    c->add_option("-o,--output", out, "Label PNG")->required();
    slic.add(c);
    c->callback([this] { run(); });
  }
  void run() {
    const Rgb img = read_rgb(rgb);
    const igd_slic_params p = slic.params(to_int(n));
    const Labels labels = make<Labels>(igd_slic, img.get(), &p);
    check(igd_labels_write_png(labels.get(), out.c_str()));
    std::cout << "segments " << igd_labels_count(labels.get()) << "\n";
  }
};

// ---- sample

struct SampleCmd {
  std::string input, method = "com", gt, out, labels_out;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  bool from_labels = false;
  double noise = 0.0;
  std::uint64_t noise_seed = 0;
  SlicOpts slic;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand(
        "sample", "Sample pattern, measured against --gt when given");
    c->add_option("input", input, "RGB PNG, or a label PNG with --from-labels")
        ->required();
    c->add_option("--method", method, "com, com3, grid or random")
        ->check(CLI::IsMember({"com", "com3", "grid", "random"}))
        ->capture_default_str();
    c->add_option("--n", n, "Budget")->required();
    c->add_option("--gt", gt, "Ground-truth depth PNG to read samples from");
    c->add_option("-o,--output", out, "Sample CSV")->required();
    c->add_option("--seed", seed, "Random sampler seed")->capture_default_str();
    c->add_flag("--from-labels", from_labels, "Input is a label PNG");
    c->add_option("--labels-out", labels_out, "Write the SLIC labels here");
    c->add_option("--noise", noise, "Gaussian range noise sigma (m)");
    c->add_option("--noise-seed", noise_seed, "Noise seed");
    slic.add(c);
    c->callback([this] { run(); });
  }
  void run() {
    if (n < 1) usage("--n must be >= 1");
    Labels labels;
    int w = 0, h = 0;
    const bool segmented = method == "com" || method == "com3";
    if (from_labels) {
      labels = make<Labels>(igd_labels_read_png, input.c_str());
      igd_labels_size(labels.get(), &w, &h);
    } else {
      const Rgb img = read_rgb(input);
      igd_rgb_size(img.get(), &w, &h);
      if (segmented) {
        const int target = method == "com" ? to_int(n) : to_int(n / 3);
        if (target < 1) usage("com3 needs --n >= 3");
        const igd_slic_params p = slic.params(target);
        labels = make<Labels>(igd_slic, img.get(), &p);
      }
    }
    if (labels && !labels_out.empty()) {
      check(igd_labels_write_png(labels.get(), labels_out.c_str()));
    }
    Samples pattern;
    if (method == "com") {
      pattern = make<Samples>(igd_pattern_com, labels.get());
    } else if (method == "com3") {
      pattern = make<Samples>(igd_pattern_com3, labels.get());
    } else if (method == "grid") {
      pattern = make<Samples>(igd_pattern_grid, w, h, n);
    } else {
      pattern = make<Samples>(igd_pattern_random, w, h, n, seed);
    }
    igd_samples_set_budget(pattern.get(), n);
    if (gt.empty()) {
      check(igd_samples_write_csv(pattern.get(), out.c_str()));
      std::cout << "samples " << igd_samples_count(pattern.get()) << "\n";
      return;
    }
    const Depth depth = read_depth(gt);
    const Samples measured =
        make<Samples>(igd_samples_measure, pattern.get(), depth.get(),
                      segmented ? labels.get() : nullptr, noise, noise_seed);
    check(igd_samples_write_csv(measured.get(), out.c_str()));
    std::cout << "samples " << igd_samples_count(measured.get()) << "\n";
  }
};

// ---- reconstruct

struct ReconstructCmd {
  std::string method = "ours", samples, rgb, labels, gt, out, scene = "outdoor",
              samples_out;
  std::size_t n = 0;
  int width = 0, height = 0;
  SlicOpts slic;
  BilateralOpts bilateral;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("reconstruct", "Dense depth from samples");
    c->add_option("--method", method, "ours, zero-order, bilinear or first-order")
        ->check(CLI::IsMember({"ours", "zero-order", "bilinear", "first-order"}))
        ->capture_default_str();
    c->add_option("--samples", samples, "Measured sample CSV");
    c->add_option("--rgb", rgb, "RGB PNG guiding the segmentation");
    c->add_option("--labels", labels, "Label PNG to use instead of SLIC");
    c->add_option("--gt", gt,
                  "Ground truth for a simulated run (with --rgb and --n, "
                  "no --samples)");
    c->add_option("--n", n,
                  "Budget: drives SLIC and bilateral defaults (default: the "
                  "CSV budget); required for a simulated run");
    c->add_option("--samples-out", samples_out, "Simulated run: write samples");
    c->add_option("--width", width, "Image width when the CSV lacks it");
    c->add_option("--height", height, "Image height when the CSV lacks it");
    c->add_option("--scene", scene, "indoor or outdoor bilateral defaults")
        ->check(CLI::IsMember({"indoor", "outdoor"}))
        ->capture_default_str();
    c->add_option("-o,--output", out, "Depth PNG")->required();
    slic.add(c);
    bilateral.add(c);
    c->callback([this] { run(); });
  }

  void run() {
    auto bp = bilateral.params();
    if (samples.empty()) {
      simulated(bp);
      return;
    }
    if (!gt.empty()) usage("--gt only applies without --samples");
    const Samples s =
        make<Samples>(igd_samples_read_csv, samples.c_str(), width, height);
    if (!igd_samples_has_depth(s.get())) {
      usage(samples + " holds a pattern without depth; run sample with --gt");
    }
    int w = 0, h = 0;
    igd_samples_size(s.get(), &w, &h);
    const std::size_t budget = n != 0 ? n : igd_samples_budget(s.get());
    if (n != 0) igd_samples_set_budget(s.get(), n);
    // the stored budget never drops below the sample count
    if (!bp && n != 0) {
      igd_bilateral_params p{};
      check(igd_bilateral_for_budget(w, h, n, scene_type(scene), &p));
      bp = p;
    }
    Labels seg;
    if (!labels.empty()) {
      seg = make<Labels>(igd_labels_read_png, labels.c_str());
    } else if (!rgb.empty() && method != "bilinear") {
      const Rgb img = read_rgb(rgb);
      int iw = 0, ih = 0;
      igd_rgb_size(img.get(), &iw, &ih);
      if (iw != w || ih != h) {
        throw Failure{2, "RGB size differs from the sample CSV"};
      }
      const int target =
          method == "first-order" ? to_int(budget / 3) : to_int(budget);
      if (target < 1) usage("budget too small for first-order");
      const igd_slic_params p = slic.params(target);
      seg = make<Labels>(igd_slic, img.get(), &p);
    }
    if (seg) {
      int lw = 0, lh = 0;
      igd_labels_size(seg.get(), &lw, &lh);
      if (lw != w || lh != h) {
        throw Failure{2, "label size differs from the sample CSV"};
      }
    }
    Depth depth;
    if (method == "ours") {
      depth = make<Depth>(igd_fill_ours, s.get(), seg.get(),
                          bp ? &*bp : nullptr, scene_type(scene));
    } else if (method == "zero-order") {
      depth = make<Depth>(igd_fill_zero_order, s.get(), seg.get());
    } else if (method == "bilinear") {
      depth = make<Depth>(igd_fill_bilinear, s.get());
    } else {
      if (!seg) usage("first-order needs --rgb or --labels");
      depth = make<Depth>(igd_fill_first_order, s.get(), seg.get());
    }
    check(igd_depth_write_png(depth.get(), out.c_str()));
  }

  void simulated(const std::optional<igd_bilateral_params>& bp) {
    if (rgb.empty() || gt.empty() || n == 0) {
      usage("give --samples, or --rgb, --gt and --n for a simulated run");
    }
    const Rgb img = read_rgb(rgb);
    const Depth truth = read_depth(gt);
    const igd_slic_params p = slic.params(0);
    Depth depth;
    igd_samples* raw_samples = nullptr;
    igd_depth* raw = nullptr;
    if (method == "ours") {
      check(igd_pipeline_ours(img.get(), truth.get(), n, &p, bp ? &*bp : nullptr,
                              scene_type(scene), &raw, &raw_samples, nullptr));
    } else if (method == "first-order") {
      check(igd_pipeline_first_order(img.get(), truth.get(), n, &p, &raw,
                                     &raw_samples, nullptr));
    } else {
      usage("a simulated run supports ours and first-order; use sample first");
    }
    depth.reset(raw);
    const Samples s(raw_samples);
    if (!samples_out.empty()) {
      igd_samples_set_budget(s.get(), n);
      check(igd_samples_write_csv(s.get(), samples_out.c_str()));
    }
    check(igd_depth_write_png(depth.get(), out.c_str()));
    double e = 0.0;
    check(igd_rmse(truth.get(), depth.get(), nullptr, 0.0, &e));
    std::cout << "samples " << igd_samples_count(s.get()) << " rmse " << num(e)
              << "\n";
  }
};

// ---- fit-model

struct FitModelCmd {
  std::string depth, out;
  igd_model_params p{};
  bool absolute = false;

  void add(CLI::App& app) {
    igd_model_defaults(&p);
    auto* c = app.add_subcommand("fit-model", "Piecewise-planar model of a depth map");
    c->add_option("depth", depth, "Depth PNG")->required();
    c->add_option("--tol", p.inlier_tol, "Inlier tolerance (m)")->capture_default_str();
    c->add_option("--depth-ref", p.depth_ref,
                  "Tolerance grows linearly beyond this depth (m)")
        ->capture_default_str();
    c->add_flag("--absolute-tol", absolute, "Same tolerance at every depth");
    c->add_option("--min-region-fraction", p.min_region_fraction,
                  "Smallest region as a fraction of the image")
        ->capture_default_str();
    c->add_option("--min-region-px", p.min_region_px,
                  "Smallest region in pixels (overrides the fraction)");
    c->add_option("--delta-target", p.delta_target,
                  "Stop once the uncovered fraction is at most this")
        ->capture_default_str();
    c->add_option("--max-regions", p.max_regions)->capture_default_str();
    c->add_option("--seed", p.seed)->capture_default_str();
    c->add_option("-o,--output", out, "Output directory")->required();
    c->callback([this] { run(); });
  }
  void run() {
    if (absolute) p.relative_tol = 0;
    const Depth d = read_depth(depth);
    const Model model = make<Model>(igd_fit_model, d.get(), &p);
    make_dir(out);
    const fs::path dir(out);
    int regions = 0;
    double delta = 0.0, eps = 0.0, optimal = 0.0;
    igd_model_stats(model.get(), &regions, &delta, &eps);
    check(igd_model_optimal_rmse(model.get(), d.get(), &optimal));
    const Labels labels = make<Labels>(igd_model_labels, model.get());
    check(igd_labels_write_png(labels.get(), (dir / "regions.png").string().c_str()));
    const Mask valid = make<Mask>(igd_model_validity, model.get());
    check(igd_mask_write_png(valid.get(), (dir / "validity.png").string().c_str()));
    const Depth render = make<Depth>(igd_model_render, model.get());
    check(igd_depth_write_png(render.get(), (dir / "model_depth.png").string().c_str()));
    std::ostringstream planes;
    planes << "region,a,b,c\n";
    for (int i = 0; i < regions; ++i) {
      double a = 0.0, b = 0.0, c = 0.0;
      check(igd_model_plane(model.get(), i, &a, &b, &c));
      char buf[128];
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", i, a, b, c);
      planes << buf;
    }
    write_file((dir / "planes.csv").string(), planes.str());
    const json summary{{"regions", regions},
                       {"delta", delta},
                       {"epsilon", eps},
                       {"min_samples", igd_model_min_samples(model.get())},
                       {"optimal_rmse", optimal},
                       {"inlier_tol", p.inlier_tol},
                       {"depth_ref", p.depth_ref},
                       {"relative_tol", p.relative_tol != 0},
                       {"seed", p.seed}};
    write_file((dir / "model.json").string(), summary.dump(2) + "\n");
    std::cout << "N " << regions << " delta " << num(delta) << " epsilon "
              << num(eps) << " min_samples "
              << igd_model_min_samples(model.get()) << "\n";
  }
};

// ---- edge-stats

struct EdgeStatsCmd {
  std::string rgb, depth, out, overlay;
  int tol_px = 2;
  double threshold = 0.05, high = 0.15, low = 0.05;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand(
        "edge-stats", "RGB edge / depth boundary co-occurrence probabilities");
    c->add_option("rgb", rgb, "RGB PNG")->required();
    c->add_option("depth", depth, "Depth PNG")->required();
    c->add_option("--tol-px", tol_px, "Match distance (px)")->capture_default_str();
    c->add_option("--depth-threshold", threshold,
                  "Relative depth jump marking a boundary")
        ->capture_default_str();
    c->add_option("--high", high, "Hysteresis high threshold")->capture_default_str();
    c->add_option("--low", low, "Hysteresis low threshold")->capture_default_str();
    c->add_option("-o,--output", out, "JSON summary")->required();
    c->add_option("--overlay", overlay,
                  "Overlay PNG (default: <output stem>_overlay.png)");
    c->callback([this] { run(); });
  }
  void run() {
    const Rgb img = read_rgb(rgb);
    const Depth d = read_depth(depth);
    const Mask e_rgb = make<Mask>(igd_rgb_edges, img.get(), high, low);
    const Mask e_depth = make<Mask>(igd_depth_boundaries, d.get(), threshold);
    double p_rd = 0.0, p_dr = 0.0;
    check(igd_edge_probabilities(e_rgb.get(), e_depth.get(), tol_px, &p_rd, &p_dr));
    std::string over = overlay;
    if (over.empty()) {
      const fs::path o(out);
      over = (o.parent_path() / (o.stem().string() + "_overlay.png")).string();
    }
    const Rgb vis = make<Rgb>(igd_boundary_overlay, e_rgb.get(), e_depth.get());
    check(igd_rgb_write_png(vis.get(), over.c_str()));
    const json j{{"p_rgb_given_depth", p_rd},
                 {"p_depth_given_rgb", p_dr},
                 {"rgb_edge_pixels", igd_mask_count(e_rgb.get())},
                 {"depth_boundary_pixels", igd_mask_count(e_depth.get())},
                 {"tol_px", tol_px},
                 {"depth_threshold", threshold},
                 {"edge_high", high},
                 {"edge_low", low},
                 {"overlay", fs::path(over).filename().string()}};
    write_file(out, j.dump(2) + "\n");
    std::cout << "P(rgb|depth) " << num(p_rd) << " P(depth|rgb) " << num(p_dr)
              << "\n";
  }
};

// ---- mtf

struct MtfCmd {
  std::string chart_out, eval, chart, out;
  igd_chart_params p{};

  void add(CLI::App& app) {
    igd_chart_defaults(&p);
    auto* c = app.add_subcommand("mtf", "Star chart export and MTF measurement");
    c->add_option("--chart-out", chart_out, "Write the chart into this directory");
    c->add_option("--eval", eval, "Reconstructed depth PNG of the chart");
    c->add_option("--chart", chart, "Chart directory written by --chart-out");
    c->add_option("-o,--output", out, "MTF CSV");
    c->add_option("--size", p.size)->capture_default_str();
    c->add_option("--sectors", p.sectors)->capture_default_str();
    c->add_option("--near", p.near_m)->capture_default_str();
    c->add_option("--far", p.far_m)->capture_default_str();
    c->add_option("--texture-seed", p.texture_seed)->capture_default_str();
    c->callback([this] { run(); });
  }
  void run() {
    if (chart_out.empty() == eval.empty()) {
      usage("mtf needs exactly one of --chart-out or --eval");
    }
    if (!chart_out.empty()) {
      const Chart c = make<Chart>(igd_chart_generate, &p);
      check(igd_chart_save(c.get(), chart_out.c_str()));
      return;
    }
    if (chart.empty() || out.empty()) usage("--eval needs --chart and -o");
    const Chart c = make<Chart>(igd_chart_load, chart.c_str());
    const Depth recon = read_depth(eval);
    std::size_t count = 0;
    check(igd_mtf(c.get(), recon.get(), nullptr, 0, nullptr, 0, &count));
    std::vector<igd_mtf_point> pts(count);
    check(igd_mtf(c.get(), recon.get(), nullptr, 0, pts.data(), pts.size(), &count));
    std::ostringstream os;
    os << "frequency_cpp,mtf\n";
    for (const auto& pt : pts) os << num(pt.frequency) << "," << num(pt.mtf) << "\n";
    write_file(out, os.str());
  }
};

// ---- evaluate

struct EvaluateCmd {
  std::string config, out;
  int workers = 0;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("evaluate", "Run an experiment config");
    c->add_option("--config", config, "INI config")->required();
    c->add_option("-o,--output", out, "Report directory")->required();
    c->add_option("--workers", workers, "Override the worker count");
    c->callback([this] { run(); });
  }
  void run() {
    igd_eval_summary s{};
    check(igd_evaluate(config.c_str(), out.c_str(), workers, &s));
    std::cout << "images " << s.images << " rows " << s.rows << " errors "
              << s.errors << "\n";
  }
};

// ---- synth

struct SynthCmd {
  std::string spec, preset, out, id;
  std::uint64_t seed = 1;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("synth", "Render a synthetic RGB-D scene");
    auto* s = c->add_option("--spec", spec, "Scene INI");
    auto* p = c->add_option("--preset", preset,
                            "indoor, obstacle, camouflage or three-plane");
    s->excludes(p);
    c->add_option("--seed", seed, "Preset seed")->capture_default_str();
    c->add_option("--id", id, "File prefix (default: spec stem or preset_seed)");
    c->add_option("-o,--output", out, "Output directory")->required();
    c->callback([this] { run(); });
  }
  void run() {
    Scene scene;
    std::string name = id;
    if (!spec.empty()) {
      scene = make<Scene>(igd_scene_load, spec.c_str());
      if (name.empty()) name = fs::path(spec).stem().string();
    } else if (!preset.empty()) {
      scene = make<Scene>(igd_scene_preset, preset.c_str(), seed);
      if (name.empty()) name = preset + "_" + std::to_string(seed);
    } else {
      usage("synth needs --spec or --preset");
    }
    check(igd_scene_save(scene.get(), out.c_str(), name.c_str()));
    std::cout << (fs::path(out) / name).string() << "\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Image-guided sparse depth sampling and reconstruction"};
  app.set_version_flag("--version", std::string("igdepth ") + igd_version());
  app.require_subcommand(1);
  SegmentCmd segment;
  SampleCmd sample;
  ReconstructCmd reconstruct;
  FitModelCmd fit;
  EdgeStatsCmd edges;
  MtfCmd mtf;
  EvaluateCmd evaluate;
  SynthCmd synth;
  segment.add(app);
  sample.add(app);
  reconstruct.add(app);
  fit.add(app);
  edges.add(app);
  mtf.add(app);
  evaluate.add(app);
  synth.add(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const Failure& f) {
    std::cerr << "igdepth: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "igdepth: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
