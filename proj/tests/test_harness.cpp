#include <gtest/gtest.h>

#include <filesystem>

#include "igdepth/harness.hpp"
#include "igdepth/io.hpp"
#include "igdepth/scene.hpp"
#include "util.hpp"

using namespace igdepth;
namespace fs = std::filesystem;

namespace {

const char* kTwoSamplers =
    "[dataset]\npresets = three-plane:1\n"
    "[experiment]\nbudgets = 30\nsamplers = com random\nreconstructors = ours\n"
    "workers = 1\n";

}  // namespace

TEST(Harness, OneImageTwoSamplers) {
  const EvalReport r = run_matrix(parse_config(kTwoSamplers, ""));
  ASSERT_EQ(r.rows.size(), 2u);
  ASSERT_EQ(r.aggregates.size(), 2u);
  EXPECT_EQ(r.images, 1u);
  EXPECT_EQ(r.rows[0].sampler, "com");
  EXPECT_EQ(r.rows[1].sampler, "random");
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(r.aggregates[i].rmse, r.rows[i].rmse);
    EXPECT_EQ(r.aggregates[i].images, 1u);
  }
  EXPECT_EQ(r.rows[1].samples, 30u);
  EXPECT_DOUBLE_EQ(r.rows[1].density, 30.0 / (160 * 120));
  const std::string csv = report_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "id,sampler,reconstructor,n,samples,density,rmse,rel,mask_rmse,mask_rel");
}

TEST(Harness, AggregateIsMeanOverImages) {
  const EvalReport r = run_matrix(parse_config(
      "[dataset]\npresets = indoor:1-2\n[experiment]\nbudgets = 40\n"
      "samplers = random\nreconstructors = bilinear\n",
      ""));
  ASSERT_EQ(r.rows.size(), 2u);
  ASSERT_EQ(r.aggregates.size(), 1u);
  EXPECT_DOUBLE_EQ(r.aggregates[0].rmse, (r.rows[0].rmse + r.rows[1].rmse) / 2);
  EXPECT_DOUBLE_EQ(r.aggregates[0].rel, (r.rows[0].rel + r.rows[1].rel) / 2);
  ASSERT_TRUE(r.aggregates[0].mask_rmse);
  EXPECT_EQ(r.aggregates[0].mask_images, 2u);
}

TEST(Harness, DeterministicAcrossRunsAndWorkers) {
  const std::string text =
      "[dataset]\npresets = obstacle:1-3\n[experiment]\nbudgets = 50\n"
      "samplers = com grid random\nreconstructors = ours zero-order bilinear first-order\n";
  ExperimentConfig c = parse_config(text, "");
  c.workers = 1;
  const EvalReport a = run_matrix(c);
  c.workers = 3;
  const EvalReport b = run_matrix(c);
  EXPECT_EQ(report_csv(a), report_csv(b));
  EXPECT_EQ(report_json(a), report_json(b));
  EXPECT_EQ(aggregates_csv(a), aggregates_csv(b));
  // first-order only pairs with com
  EXPECT_EQ(a.skipped.size(), 2u);
  EXPECT_EQ(a.rows.size(), 3u * 10);
}

TEST(Harness, ConfigHashIgnoresOrderAndComments) {
  const ExperimentConfig a = parse_config(kTwoSamplers, "");
  const ExperimentConfig b = parse_config(
      "# reordered\n[experiment]\nworkers = 1\nreconstructors = ours\n"
      "samplers = com random\nbudgets = 30\n[dataset]\npresets = three-plane:1\n",
      "");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 64u);
  const ExperimentConfig c = parse_config(
      "[dataset]\npresets = three-plane:1\n[experiment]\nbudgets = 31\n"
      "samplers = com random\nreconstructors = ours\nworkers = 1\n",
      "");
  EXPECT_NE(config_hash(a), config_hash(c));
}

TEST(Harness, ConfigErrors) {
  const auto bad = [](const std::string& text) {
    return kind_of([&] { parse_config(text, ""); });
  };
  EXPECT_EQ(bad("[dataset]\npresets = indoor:1\n[experiment]\nsamplers = sobol\n"),
            ErrorKind::Usage);
  EXPECT_EQ(bad("[dataset]\npresets = indoor:1\n[experiment]\ncolour = red\n"),
            ErrorKind::Usage);
  EXPECT_EQ(bad("[dataset]\npresets = indoor:1\n[extras]\na = 1\n"), ErrorKind::Usage);
  EXPECT_EQ(bad("[experiment]\nbudgets = 10\n"), ErrorKind::Usage);
  EXPECT_EQ(bad("[dataset]\npresets = indoor:1\n[experiment]\nbudgets = 0\n"),
            ErrorKind::Usage);
  EXPECT_EQ(bad("[dataset]\npresets = indoor:1\n[bilateral]\nspatial_sigma = 2\n"),
            ErrorKind::Usage);
  EXPECT_EQ(bad("[dataset]\npresets = indoor:5-2\n"), ErrorKind::Usage);
}

TEST(Harness, EmptyDatasetFails) {
  const auto dir = scratch_dir();
  const ExperimentConfig c = parse_config("[dataset]\ndir = " + dir.string() + "\n", "");
  EXPECT_EQ(kind_of([&] { run_matrix(c); }), ErrorKind::Data);
}

TEST(Harness, MismatchedPairBecomesErrorEntry) {
  const auto dir = scratch_dir();
  const SyntheticScene s = generate_synthetic_scene(three_plane_preset(1), 1);
  write_rgb_png((dir / "good_rgb.png").string(), s.rgb);
  write_depth_png((dir / "good_depth.png").string(), s.depth);
  write_labels_png((dir / "good_labels.png").string(), s.regions);
  write_rgb_png((dir / "bad_rgb.png").string(), s.rgb);
  write_depth_png((dir / "bad_depth.png").string(), DepthMap(10, 10, 1.0));
  const ExperimentConfig c = parse_config(
      "[dataset]\ndir = " + dir.string() +
          "\ntype = indoor\n[experiment]\nbudgets = 30\nsamplers = com\n"
          "[analysis]\nplanar_model = true\n",
      "");
  const EvalReport r = run_matrix(c);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].id, "bad");
  EXPECT_EQ(r.rows.size(), 1u);
  ASSERT_EQ(r.analysis.size(), 1u);
  EXPECT_EQ(r.analysis[0].true_regions, 3);
  EXPECT_LT(*r.analysis[0].true_optimal_rmse, 1e-6);
  const auto out = dir / "out";
  write_report(r, c, out.string());
  for (const char* f : {"report.csv", "aggregates.csv", "report.json", "manifest.json",
                        "model_stats.csv", "model_histograms.csv"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  const std::string manifest = read_text_file((out / "manifest.json").string());
  EXPECT_NE(manifest.find(config_hash(c)), std::string::npos);
}

TEST(Harness, OptimalScenarioExactOnTruePartition) {
  const SyntheticScene s = generate_synthetic_scene(indoor_preset(2), 2);
  const EvalMask all = EvalMask::all(s.depth.width(), s.depth.height());
  EXPECT_LT(optimal_scenario_rmse(s.depth, s.regions, all), 1e-6);
}

TEST(Harness, RequiredSamplesBrackets) {
  const SyntheticScene s = generate_synthetic_scene(three_plane_preset(1), 1);
  ImageRecord img{"x", s.rgb, s.depth, std::nullopt, SceneType::Indoor, std::nullopt};
  const MethodParams p{SlicParams{}, std::nullopt, SceneType::Indoor, 1};
  const SweepMethod m{"random", reconstructor_ids::kBilinear};
  EXPECT_EQ(required_samples(img, m, 1e9, false, 8, 1000, p, 100.0), 8u);
  EXPECT_FALSE(required_samples(img, m, 0.0, false, 8, 64, p, 100.0));
  const auto n = required_samples(img, m, 0.5, false, 8, 19200, p, 100.0);
  ASSERT_TRUE(n);
  const double at = rmse(s.depth, run_method(img, "random", "bilinear", *n, p).depth,
                         EvalMask::all(160, 120));
  EXPECT_LE(at, 0.5);
}
