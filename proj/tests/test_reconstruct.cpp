#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "igdepth/delaunay.hpp"
#include "igdepth/reconstruct.hpp"
#include "oracles.hpp"
#include "util.hpp"

using namespace igdepth;

namespace {

SampleSet random_samples(int w, int h, std::size_t n, unsigned seed,
                         const std::function<double(int, int)>& depth) {
  const auto pat = random_pattern(w, h, n, seed);
  std::vector<Sample> e;
  for (const auto& p : pat.coords) e.push_back({p.x, p.y, depth(p.x, p.y)});
  return {w, h, e, "random", n};
}

}  // namespace

TEST(Bilateral, MatchesNaiveOracle) {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 5; ++trial) {
    const int w = 13 + trial, h = 9 + 2 * trial;
    std::vector<double> img(static_cast<std::size_t>(w) * h);
    // piecewise constant runs plus noise rows
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        img[y * w + x] = y % 3 == 0 ? u(gen) : std::floor(x / 4.0) * 0.7;
    const BilateralParams p{1.0 + trial * 0.6, 0.1 + trial * 0.2, 1 + trial};
    const auto got = bilateral_filter(LogDepthMap(w, h, img), p);
    const auto want = oracle::bilateral(img, w, h, p.spatial_sigma, p.range_sigma,
                                        p.window_radius);
    for (std::size_t i = 0; i < want.size(); ++i) {
      EXPECT_NEAR(got.values()[i], want[i], 1e-12) << "trial " << trial;
    }
  }
}

TEST(Bilateral, ShortcutAndBounds) {
  const std::vector<double> img{0.0, 1.0, 5.0, 2.0, 3.0, 4.0};
  const LogDepthMap in(3, 2, img);
  const auto same = bilateral_filter(in, {1.0, 1e-7, 1});
  EXPECT_TRUE(std::equal(img.begin(), img.end(), same.values().begin()));
  const auto out = bilateral_filter(in, {2.0, 10.0, 2});
  for (double v : out.values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 5.0);
  }
  EXPECT_EQ(kind_of([&] { bilateral_filter(in, {0.0, 1.0, 1}); }), ErrorKind::Usage);
}

TEST(Bilateral, BudgetDefaults) {
  const auto p = BilateralParams::for_budget(400, 100, 100, SceneType::Indoor);
  EXPECT_DOUBLE_EQ(p.spatial_sigma, 15.0);
  EXPECT_EQ(p.range_sigma, 0.05);
  EXPECT_EQ(p.window_radius, 30);
  EXPECT_EQ(BilateralParams::for_budget(400, 100, 100, SceneType::Outdoor).range_sigma,
            0.08);
}

TEST(LogDomain, RoundTrip) {
  std::mt19937 gen(2);
  std::uniform_real_distribution<double> u(0.0, 80.0);
  std::vector<double> v(500);
  for (auto& x : v) x = u(gen);
  v[0] = 0.0;
  const DepthMap d(25, 20, v);
  const DepthMap back = exp_transform(log_transform(d));
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_NEAR(back.at(i), v[i], 1e-12 * std::max(1.0, v[i]));
  }
  EXPECT_EQ(kind_of([] { exp_transform(LogDepthMap(1, 1, {-0.5})); }), ErrorKind::Data);
  EXPECT_EQ(kind_of([] { log_transform(DepthMap(1, 1, {1.0}, {0})); }), ErrorKind::Data);
}

TEST(ZeroOrder, FillsSegmentsAndEnforcesOneSample) {
  const SegmentMap seg(4, 2, {0, 0, 1, 1, 0, 0, 1, 1});
  const SampleSet s(4, 2, {{0, 0, 2.0}, {3, 1, 7.0}}, "com", 2);
  const DepthMap d = zero_order_fill(seg, s);
  EXPECT_EQ(d.at(1, 1), 2.0);
  EXPECT_EQ(d.at(2, 0), 7.0);
  const SampleSet two(4, 2, {{0, 0, 2.0}, {1, 0, 3.0}}, "com", 2);
  EXPECT_EQ(kind_of([&] { zero_order_fill(seg, two); }), ErrorKind::Data);
  const SampleSet one(4, 2, {{0, 0, 2.0}}, "com", 1);
  EXPECT_EQ(kind_of([&] { zero_order_fill(seg, one); }), ErrorKind::Data);
  const DepthMap near = zero_order_fill(seg, one, UnsampledSegments::NearestSample);
  EXPECT_EQ(near.at(3, 1), 2.0);
}

TEST(ZeroOrderBilateral, StaysWithinSampleRange) {
  const auto s = random_samples(40, 30, 40, 5, [](int x, int y) { return 1.0 + x * 0.2 + y; });
  const SegmentMap seg = nearest_sample_segments(s);
  const DepthMap d = zero_order_bilateral(seg, s, {3.0, 0.1, 6});
  double lo = 1e9, hi = -1e9;
  for (const auto& e : s.entries()) {
    lo = std::min(lo, e.depth);
    hi = std::max(hi, e.depth);
  }
  for (std::size_t i = 0; i < d.pixel_count(); ++i) {
    EXPECT_GE(d.at(i), lo - 1e-9);
    EXPECT_LE(d.at(i), hi + 1e-9);
  }
}

TEST(NearestSample, MatchesBruteForce) {
  for (unsigned seed = 1; seed <= 4; ++seed) {
    const auto s = random_samples(37, 23, 5 + seed * 7, seed, [](int, int) { return 1.0; });
    const SegmentMap got = nearest_sample_segments(s);
    const auto want = oracle::nearest_labels(s);
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(got.labels()[i], want[i]);
  }
  // ties resolve to the lower index
  const SampleSet tie(3, 1, {{2, 0, 1.0}, {0, 0, 1.0}}, "x", 2);
  EXPECT_EQ(nearest_sample_segments(tie).at(1, 0), 0);
}

TEST(Bilinear, ExactOnLinearDepth) {
  const auto f = [](int x, int y) { return 3.0 + 0.05 * x - 0.02 * y; };
  const auto s = random_samples(50, 40, 60, 3, f);
  const DepthMap d = bilinear_baseline(s, 50, 40);
  const DelaunayTriangulation tri(std::vector<Pixel>([&] {
    std::vector<Pixel> p;
    for (const auto& e : s.entries()) p.push_back({e.x, e.y});
    return p;
  }()));
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 50; ++x) {
      if (tri.locate(x, y)) {
        EXPECT_NEAR(d.at(x, y), f(x, y), 1e-12);
      }
    }
  }
  for (const auto& e : s.entries()) EXPECT_NEAR(d.at(e.x, e.y), e.depth, 1e-12);
  const SampleSet two(5, 5, {{0, 0, 1.0}, {4, 4, 1.0}}, "x", 2);
  EXPECT_EQ(kind_of([&] { bilinear_baseline(two, 5, 5); }), ErrorKind::Data);
}

TEST(Delaunay, EmptyCircumcircle) {
  std::mt19937 gen(8);
  for (int trial = 0; trial < 10; ++trial) {
    std::set<std::pair<int, int>> used;
    std::vector<Pixel> pts;
    // small grid forces many cocircular quadruples
    while (pts.size() < 40) {
      const int x = static_cast<int>(gen() % 12), y = static_cast<int>(gen() % 12);
      if (used.insert({x, y}).second) pts.push_back({x, y});
    }
    const DelaunayTriangulation tri(pts);
    for (const auto& t : tri.triangles()) {
      ASSERT_GT(orient2d(pts[t[0]], pts[t[1]], pts[t[2]]), 0);
      for (const auto& p : pts) {
        EXPECT_LE(incircle(pts[t[0]], pts[t[1]], pts[t[2]], p), 0);
      }
    }
    // triangle areas sum to the hull area, so the triangles tile it
    long area2 = 0;
    for (const auto& t : tri.triangles()) area2 += orient2d(pts[t[0]], pts[t[1]], pts[t[2]]);
    int covered = 0;
    for (int y = 0; y < 12; ++y)
      for (int x = 0; x < 12; ++x) covered += tri.locate(x, y).has_value();
    EXPECT_GT(area2, 0);
    EXPECT_GT(covered, 40);
  }
  const std::vector<Pixel> line{{0, 0}, {1, 1}, {2, 2}};
  EXPECT_EQ(kind_of([&] { DelaunayTriangulation t(line); }), ErrorKind::Data);
}

TEST(FirstOrder, ExactOnPlanesAndClamped) {
  const SegmentMap seg(6, 4, {0, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 1,
                              0, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 1});
  const auto left = [](double x, double y) { return 2.0 + 0.5 * x + 0.25 * y; };
  const auto right = [](double x, double y) { return 9.0 - 2.0 * x + 0.0 * y; };
  std::vector<Sample> e{{0, 0, left(0, 0)}, {2, 0, left(2, 0)}, {1, 3, left(1, 3)},
                        {3, 0, right(3, 0)}, {4, 0, right(4, 0)}, {3, 3, right(3, 3)}};
  FirstOrderStats stats;
  const DepthMap d = first_order_fill(seg, SampleSet(6, 4, e, "com3", 6), &stats);
  EXPECT_EQ(stats.planar_segments, 2u);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 3; ++x) EXPECT_NEAR(d.at(x, y), left(x, y), 1e-12);
    for (int x = 3; x < 6; ++x) EXPECT_NEAR(d.at(x, y), std::max(0.0, right(x, y)), 1e-12);
  }
  EXPECT_EQ(d.at(5, 0), 0.0);  // 9 - 10 clamps
  // two samples in a segment: mean, flagged degenerate
  const DepthMap m = first_order_fill(
      seg, SampleSet(6, 4, {{0, 0, 1.0}, {1, 0, 3.0}, {4, 1, 5.0}}, "x", 3), &stats);
  EXPECT_EQ(stats.degenerate_segments, 2u);
  EXPECT_EQ(m.at(2, 3), 2.0);
}

TEST(Pipeline, ConstantDepthIsExact) {
  std::mt19937 gen(1);
  std::vector<std::uint8_t> px(64 * 48 * 3);
  for (auto& v : px) v = static_cast<std::uint8_t>(gen() % 256);
  const RgbImage img(64, 48, px);
  const DepthMap gt(64, 48, 4.2);
  PipelineParams params;
  const Reconstruction r = reconstruct_ours(img, simulated_sensor(gt), 40, params);
  EXPECT_LE(rmse(gt, r.depth, EvalMask::all(64, 48)), 1e-9);
  EXPECT_LE(r.samples.size(), r.samples.budget());
  const Reconstruction f = first_order_baseline(img, simulated_sensor(gt), 60, {});
  EXPECT_LE(rmse(gt, f.depth, EvalMask::all(64, 48)), 1e-9);
}
