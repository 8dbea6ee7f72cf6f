#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "igdepth/superpixel.hpp"
#include "oracles.hpp"
#include "util.hpp"

using namespace igdepth;

TEST(Lab, ReferenceColors) {
  const auto white = srgb_to_lab({255, 255, 255});
  EXPECT_NEAR(white[0], 100.0, 0.01);
  EXPECT_NEAR(white[1], 0.0, 0.05);
  EXPECT_NEAR(white[2], 0.0, 0.05);
  const auto black = srgb_to_lab({0, 0, 0});
  EXPECT_NEAR(black[0], 0.0, 1e-9);
  // sRGB red under D65
  const auto red = srgb_to_lab({255, 0, 0});
  EXPECT_NEAR(red[0], 53.24, 0.05);
  EXPECT_NEAR(red[1], 80.09, 0.1);
  EXPECT_NEAR(red[2], 67.20, 0.1);
}

TEST(Slic, ParamsValidated) {
  const RgbImage img = oracle::uniform_image(20, 20, 10);
  SlicParams p;
  p.target_segments = 0;
  EXPECT_EQ(kind_of([&] { slic_segment(img, p); }), ErrorKind::Usage);
  p = {};
  p.compactness = 0;
  EXPECT_EQ(kind_of([&] { slic_segment(img, p); }), ErrorKind::Usage);
  p = {};
  p.min_segment_fraction = 1.0;
  EXPECT_EQ(kind_of([&] { slic_segment(img, p); }), ErrorKind::Usage);
}

TEST(Slic, PartitionIsFourConnectedOnNoise) {
  std::mt19937 gen(7);
  std::vector<std::uint8_t> px(64 * 48 * 3);
  for (auto& v : px) v = static_cast<std::uint8_t>(gen() & 0xff);
  const RgbImage img(64, 48, px);
  for (int n : {1, 5, 40, 200}) {
    SlicParams p;
    p.target_segments = n;
    const SegmentMap s = slic_segment(img, p);
    EXPECT_TRUE(is_four_connected(s)) << "n=" << n;
    EXPECT_GE(s.num_segments(), 1);
    std::size_t total = 0;
    for (auto sz : s.segment_sizes()) total += sz;
    EXPECT_EQ(total, img.pixel_count());
  }
}

TEST(Slic, Deterministic) {
  std::mt19937 gen(3);
  std::vector<std::uint8_t> px(50 * 40 * 3);
  for (auto& v : px) v = static_cast<std::uint8_t>(gen() % 256);
  const RgbImage img(50, 40, px);
  SlicParams p;
  p.target_segments = 30;
  const auto a = slic_segment(img, p);
  const auto b = slic_segment(img, p);
  EXPECT_TRUE(std::equal(a.labels().begin(), a.labels().end(), b.labels().begin()));
}

TEST(Slic, UniformImageGivesLattice) {
  const RgbImage img = oracle::uniform_image(120, 90, 128);
  SlicParams p;
  p.target_segments = 48;
  const SegmentMap s = slic_segment(img, p);
  const int rows = lattice_rows(120, 90, 48);
  EXPECT_EQ(rows, 6);
  EXPECT_EQ(s.num_segments(), 48);
  // equal-sized cells
  const auto sizes = s.segment_sizes();
  for (auto sz : sizes) EXPECT_NEAR(static_cast<double>(sz), 120.0 * 90 / 48, 30.0);
}

TEST(Slic, FollowsStrongColorBoundary) {
  RgbImage img(60, 40);
  for (int y = 0; y < 40; ++y)
    for (int x = 0; x < 60; ++x)
      img.set(x, y, x < 23 ? Rgb{200, 30, 30} : Rgb{30, 30, 200});
  SlicParams p;
  p.target_segments = 24;
  const SegmentMap s = slic_segment(img, p);
  std::vector<int> side(s.num_segments(), -1);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 60; ++x) {
      const int l = s.at(x, y), here = x < 23 ? 0 : 1;
      if (side[l] < 0) side[l] = here;
      EXPECT_EQ(side[l], here) << "segment " << l << " straddles the edge";
    }
  }
}

TEST(Slic, TinyImages) {
  const RgbImage one = oracle::uniform_image(1, 1, 0);
  SlicParams p;
  p.target_segments = 5;
  EXPECT_EQ(kind_of([&] { slic_segment(one, p); }), ErrorKind::Usage);
  p.target_segments = 1;
  EXPECT_EQ(slic_segment(one, p).num_segments(), 1);
  p.target_segments = 5;
  const RgbImage strip = oracle::uniform_image(9, 1, 0);
  const auto s = slic_segment(strip, p);
  EXPECT_TRUE(is_four_connected(s));
}
