#include <gtest/gtest.h>

#include "igdepth/scene.hpp"
#include "util.hpp"

using namespace igdepth;

TEST(Scene, IniRoundTrip) {
  for (const char* name : {"indoor", "obstacle", "camouflage", "three-plane"}) {
    const SceneSpec spec = scene_preset(name, 4);
    const std::string text = scene_to_ini(spec, 4);
    const SceneFile f = parse_scene_ini(text);
    EXPECT_EQ(f.seed, 4u);
    EXPECT_EQ(scene_to_ini(f.spec, f.seed), text) << name;
    const SyntheticScene a = generate_synthetic_scene(spec, 4);
    const SyntheticScene b = generate_synthetic_scene(f.spec, f.seed);
    EXPECT_TRUE(std::equal(a.depth.depth().begin(), a.depth.depth().end(),
                           b.depth.depth().begin()));
    EXPECT_TRUE(std::equal(a.rgb.data().begin(), a.rgb.data().end(), b.rgb.data().begin()));
  }
  EXPECT_EQ(kind_of([] { scene_preset("forest", 1); }), ErrorKind::Usage);
}

TEST(Scene, PresetKeyword) {
  const SceneFile f = parse_scene_ini("[scene]\npreset = obstacle\nseed = 3\n");
  EXPECT_EQ(scene_to_ini(f.spec, 3), scene_to_ini(obstacle_preset(3), 3));
}

TEST(Scene, ValidationErrors) {
  const std::string head = "[scene]\nwidth = 10\nheight = 10\nseed = 1\n";
  // regions leave a gap
  EXPECT_EQ(kind_of([&] {
              parse_scene_ini(head + "[region.0]\nrect = 0 0 10 5\nplane = 0 0 1\ncolor = 1 2 3\n");
            }),
            ErrorKind::Data);
  const std::string full = head + "[region.0]\nrect = 0 0 10 10\nplane = 0 0 1\ncolor = 1 2 3\n";
  EXPECT_NO_THROW(parse_scene_ini(full));
  // object too wide
  EXPECT_EQ(kind_of([&] {
              parse_scene_ini(full + "[object.0]\nrect = 0 0 8 8\ndepth = 1\ncolor = 0 0 0\n");
            }),
            ErrorKind::Data);
  EXPECT_EQ(kind_of([&] { parse_scene_ini(full + "[weird]\nk = 1\n"); }), ErrorKind::Data);
  EXPECT_EQ(kind_of([&] { parse_scene_ini("[region.0]\nrect = 0 0 1 1\n"); }), ErrorKind::Data);
  SceneSpec s;
  s.width = 4;
  s.height = 4;
  s.regions.push_back({0, 0, 4, 4, {0, 0, -1}, {}});
  EXPECT_EQ(kind_of([&] { s.validate(); }), ErrorKind::Usage);
}

TEST(Scene, TruePartitionAndObstacleMask) {
  SceneSpec spec;
  spec.width = 20;
  spec.height = 10;
  spec.regions = {{0, 0, 20, 10, {0, 0, 5}, {10, 10, 10}},
                  {10, 0, 20, 10, {0.1, 0, 3}, {90, 90, 90}},
                  {0, 0, 1, 1, {0, 0, 1}, {0, 0, 0}}};
  spec.objects = {{4, 2, 6, 9, 1.5, {200, 0, 0}, false},
                  {14, 3, 15, 6, 1.0, {}, true}};
  const SyntheticScene s = generate_synthetic_scene(spec, 1);
  EXPECT_EQ(s.obstacles.count(), 2u * 7 + 3u);
  EXPECT_EQ(s.regions.num_segments(), 5);
  EXPECT_EQ(s.depth.at(5, 5), 1.5);
  EXPECT_NEAR(s.depth.at(12, 0), 4.2, 1e-12);
  // camouflaged object keeps the background color
  EXPECT_EQ(s.rgb.at(14, 4), s.rgb.at(16, 4));
  EXPECT_EQ(s.rgb.at(5, 5), (Rgb{200, 0, 0}));
  EXPECT_NE(s.regions.at(5, 5), s.regions.at(3, 5));
  EXPECT_EQ(s.regions.at(0, 5), s.regions.at(9, 9));
}

TEST(Scene, NoiseIsSeeded) {
  SceneSpec spec = three_plane_preset(1);
  spec.depth_noise = 0.05;
  spec.color_noise = 3;
  const auto a = generate_synthetic_scene(spec, 9), b = generate_synthetic_scene(spec, 9);
  const auto c = generate_synthetic_scene(spec, 10);
  EXPECT_TRUE(std::equal(a.depth.depth().begin(), a.depth.depth().end(), b.depth.depth().begin()));
  EXPECT_FALSE(std::equal(a.depth.depth().begin(), a.depth.depth().end(), c.depth.depth().begin()));
}
