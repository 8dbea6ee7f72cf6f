#ifndef IGDEPTH_SCENE_HPP
#define IGDEPTH_SCENE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "igdepth/core.hpp"
#include "igdepth/planar_model.hpp"
#include "igdepth/reconstruct.hpp"

namespace igdepth {

/// Axis-aligned planar patch over the half-open rectangle [x0, x1) x [y0, y1).
/// Later regions are painted over earlier ones; together they must cover
/// the image.
struct SceneRegion {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  Plane plane;
  Rgb color{};
};

/// Thin fronto-parallel object, 1 to 6 pixels across its narrow side. A
/// camouflaged object keeps the color of whatever lies behind it.
struct SceneObject {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double depth = 1.0;
  Rgb color{};
  bool camouflage = false;
};

inline constexpr int kMaxObjectWidth = 6;

struct SceneSpec {
  int width = 0;
  int height = 0;
  SceneType type = SceneType::Indoor;
  std::vector<SceneRegion> regions;
  std::vector<SceneObject> objects;
  double depth_noise = 0.0;  // Gaussian, meters
  double color_noise = 0.0;  // Gaussian, 8-bit levels

  void validate() const;
};

struct SyntheticScene {
  RgbImage rgb;
  DepthMap depth;
  EvalMask obstacles;  // union of all objects
  SceneType type = SceneType::Indoor;
  SegmentMap regions;  // true partition: visible regions, then objects

};

/// Renders the scene description; noise draws are seeded by `seed`.
SyntheticScene generate_synthetic_scene(const SceneSpec& spec,
                                        std::uint64_t seed);

/// Room-like 304x228 scene: walls, floor, furniture and thin objects.
SceneSpec indoor_preset(std::uint64_t seed);
/// Road-like 320x192 scene: sky, buildings, road and thin obstacles.
SceneSpec obstacle_preset(std::uint64_t seed);
/// One color everywhere; depth structure comes from camouflaged content.
SceneSpec camouflage_preset(std::uint64_t seed);
/// Three planar rectangles with well separated depths.
SceneSpec three_plane_preset(std::uint64_t seed);

/// Preset by name: indoor, obstacle, camouflage, three-plane.
SceneSpec scene_preset(const std::string& name, std::uint64_t seed);

struct SceneFile {
  SceneSpec spec;
  std::uint64_t seed = 0;
};

/// INI scene description. A `[scene]` section carries width, height, type,
/// depth_noise, color_noise, seed and optionally `preset`; otherwise
/// `[region.K]` sections (rect, plane, color) and `[object.K]` sections
/// (rect, depth, color, camouflage) list the content.
SceneFile parse_scene_ini(const std::string& text);
SceneFile load_scene_file(const std::string& path);
std::string scene_to_ini(const SceneSpec& spec, std::uint64_t seed);

}  // namespace igdepth

#endif  // IGDEPTH_SCENE_HPP
