#include "igdepth/scene.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "igdepth/io.hpp"
#include "rng.hpp"

namespace igdepth {

namespace pt = boost::property_tree;

namespace {

bool in_image(int x0, int y0, int x1, int y1, int w, int h) {
  return x0 >= 0 && y0 >= 0 && x1 <= w && y1 <= h && x0 < x1 && y0 < y1;
}

std::string rect_text(int x0, int y0, int x1, int y1) {
  std::ostringstream os;
  os << "[" << x0 << "," << y0 << ")-[" << x1 << "," << y1 << ")";
  return os.str();
}

}  // namespace

void SceneSpec::validate() const {
  if (width < 1 || height < 1) throw_usage("scene: width and height must be >= 1");
  if (!(depth_noise >= 0.0) || !(color_noise >= 0.0)) {
    throw_usage("scene: noise must be >= 0");
  }
  if (regions.empty()) throw_usage("scene: at least one region is required");
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(width) * height, 0);
  for (const auto& r : regions) {
    if (!in_image(r.x0, r.y0, r.x1, r.y1, width, height)) {
      throw_usage("scene: region " + rect_text(r.x0, r.y0, r.x1, r.y1) +
                  " is empty or outside the image");
    }
    for (const int x : {r.x0, r.x1 - 1}) {
      for (const int y : {r.y0, r.y1 - 1}) {
        if (!(r.plane(x, y) > 0.0)) {
          throw_usage("scene: region " + rect_text(r.x0, r.y0, r.x1, r.y1) +
                      " has non-positive depth");
        }
      }
    }
    for (int y = r.y0; y < r.y1; ++y) {
      std::fill_n(covered.begin() + static_cast<std::size_t>(y) * width + r.x0,
                  r.x1 - r.x0, 1);
    }
  }
  if (std::find(covered.begin(), covered.end(), 0) != covered.end()) {
    throw_usage("scene: regions do not cover the image");
  }
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto& o = objects[i];
    const std::string where = rect_text(o.x0, o.y0, o.x1, o.y1);
    if (!in_image(o.x0, o.y0, o.x1, o.y1, width, height)) {
      throw_usage("scene: object " + where + " is empty or outside the image");
    }
    if (std::min(o.x1 - o.x0, o.y1 - o.y0) > kMaxObjectWidth) {
      throw_usage("scene: object " + where + " is wider than 6 pixels");
    }
    if (!(o.depth > 0.0)) throw_usage("scene: object depth must be > 0");
    for (std::size_t j = 0; j < i; ++j) {
      const auto& p = objects[j];
      if (o.x0 < p.x1 && p.x0 < o.x1 && o.y0 < p.y1 && p.y0 < o.y1) {
        throw_usage("scene: objects " +
                    rect_text(p.x0, p.y0, p.x1, p.y1) + " and " + where +
                    " overlap");
      }
    }
  }
}

SyntheticScene generate_synthetic_scene(const SceneSpec& spec,
                                        std::uint64_t seed) {
  spec.validate();
  const int w = spec.width, h = spec.height;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<double> depth(n);
  std::vector<Rgb> color(n);
  std::vector<std::uint8_t> mask(n, 0);
  std::vector<std::int32_t> owner(n, 0);
  int tag = 0;
  for (const auto& r : spec.regions) {
    for (int y = r.y0; y < r.y1; ++y) {
      for (int x = r.x0; x < r.x1; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        depth[i] = r.plane(x, y);
        color[i] = r.color;
        owner[i] = tag;
      }
    }
    ++tag;
  }
  for (const auto& o : spec.objects) {
    for (int y = o.y0; y < o.y1; ++y) {
      for (int x = o.x0; x < o.x1; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        depth[i] = o.depth;
        if (!o.camouflage) color[i] = o.color;
        mask[i] = 1;
        owner[i] = tag;
      }
    }
    ++tag;
  }
  // Fully covered regions leave gaps in the tags.
  std::vector<std::int32_t> remap(static_cast<std::size_t>(tag), -1);
  std::int32_t used = 0;
  for (auto& t : owner) {
    if (remap[t] < 0) remap[t] = used++;
    t = remap[t];
  }
  detail::Rng rng(seed);
  RgbImage rgb(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      Rgb c = color[static_cast<std::size_t>(y) * w + x];
      if (spec.color_noise > 0.0) {
        for (auto& ch : c) {
          const double v = ch + spec.color_noise * rng.gaussian();
          ch = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
      }
      rgb.set(x, y, c);
    }
  }
  if (spec.depth_noise > 0.0) {
    for (auto& d : depth) d = std::max(0.0, d + spec.depth_noise * rng.gaussian());
  }
  return {std::move(rgb), DepthMap(w, h, std::move(depth)),
          EvalMask(w, h, std::move(mask)), spec.type,
          SegmentMap(w, h, std::move(owner))};
}

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng_.below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[rng_.below(i)]);
    }
  }

 private:
  detail::Rng rng_;
};

const std::vector<Rgb> kIndoorPalette = {
    {222, 212, 190}, {118, 140, 172}, {160, 108, 78}, {88, 150, 100},
    {204, 170, 118}, {132, 88, 140},  {178, 180, 182}, {210, 140, 140},
    {100, 112, 60}};
const std::vector<Rgb> kBuildingPalette = {
    {128, 118, 110}, {165, 140, 110}, {96, 92, 100}, {180, 160, 150},
    {140, 84, 64}};
const std::vector<Rgb> kObjectPalette = {
    {232, 30, 30}, {250, 222, 20}, {20, 60, 232}, {242, 120, 0},
    {204, 0, 204}, {0, 200, 200},  {250, 250, 250}};

Plane plane_through(double a, double b, double x, double y, double depth) {
  return {a, b, depth - a * x - b * y};
}

// Tries to place `count` objects; gives up on a slot after 100 attempts.
template <class Propose>
void place_objects(SceneSpec& spec, int count, Propose propose) {
  for (int k = 0; k < count; ++k) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      SceneObject o = propose();
      o.x0 = std::max(o.x0, 0);
      o.y0 = std::max(o.y0, 0);
      o.x1 = std::min(o.x1, spec.width);
      o.y1 = std::min(o.y1, spec.height);
      if (o.x0 >= o.x1 || o.y0 >= o.y1) continue;
      bool clear = true;
      for (const auto& p : spec.objects) {
        constexpr int kGap = 4;
        if (o.x0 < p.x1 + kGap && p.x0 < o.x1 + kGap && o.y0 < p.y1 + kGap &&
            p.y0 < o.y1 + kGap) {
          clear = false;
          break;
        }
      }
      if (clear) {
        spec.objects.push_back(o);
        break;
      }
    }
  }
}

}  // namespace

SceneSpec indoor_preset(std::uint64_t seed) {
  Draw g(seed);
  SceneSpec s;
  s.width = 304;
  s.height = 228;
  s.type = SceneType::Indoor;
  auto palette = kIndoorPalette;
  g.shuffle(palette);
  const int w = s.width, h = s.height;

  const double wall_depth = g.uniform(4.0, 5.0);
  s.regions.push_back({0, 0, w, h,
                       plane_through(g.uniform(-0.002, 0.002),
                                     g.uniform(-0.001, 0.001), w / 2.0,
                                     h / 2.0, wall_depth),
                       palette[0]});
  const int floor_y = static_cast<int>(std::lround(h * g.uniform(0.6, 0.7)));
  const int side_x = static_cast<int>(std::lround(w * g.uniform(0.1, 0.18)));
  const bool left = g.integer(0, 1) == 0;
  const double side_near = g.uniform(1.8, 2.4);
  const double side_slope = (wall_depth - side_near) / side_x;
  if (left) {
    s.regions.push_back({0, 0, side_x, floor_y,
                         plane_through(side_slope, 0.0, 0.0, 0.0, side_near),
                         palette[1]});
  } else {
    s.regions.push_back({w - side_x, 0, w, floor_y,
                         plane_through(-side_slope, 0.0, w - 1.0, 0.0,
                                       side_near),
                         palette[1]});
  }
  const double floor_near = g.uniform(1.4, 1.8);
  const double floor_far = wall_depth - 0.2;
  s.regions.push_back(
      {0, floor_y, w, h,
       plane_through(g.uniform(-0.001, 0.001),
                     -(floor_far - floor_near) / (h - 1 - floor_y), w / 2.0,
                     floor_y, floor_far),
       palette[2]});
  const int boxes = g.integer(2, 3);
  for (int k = 0; k < boxes; ++k) {
    const int bw = g.integer(40, 80), bh = g.integer(30, 60);
    const int x0 = g.integer(0, w - bw);
    const int y1 = std::min(h, floor_y + g.integer(5, 40));
    const int y0 = std::max(0, y1 - bh);
    s.regions.push_back({x0, y0, x0 + bw, y1,
                         plane_through(g.uniform(-0.003, 0.003), 0.0, x0, y0,
                                       g.uniform(2.4, 3.6)),
                         palette[3 + k]});
  }
  place_objects(s, g.integer(3, 5), [&] {
    SceneObject o;
    const int thick = g.integer(2, 6), length = g.integer(20, 60);
    const bool vertical = g.integer(0, 3) != 0;
    o.x0 = g.integer(0, w - 1);
    o.y0 = g.integer(0, h - 1);
    o.x1 = o.x0 + (vertical ? thick : length);
    o.y1 = o.y0 + (vertical ? length : thick);
    o.depth = g.uniform(1.5, 3.0);
    o.color = kObjectPalette[g.integer(0, static_cast<int>(kObjectPalette.size()) - 1)];
    return o;
  });
  return s;
}

SceneSpec obstacle_preset(std::uint64_t seed) {
  Draw g(seed);
  SceneSpec s;
  s.width = 320;
  s.height = 192;
  s.type = SceneType::Outdoor;
  const int w = s.width, h = s.height;
  constexpr double kSky = 80.0, kHorizon = 60.0, kNear = 4.0;
  const int hy = static_cast<int>(std::lround(h * g.uniform(0.38, 0.45)));
  s.regions.push_back({0, 0, w, h, {0.0, 0.0, kSky}, {150, 190, 235}});
  auto palette = kBuildingPalette;
  g.shuffle(palette);
  const int buildings = g.integer(2, 4);
  for (int k = 0; k < buildings; ++k) {
    const int bw = g.integer(50, 110);
    const int x0 = g.integer(0, w - bw);
    const int y0 = static_cast<int>(std::lround(h * g.uniform(0.05, 0.25)));
    s.regions.push_back({x0, y0, x0 + bw, hy,
                         plane_through(g.uniform(-0.05, 0.05), 0.0, x0, y0,
                                       g.uniform(30.0, 55.0)),
                         palette[k % palette.size()]});
  }
  const double road_slope = -(kHorizon - kNear) / (h - 1 - hy);
  s.regions.push_back({0, hy, w, h,
                       plane_through(0.0, road_slope, 0.0, hy, kHorizon),
                       {92, 92, 98}});
  place_objects(s, g.integer(3, 5), [&] {
    SceneObject o;
    o.depth = g.uniform(8.0, 30.0);
    const int bottom = static_cast<int>(
        std::lround(hy + (kHorizon - o.depth) / -road_slope));
    const int thick = g.integer(3, 6);
    o.x0 = g.integer(0, w - thick);
    o.x1 = o.x0 + thick;
    o.y1 = std::min(h, bottom + 1);
    o.y0 = std::max(0, o.y1 - g.integer(25, 70));
    o.color = kObjectPalette[g.integer(0, static_cast<int>(kObjectPalette.size()) - 1)];
    return o;
  });
  return s;
}

SceneSpec camouflage_preset(std::uint64_t seed) {
  Draw g(seed);
  SceneSpec s;
  s.width = 304;
  s.height = 228;
  s.type = SceneType::Indoor;
  const int w = s.width, h = s.height;
  const Rgb gray{128, 128, 128};
  s.regions.push_back({0, 0, w, h,
                       plane_through(g.uniform(-0.004, 0.004),
                                     g.uniform(-0.004, 0.004), w / 2.0, h / 2.0,
                                     g.uniform(4.0, 5.0)),
                       gray});
  const int boxes = g.integer(1, 2);
  for (int k = 0; k < boxes; ++k) {
    const int bw = g.integer(40, 90), bh = g.integer(40, 90);
    const int x0 = g.integer(0, w - bw), y0 = g.integer(0, h - bh);
    s.regions.push_back({x0, y0, x0 + bw, y0 + bh,
                         {0.0, 0.0, g.uniform(2.5, 3.5)}, gray});
  }
  place_objects(s, g.integer(2, 3), [&] {
    SceneObject o;
    const int thick = g.integer(3, 6), length = g.integer(30, 80);
    o.x0 = g.integer(0, w - thick);
    o.y0 = g.integer(0, h - length);
    o.x1 = o.x0 + thick;
    o.y1 = o.y0 + length;
    o.depth = g.uniform(1.5, 2.5);
    o.camouflage = true;
    return o;
  });
  return s;
}

SceneSpec three_plane_preset(std::uint64_t seed) {
  Draw g(seed);
  SceneSpec s;
  s.width = 160;
  s.height = 120;
  s.type = SceneType::Indoor;
  s.regions.push_back(
      {0, 0, 80, 120, {0.01, 0.0, 2.0 + g.uniform(0.0, 0.5)}, {200, 60, 50}});
  s.regions.push_back(
      {80, 0, 160, 60, {0.0, 0.02, 6.0 + g.uniform(0.0, 0.5)}, {60, 180, 70}});
  s.regions.push_back({80, 60, 160, 120,
                       {-0.01, 0.01, 10.0 + g.uniform(0.0, 0.5)},
                       {60, 70, 200}});
  return s;
}

SceneSpec scene_preset(const std::string& name, std::uint64_t seed) {
  if (name == "indoor") return indoor_preset(seed);
  if (name == "obstacle") return obstacle_preset(seed);
  if (name == "camouflage") return camouflage_preset(seed);
  if (name == "three-plane") return three_plane_preset(seed);
  throw_usage("unknown scene preset '" + name +
              "' (indoor, obstacle, camouflage, three-plane)");
}

namespace {

template <class T, std::size_t N>
std::array<T, N> parse_list(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::array<T, N> out{};
  for (auto& v : out) {
    if (!(in >> v)) throw_data("scene file: '" + key + "' needs " +
                               std::to_string(N) + " numbers");
  }
  std::string rest;
  if (in >> rest) {
    throw_data("scene file: '" + key + "' has extra values");
  }
  return out;
}

Rgb parse_color(const std::string& text, const std::string& key) {
  const auto c = parse_list<int, 3>(text, key);
  Rgb out{};
  for (int i = 0; i < 3; ++i) {
    if (c[i] < 0 || c[i] > 255) throw_data("scene file: color out of range");
    out[i] = static_cast<std::uint8_t>(c[i]);
  }
  return out;
}

SceneType parse_type(const std::string& text) {
  if (text == "indoor") return SceneType::Indoor;
  if (text == "outdoor") return SceneType::Outdoor;
  throw_data("scene file: type must be indoor or outdoor");
}

int section_index(const std::string& name, const std::string& prefix) {
  const std::string digits = name.substr(prefix.size());
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    throw_data("scene file: bad section name [" + name + "]");
  }
  return std::stoi(digits);
}

template <class T>
T get(const pt::ptree& tree, const std::string& key) {
  const auto v = tree.get_optional<T>(pt::ptree::path_type(key, '/'));
  if (!v) throw_data("scene file: missing or malformed '" + key + "'");
  return *v;
}

}  // namespace

SceneFile parse_scene_ini(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw_data(std::string("scene file: ") + e.what());
  }
  const auto scene = tree.get_child_optional("scene");
  if (!scene) throw_data("scene file: missing [scene] section");
  SceneFile out;
  out.seed = scene->get<std::uint64_t>("seed", 0);
  if (const auto preset = scene->get_optional<std::string>("preset")) {
    out.spec = scene_preset(*preset, out.seed);
  } else {
    out.spec.width = get<int>(*scene, "width");
    out.spec.height = get<int>(*scene, "height");
  }
  if (const auto t = scene->get_optional<std::string>("type")) {
    out.spec.type = parse_type(*t);
  }
  out.spec.depth_noise = scene->get<double>("depth_noise", out.spec.depth_noise);
  out.spec.color_noise = scene->get<double>("color_noise", out.spec.color_noise);

  std::map<int, SceneRegion> regions;
  std::map<int, SceneObject> objects;
  for (const auto& [name, section] : tree) {
    if (name == "scene") continue;
    if (name.rfind("region.", 0) == 0) {
      SceneRegion r;
      const auto rect = parse_list<int, 4>(get<std::string>(section, "rect"), "rect");
      r.x0 = rect[0]; r.y0 = rect[1]; r.x1 = rect[2]; r.y1 = rect[3];
      const auto p = parse_list<double, 3>(get<std::string>(section, "plane"), "plane");
      r.plane = {p[0], p[1], p[2]};
      r.color = parse_color(get<std::string>(section, "color"), "color");
      regions[section_index(name, "region.")] = r;
    } else if (name.rfind("object.", 0) == 0) {
      SceneObject o;
      const auto rect = parse_list<int, 4>(get<std::string>(section, "rect"), "rect");
      o.x0 = rect[0]; o.y0 = rect[1]; o.x1 = rect[2]; o.y1 = rect[3];
      o.depth = get<double>(section, "depth");
      o.camouflage = section.get<bool>("camouflage", false);
      if (const auto c = section.get_optional<std::string>("color")) {
        o.color = parse_color(*c, "color");
      } else if (!o.camouflage) {
        throw_data("scene file: object without color");
      }
      objects[section_index(name, "object.")] = o;
    } else {
      throw_data("scene file: unknown section [" + name + "]");
    }
  }
  for (auto& [k, r] : regions) out.spec.regions.push_back(r);
  for (auto& [k, o] : objects) out.spec.objects.push_back(o);
  try {
    out.spec.validate();
  } catch (const Error& e) {
    throw_data(e.what());
  }
  return out;
}

SceneFile load_scene_file(const std::string& path) {
  try {
    return parse_scene_ini(read_text_file(path));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Data) throw;
    throw_data(path + ": " + e.what());
  }
}

std::string scene_to_ini(const SceneSpec& spec, std::uint64_t seed) {
  std::ostringstream os;
  os.precision(17);
  os << "[scene]\nwidth = " << spec.width << "\nheight = " << spec.height
     << "\ntype = " << (spec.type == SceneType::Indoor ? "indoor" : "outdoor")
     << "\ndepth_noise = " << spec.depth_noise
     << "\ncolor_noise = " << spec.color_noise << "\nseed = " << seed << "\n";
  const auto color = [&](Rgb c) {
    os << "color = " << int(c[0]) << " " << int(c[1]) << " " << int(c[2])
       << "\n";
  };
  for (std::size_t i = 0; i < spec.regions.size(); ++i) {
    const auto& r = spec.regions[i];
    os << "\n[region." << i << "]\nrect = " << r.x0 << " " << r.y0 << " "
       << r.x1 << " " << r.y1 << "\nplane = " << r.plane.a << " " << r.plane.b
       << " " << r.plane.c << "\n";
    color(r.color);
  }
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const auto& o = spec.objects[i];
    os << "\n[object." << i << "]\nrect = " << o.x0 << " " << o.y0 << " "
       << o.x1 << " " << o.y1 << "\ndepth = " << o.depth << "\n";
    color(o.color);
    os << "camouflage = " << (o.camouflage ? "true" : "false") << "\n";
  }
  return os.str();
}

}  // namespace igdepth
