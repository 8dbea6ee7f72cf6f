#include "igdepth/superpixel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace igdepth {

void SlicParams::validate() const {
  if (target_segments < 1) throw_usage("slic: target_segments must be >= 1");
  if (!(compactness > 0.0)) throw_usage("slic: compactness must be > 0");
  if (max_iterations < 1) throw_usage("slic: max_iterations must be >= 1");
  if (!(min_segment_fraction > 0.0 && min_segment_fraction < 1.0)) {
    throw_usage("slic: min_segment_fraction must lie in (0, 1)");
  }
}

namespace {

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double eps = 216.0 / 24389.0;
  constexpr double kappa = 24389.0 / 27.0;
  return t > eps ? std::cbrt(t) : (kappa * t + 16.0) / 116.0;
}

struct LabImage {
  std::vector<double> l, a, b;
};

LabImage to_lab(const RgbImage& image) {
  std::array<double, 256> lin{};
  for (int i = 0; i < 256; ++i) lin[i] = srgb_to_linear(i / 255.0);
  LabImage lab;
  const std::size_t n = image.pixel_count();
  lab.l.resize(n);
  lab.a.resize(n);
  lab.b.resize(n);
  const auto px = image.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = lin[px[3 * i]];
    const double g = lin[px[3 * i + 1]];
    const double b = lin[px[3 * i + 2]];
    const double x = (0.4124564 * r + 0.3575761 * g + 0.1804375 * b) / 0.95047;
    const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    const double z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) / 1.08883;
    const double fx = lab_f(x), fy = lab_f(y), fz = lab_f(z);
    lab.l[i] = 116.0 * fy - 16.0;
    lab.a[i] = 500.0 * (fx - fy);
    lab.b[i] = 200.0 * (fy - fz);
  }
  return lab;
}

struct Center {
  double l, a, b, x, y;
};

// Squared color gradient used to nudge initial centers off edges.
double gradient2(const LabImage& lab, int w, int h, int x, int y) {
  auto at = [&](const std::vector<double>& c, int xx, int yy) {
    xx = std::clamp(xx, 0, w - 1);
    yy = std::clamp(yy, 0, h - 1);
    return c[static_cast<std::size_t>(yy) * w + xx];
  };
  double g = 0.0;
  for (const auto* c : {&lab.l, &lab.a, &lab.b}) {
    const double dx = at(*c, x + 1, y) - at(*c, x - 1, y);
    const double dy = at(*c, x, y + 1) - at(*c, x, y - 1);
    g += dx * dx + dy * dy;
  }
  return g;
}

// Union-find over connected pieces, used by the connectivity pass.
struct Pieces {
  std::vector<int> parent;
  std::vector<std::vector<std::size_t>> pixels;

  int find(int i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }
};

std::vector<std::int32_t> enforce_connectivity(
    const std::vector<std::int32_t>& cluster, int w, int h,
    std::size_t min_size) {
  const std::size_t n = cluster.size();
  std::vector<int> piece(n, -1);
  Pieces pieces;
  std::vector<std::uint8_t> orphan;

  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < n; ++start) {
    if (piece[start] >= 0) continue;
    const int id = static_cast<int>(pieces.pixels.size());
    pieces.parent.push_back(id);
    pieces.pixels.emplace_back();
    orphan.push_back(cluster[start] < 0 ? 1 : 0);
    auto& members = pieces.pixels.back();
    piece[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      members.push_back(i);
      const int x = static_cast<int>(i % w);
      const int y = static_cast<int>(i / w);
      const std::size_t nb[4] = {i - 1, i + 1, i - w, i + w};
      const bool ok[4] = {x > 0, x + 1 < w, y > 0, y + 1 < h};
      for (int k = 0; k < 4; ++k) {
        if (ok[k] && piece[nb[k]] < 0 && cluster[nb[k]] == cluster[i]) {
          piece[nb[k]] = id;
          stack.push_back(nb[k]);
        }
      }
    }
  }

  auto is_small = [&](int id) {
    return orphan[id] || pieces.pixels[id].size() < min_size;
  };

  using Entry = std::pair<std::size_t, int>;  // (size, id), smallest first
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (int id = 0; id < static_cast<int>(pieces.pixels.size()); ++id) {
    if (is_small(id)) queue.emplace(pieces.pixels[id].size(), id);
  }

  std::vector<std::size_t> shared;
  std::vector<int> touched;
  shared.resize(pieces.pixels.size(), 0);
  while (!queue.empty()) {
    const auto [size, id] = queue.top();
    queue.pop();
    if (pieces.find(id) != id || pieces.pixels[id].size() != size ||
        !is_small(id)) {
      continue;
    }
    // Dominant neighbor: longest shared 4-boundary, lower id on ties.
    touched.clear();
    for (const std::size_t i : pieces.pixels[id]) {
      const int x = static_cast<int>(i % w);
      const int y = static_cast<int>(i / w);
      const std::size_t nb[4] = {i - 1, i + 1, i - w, i + w};
      const bool ok[4] = {x > 0, x + 1 < w, y > 0, y + 1 < h};
      for (int k = 0; k < 4; ++k) {
        if (!ok[k]) continue;
        const int other = pieces.find(piece[nb[k]]);
        if (other == id) continue;
        if (shared[other]++ == 0) touched.push_back(other);
      }
    }
    if (touched.empty()) continue;  // the whole image is this piece
    int best = -1;
    for (const int other : touched) {
      if (best < 0 || shared[other] > shared[best] ||
          (shared[other] == shared[best] && other < best)) {
        best = other;
      }
    }
    for (const int other : touched) shared[other] = 0;
    // Orphans never win: prefer a real neighbor if one exists.
    if (orphan[best]) {
      for (const int other : touched) {
        if (!orphan[other]) {
          best = other;
          break;
        }
      }
    }
    const int keep = best;
    pieces.parent[id] = keep;
    auto& dst = pieces.pixels[keep];
    dst.insert(dst.end(), pieces.pixels[id].begin(), pieces.pixels[id].end());
    pieces.pixels[id].clear();
    pieces.pixels[id].shrink_to_fit();
    orphan[keep] = orphan[keep] && orphan[id];
    if (is_small(keep)) queue.emplace(dst.size(), keep);
  }

  // Relabel roots in raster order of their first pixel.
  std::vector<std::int32_t> out(n, -1);
  std::vector<std::int32_t> remap(pieces.pixels.size(), -1);
  std::int32_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int root = pieces.find(piece[i]);
    if (remap[root] < 0) remap[root] = next++;
    out[i] = remap[root];
  }
  return out;
}

}  // namespace

std::array<double, 3> srgb_to_lab(Rgb c) {
  RgbImage one(1, 1);
  one.set(0, 0, c);
  const auto lab = to_lab(one);
  return {lab.l[0], lab.a[0], lab.b[0]};
}

int lattice_rows(int width, int height, int n) {
  const double r = std::sqrt(static_cast<double>(n) * height / width);
  return std::clamp(static_cast<int>(std::floor(r + 0.5)), 1,
                    std::min(n, height));
}

SegmentMap slic_segment(const RgbImage& image, const SlicParams& params) {
  params.validate();
  const int w = image.width();
  const int h = image.height();
  const std::size_t npix = image.pixel_count();
  const int n = params.target_segments;
  if (static_cast<std::size_t>(n) > npix) {
    std::ostringstream os;
    os << "slic: target_segments " << n << " exceeds pixel count " << npix;
    throw_usage(os.str());
  }

  const LabImage lab = to_lab(image);
  const double step = std::sqrt(static_cast<double>(npix) / n);
  const int rows = lattice_rows(w, h, n);
  const int cols = std::clamp(
      static_cast<int>(std::floor(static_cast<double>(n) / rows + 0.5)), 1, w);
  const double cell_w = static_cast<double>(w) / cols;
  const double cell_h = static_cast<double>(h) / rows;

  std::vector<Center> centers;
  centers.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      int x = std::min(w - 1, static_cast<int>((c + 0.5) * cell_w));
      int y = std::min(h - 1, static_cast<int>((r + 0.5) * cell_h));
      if (step >= 4.0) {
        double best = gradient2(lab, w, h, x, y);
        int bx = x, by = y;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int xx = x + dx, yy = y + dy;
            if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
            const double g = gradient2(lab, w, h, xx, yy);
            if (g < best) {
              best = g;
              bx = xx;
              by = yy;
            }
          }
        }
        x = bx;
        y = by;
      }
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      centers.push_back({lab.l[i], lab.a[i], lab.b[i], static_cast<double>(x),
                         static_cast<double>(y)});
    }
  }

  const int half =
      static_cast<int>(std::ceil(std::max({cell_w, cell_h, 1.0})));
  const double spatial_weight =
      (params.compactness * params.compactness) / (step * step);
  std::vector<std::int32_t> label(npix, -1);
  std::vector<double> dist(npix);
  std::vector<std::array<double, 6>> sums(centers.size());

  for (int iter = 0; iter < params.max_iterations; ++iter) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    bool changed = false;
    std::vector<std::int32_t> previous = label;
    std::fill(label.begin(), label.end(), -1);
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const Center& ck = centers[k];
      const int cx = static_cast<int>(std::lround(ck.x));
      const int cy = static_cast<int>(std::lround(ck.y));
      const int x0 = std::max(0, cx - half), x1 = std::min(w - 1, cx + half);
      const int y0 = std::max(0, cy - half), y1 = std::min(h - 1, cy + half);
      for (int y = y0; y <= y1; ++y) {
        const double dyy = y - ck.y;
        for (int x = x0; x <= x1; ++x) {
          const std::size_t i = static_cast<std::size_t>(y) * w + x;
          const double dl = lab.l[i] - ck.l;
          const double da = lab.a[i] - ck.a;
          const double db = lab.b[i] - ck.b;
          const double dxx = x - ck.x;
          const double d = dl * dl + da * da + db * db +
                           (dxx * dxx + dyy * dyy) * spatial_weight;
          // Strict comparison: the lower cluster id keeps exact ties.
          if (d < dist[i]) {
            dist[i] = d;
            label[i] = static_cast<std::int32_t>(k);
          }
        }
      }
    }
    for (std::size_t i = 0; i < npix; ++i) {
      if (label[i] != previous[i]) {
        changed = true;
        break;
      }
    }
    for (auto& s : sums) s.fill(0.0);
    for (std::size_t i = 0; i < npix; ++i) {
      if (label[i] < 0) continue;
      auto& s = sums[label[i]];
      s[0] += lab.l[i];
      s[1] += lab.a[i];
      s[2] += lab.b[i];
      s[3] += static_cast<double>(i % w);
      s[4] += static_cast<double>(i / w);
      s[5] += 1.0;
    }
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const auto& s = sums[k];
      if (s[5] == 0.0) continue;
      centers[k] = {s[0] / s[5], s[1] / s[5], s[2] / s[5], s[3] / s[5],
                    s[4] / s[5]};
    }
    if (!changed) break;
  }

  const double min_area = params.min_segment_fraction *
                          static_cast<double>(npix) / static_cast<double>(n);
  const auto min_size = static_cast<std::size_t>(std::ceil(min_area));
  return {w, h, enforce_connectivity(label, w, h, min_size)};
}

}  // namespace igdepth
