#include "igdepth/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace igdepth {

namespace {

constexpr int kGhost = -1;

using i128 = __int128;

i128 det3(const i128 m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

i128 det4(const i128 m[4][4]) {
  i128 total = 0;
  for (int col = 0; col < 4; ++col) {
    i128 minor[3][3];
    for (int r = 1; r < 4; ++r) {
      int cc = 0;
      for (int c = 0; c < 4; ++c) {
        if (c == col) continue;
        minor[r - 1][cc++] = m[r][c];
      }
    }
    const i128 term = m[0][col] * det3(minor);
    total += (col % 2 == 0) ? term : -term;
  }
  return total;
}

int sign(i128 v) { return (v > 0) - (v < 0); }

struct Tri {
  std::array<int, 3> v;
  std::array<int, 3> nbr;  // nbr[i] is across the edge opposite v[i]
  bool alive = true;
};

class Builder {
 public:
  explicit Builder(std::span<const Pixel> pts) : pts_(pts) {}

  std::vector<std::array<int, 3>> run() {
    const int n = static_cast<int>(pts_.size());
    int i0 = 0, i1 = 1, i2 = -1;
    for (int k = 2; k < n; ++k) {
      if (orient2d(pts_[i0], pts_[i1], pts_[k]) != 0) {
        i2 = k;
        break;
      }
    }
    if (i2 < 0) throw_data("delaunay: all sample points are collinear");
    if (orient2d(pts_[i0], pts_[i1], pts_[i2]) < 0) std::swap(i0, i1);
    seed_triangle(i0, i1, i2);
    for (int k = 0; k < n; ++k) {
      if (k == i0 || k == i1 || k == i2) continue;
      insert(k);
    }
    std::vector<std::array<int, 3>> out;
    for (const Tri& t : tris_) {
      if (t.alive && !is_ghost(t)) out.push_back(t.v);
    }
    return out;
  }

 private:
  static bool is_ghost(const Tri& t) {
    return t.v[0] == kGhost || t.v[1] == kGhost || t.v[2] == kGhost;
  }

  int add(int a, int b, int c) {
    Tri& t = tris_.emplace_back();
    t.v = {a, b, c};
    t.nbr = {-1, -1, -1};
    return static_cast<int>(tris_.size()) - 1;
  }

  // Connects triangles through matching reversed directed edges.
  void link(const std::vector<int>& ids) {
    std::unordered_map<std::int64_t, std::pair<int, int>> edges;
    auto key = [](int u, int v) {
      return (static_cast<std::int64_t>(u + 1) << 32) |
             static_cast<std::uint32_t>(v + 1);
    };
    for (const int t : ids) {
      for (int i = 0; i < 3; ++i) {
        const int u = tris_[t].v[(i + 1) % 3], v = tris_[t].v[(i + 2) % 3];
        edges[key(u, v)] = {t, i};
      }
    }
    for (const int t : ids) {
      for (int i = 0; i < 3; ++i) {
        const int u = tris_[t].v[(i + 1) % 3], v = tris_[t].v[(i + 2) % 3];
        const auto it = edges.find(key(v, u));
        if (it != edges.end()) tris_[t].nbr[i] = it->second.first;
      }
    }
  }

  void seed_triangle(int a, int b, int c) {
    std::vector<int> ids = {add(a, b, c), add(b, a, kGhost), add(c, b, kGhost),
                            add(a, c, kGhost)};
    link(ids);
    last_ = ids[0];
  }

  // Perturbed incircle sign for counter-clockwise real triangle t and point
  // index p. Never zero.
  int in_circle(const Tri& t, int p) const {
    const int idx[4] = {t.v[0], t.v[1], t.v[2], p};
    i128 m[4][4];
    for (int r = 0; r < 4; ++r) {
      const Pixel q = pts_[idx[r]];
      m[r][0] = q.x;
      m[r][1] = q.y;
      m[r][2] = static_cast<i128>(q.x) * q.x + static_cast<i128>(q.y) * q.y;
      m[r][3] = 1;
    }
    const int s = sign(det4(m));
    if (s != 0) return s;
    // Lifting point idx[r] by eps^(idx[r]+1): the sign is decided by the
    // z-cofactor of the lowest index with a non-zero cofactor.
    int order[4] = {0, 1, 2, 3};
    std::sort(order, order + 4,
              [&](int x, int y) { return idx[x] < idx[y]; });
    for (const int r : order) {
      i128 mz[4][4];
      for (int rr = 0; rr < 4; ++rr) {
        for (int cc = 0; cc < 4; ++cc) mz[rr][cc] = m[rr][cc];
        mz[rr][2] = (rr == r) ? 1 : 0;
      }
      const int sz = sign(det4(mz));
      if (sz != 0) return sz;
    }
    throw_internal("delaunay: degenerate incircle under perturbation");
  }

  bool in_conflict(const Tri& t, int p) const {
    if (!is_ghost(t)) return in_circle(t, p) > 0;
    // Rotate so that the ghost vertex is last: real edge a -> b with the
    // exterior on its left.
    int g = 0;
    while (t.v[g] != kGhost) ++g;
    const Pixel a = pts_[t.v[(g + 1) % 3]];
    const Pixel b = pts_[t.v[(g + 2) % 3]];
    const Pixel q = pts_[p];
    const std::int64_t o = orient2d(a, b, q);
    if (o != 0) return o > 0;
    // Collinear with the hull edge: only the open segment conflicts.
    const std::int64_t dot =
        static_cast<std::int64_t>(q.x - a.x) * (b.x - a.x) +
        static_cast<std::int64_t>(q.y - a.y) * (b.y - a.y);
    const std::int64_t len =
        static_cast<std::int64_t>(b.x - a.x) * (b.x - a.x) +
        static_cast<std::int64_t>(b.y - a.y) * (b.y - a.y);
    return dot > 0 && dot < len;
  }

  int locate(int p) {
    int t = last_;
    if (!tris_[t].alive) {
      t = static_cast<int>(tris_.size()) - 1;
      while (!tris_[t].alive) --t;
    }
    const Pixel q = pts_[p];
    const std::size_t limit = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < limit; ++step) {
      const Tri& tri = tris_[t];
      if (is_ghost(tri)) {
        if (in_conflict(tri, p)) return t;
        // Step back inside through the real edge.
        int g = 0;
        while (tri.v[g] != kGhost) ++g;
        t = tri.nbr[g];
        continue;
      }
      int next = -1;
      for (int k = 0; k < 3; ++k) {
        const int i = static_cast<int>((k + step) % 3);
        const Pixel a = pts_[tri.v[(i + 1) % 3]];
        const Pixel b = pts_[tri.v[(i + 2) % 3]];
        if (orient2d(a, b, q) < 0) {
          next = tri.nbr[i];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    throw_internal("delaunay: point location did not terminate");
  }

  void insert(int p) {
    const int start = locate(p);
    std::vector<int> cavity = {start};
    std::unordered_set<int> in_cavity = {start};
    for (std::size_t k = 0; k < cavity.size(); ++k) {
      const Tri& t = tris_[cavity[k]];
      for (const int nb : t.nbr) {
        if (in_cavity.count(nb)) continue;
        if (in_conflict(tris_[nb], p)) {
          in_cavity.insert(nb);
          cavity.push_back(nb);
        }
      }
    }

    struct Boundary {
      int u, v, outside, dead;
    };
    std::vector<Boundary> boundary;
    for (const int id : cavity) {
      const Tri& t = tris_[id];
      for (int i = 0; i < 3; ++i) {
        if (!in_cavity.count(t.nbr[i])) {
          boundary.push_back(
              {t.v[(i + 1) % 3], t.v[(i + 2) % 3], t.nbr[i], id});
        }
      }
    }
    for (const int id : cavity) tris_[id].alive = false;

    std::unordered_map<int, int> by_start, by_end;
    std::vector<int> created;
    created.reserve(boundary.size());
    for (const Boundary& e : boundary) {
      const int id = add(e.u, e.v, p);
      created.push_back(id);
      by_start[e.u] = id;
      by_end[e.v] = id;
      tris_[id].nbr[2] = e.outside;
      for (int& back : tris_[e.outside].nbr) {
        if (back == e.dead) back = id;
      }
    }
    for (const int id : created) {
      Tri& t = tris_[id];
      t.nbr[0] = by_start.at(t.v[1]);  // edge (v, p)
      t.nbr[1] = by_end.at(t.v[0]);    // edge (p, u)
      if (!is_ghost(t)) last_ = id;
    }
  }

  std::span<const Pixel> pts_;
  std::vector<Tri> tris_;
  int last_ = 0;
};

}  // namespace

std::int64_t orient2d(Pixel a, Pixel b, Pixel c) {
  return static_cast<std::int64_t>(b.x - a.x) * (c.y - a.y) -
         static_cast<std::int64_t>(b.y - a.y) * (c.x - a.x);
}

__int128 incircle(Pixel a, Pixel b, Pixel c, Pixel d) {
  i128 m[4][4];
  const Pixel p[4] = {a, b, c, d};
  for (int r = 0; r < 4; ++r) {
    m[r][0] = p[r].x;
    m[r][1] = p[r].y;
    m[r][2] = static_cast<i128>(p[r].x) * p[r].x +
              static_cast<i128>(p[r].y) * p[r].y;
    m[r][3] = 1;
  }
  return det4(m);
}

DelaunayTriangulation::DelaunayTriangulation(std::span<const Pixel> points)
    : points_(points.begin(), points.end()) {
  if (points_.size() < 3) throw_data("delaunay: need at least 3 points");
  std::vector<Pixel> sorted = points_;
  std::sort(sorted.begin(), sorted.end(), [](Pixel a, Pixel b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw_data("delaunay: duplicate points");
  }
  triangles_ = Builder(points_).run();
}

std::optional<int> DelaunayTriangulation::locate(double x, double y) const {
  auto orient = [](double ax, double ay, double bx, double by, double cx,
                   double cy) {
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  };
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const Pixel a = points_[triangles_[t][0]];
    const Pixel b = points_[triangles_[t][1]];
    const Pixel c = points_[triangles_[t][2]];
    if (orient(b.x, b.y, c.x, c.y, x, y) >= 0 &&
        orient(c.x, c.y, a.x, a.y, x, y) >= 0 &&
        orient(a.x, a.y, b.x, b.y, x, y) >= 0) {
      return static_cast<int>(t);
    }
  }
  return std::nullopt;
}

std::optional<double> DelaunayTriangulation::interpolate(
    std::span<const double> values, double x, double y) const {
  const auto t = locate(x, y);
  if (!t) return std::nullopt;
  const auto& tri = triangles_[*t];
  const Pixel a = points_[tri[0]], b = points_[tri[1]], c = points_[tri[2]];
  const double area = static_cast<double>(orient2d(a, b, c));
  const double wa = ((b.x - x) * (c.y - y) - (b.y - y) * (c.x - x)) / area;
  const double wb = ((c.x - x) * (a.y - y) - (c.y - y) * (a.x - x)) / area;
  const double wc = 1.0 - wa - wb;
  return wa * values[tri[0]] + wb * values[tri[1]] + wc * values[tri[2]];
}

}  // namespace igdepth
