// Independent reference implementations used by the tests. Deliberately
// naive: no shared code with the library beyond the data types.
#ifndef IGDEPTH_TESTS_ORACLES_HPP
#define IGDEPTH_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "igdepth/core.hpp"
#include "igdepth/planar_model.hpp"
#include "igdepth/reconstruct.hpp"

namespace oracle {

// Direct double loop over the clipped square window.
inline std::vector<double> bilateral(const std::vector<double>& img, int w,
                                     int h, double ss, double sr, int r) {
  std::vector<double> out(img.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double vp = img[y * w + x];
      double num = 0.0, den = 0.0;
      for (int qy = std::max(0, y - r); qy <= std::min(h - 1, y + r); ++qy) {
        for (int qx = std::max(0, x - r); qx <= std::min(w - 1, x + r); ++qx) {
          const double vq = img[qy * w + qx];
          const double d2 = (qx - x) * (qx - x) + (qy - y) * (qy - y);
          const double wt = std::exp(-d2 / (2 * ss * ss)) *
                            std::exp(-(vq - vp) * (vq - vp) / (2 * sr * sr));
          num += wt * vq;
          den += wt;
        }
      }
      out[y * w + x] = num / den;
    }
  }
  return out;
}

// Least squares via the 3x3 normal equations, solved by Cramer's rule in
// raw (uncentered) coordinates.
inline std::array<double, 3> plane_normal_equations(
    const std::vector<igdepth::PlanePoint>& pts) {
  double sxx = 0, sxy = 0, sx = 0, syy = 0, sy = 0, n = 0;
  double sxd = 0, syd = 0, sd = 0;
  for (const auto& p : pts) {
    sxx += p.x * p.x;
    sxy += p.x * p.y;
    sx += p.x;
    syy += p.y * p.y;
    sy += p.y;
    n += 1;
    sxd += p.x * p.depth;
    syd += p.y * p.depth;
    sd += p.depth;
  }
  const auto det3 = [](double a, double b, double c, double d, double e,
                       double f, double g, double h, double i) {
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
  };
  const double D = det3(sxx, sxy, sx, sxy, syy, sy, sx, sy, n);
  return {det3(sxd, sxy, sx, syd, syy, sy, sd, sy, n) / D,
          det3(sxx, sxd, sx, sxy, syd, sy, sx, sd, n) / D,
          det3(sxx, sxy, sxd, sxy, syy, syd, sx, sy, sd) / D};
}

// Separable Gaussian blur with clamped borders.
inline igdepth::DepthMap gaussian_blur(const igdepth::DepthMap& d,
                                       double sigma) {
  const int w = d.width(), h = d.height();
  const int r = static_cast<int>(std::ceil(4 * sigma));
  std::vector<double> k(2 * r + 1);
  double sum = 0;
  for (int i = -r; i <= r; ++i) sum += k[i + r] = std::exp(-i * i / (2 * sigma * sigma));
  for (auto& v : k) v /= sum;
  std::vector<double> a(d.pixel_count()), b(d.pixel_count());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * d.at(std::clamp(x + i, 0, w - 1), y);
      a[y * w + x] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * a[std::clamp(y + i, 0, h - 1) * w + x];
      b[y * w + x] = acc;
    }
  }
  return {w, h, std::move(b)};
}

// Nearest sample by exhaustive search, lower index on ties.
inline std::vector<int> nearest_labels(const igdepth::SampleSet& s) {
  const int w = s.width(), h = s.height();
  std::vector<int> out(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      long best = -1;
      int arg = 0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& e = s.entries()[i];
        const long d2 = long(e.x - x) * (e.x - x) + long(e.y - y) * (e.y - y);
        if (best < 0 || d2 < best) {
          best = d2;
          arg = static_cast<int>(i);
        }
      }
      out[y * w + x] = arg;
    }
  }
  return out;
}

inline igdepth::RgbImage uniform_image(int w, int h, std::uint8_t v) {
  return {w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h * 3, v)};
}

}  // namespace oracle

#endif  // IGDEPTH_TESTS_ORACLES_HPP
