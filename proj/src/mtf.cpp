#include "igdepth/mtf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rng.hpp"

namespace igdepth {

void ChartParams::validate() const {
  if (sectors < 8 || sectors % 2 != 0) {
    throw_usage("chart: sectors must be even and >= 8");
  }
  if (size < 8 * sectors) {
    std::ostringstream os;
    os << "chart: size must be >= 8 * sectors (" << 8 * sectors << ")";
    throw_usage(os.str());
  }
  if (!(near_m > 0.0 && far_m > near_m)) {
    throw_usage("chart: need 0 < near_m < far_m");
  }
}

namespace {

// Smooth value noise in [-1, 1]: random lattice values every `cell` pixels,
// bilinearly interpolated.
class ValueNoise {
 public:
  ValueNoise(int size, int cell, detail::Rng& rng)
      : cell_(cell), n_(size / cell + 2) {
    values_.resize(static_cast<std::size_t>(n_) * n_);
    for (auto& v : values_) v = 2.0 * rng.uniform() - 1.0;
  }

  double at(int x, int y) const {
    const double fx = static_cast<double>(x) / cell_;
    const double fy = static_cast<double>(y) / cell_;
    const int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
    const double tx = fx - ix, ty = fy - iy;
    const auto v = [&](int i, int j) {
      return values_[static_cast<std::size_t>(j) * n_ + i];
    };
    return (1 - ty) * ((1 - tx) * v(ix, iy) + tx * v(ix + 1, iy)) +
           ty * ((1 - tx) * v(ix, iy + 1) + tx * v(ix + 1, iy + 1));
  }

 private:
  int cell_, n_;
  std::vector<double> values_;
};

std::uint8_t channel(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

StarChart generate_chart(const ChartParams& params) {
  params.validate();
  const int n = params.size;
  StarChart chart;
  chart.sectors = params.sectors;
  chart.center_x = chart.center_y = (n - 1) / 2.0;
  chart.radius = (n - 1) / 2.0;
  chart.near_m = params.near_m;
  chart.far_m = params.far_m;

  detail::Rng rng(params.texture_seed);
  const ValueNoise bg_noise(n, 24, rng), fg_noise(n, 9, rng);
  // Mean luma: background about 158, foreground about 78.
  constexpr double kBg[3] = {150, 160, 170};
  constexpr double kFg[3] = {170, 40, 30};
  constexpr double kAmp = 14.0;

  RgbImage rgb(n, n);
  std::vector<double> depth(static_cast<std::size_t>(n) * n);
  const double wedge = 2.0 * std::numbers::pi / params.sectors;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      double theta = std::atan2(y - chart.center_y, x - chart.center_x);
      if (theta < 0.0) theta += 2.0 * std::numbers::pi;
      const int sector =
          std::min(params.sectors - 1, static_cast<int>(theta / wedge));
      const bool near = sector % 2 == 0;
      depth[static_cast<std::size_t>(y) * n + x] =
          near ? params.near_m : params.far_m;
      const double t = near ? fg_noise.at(x, y) : bg_noise.at(x, y);
      const double* base = near ? kFg : kBg;
      rgb.set(x, y, {channel(base[0] + kAmp * t), channel(base[1] + kAmp * t),
                     channel(base[2] + kAmp * t)});
    }
  }
  chart.rgb = std::move(rgb);
  chart.depth = DepthMap(n, n, std::move(depth));
  return chart;
}

double star_frequency(int sectors, double radius) {
  return sectors / (4.0 * std::numbers::pi * radius);
}

std::vector<double> default_radii(const StarChart& chart) {
  constexpr int kCount = 16;
  const double lo = 0.08 * chart.radius, hi = 0.95 * chart.radius;
  std::vector<double> radii(kCount);
  for (int i = 0; i < kCount; ++i) {
    radii[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (kCount - 1));
  }
  return radii;
}

namespace {

double bilinear(const DepthMap& d, double x, double y) {
  const int x0 = std::clamp(static_cast<int>(std::floor(x)), 0, d.width() - 1);
  const int y0 = std::clamp(static_cast<int>(std::floor(y)), 0, d.height() - 1);
  const int x1 = std::min(x0 + 1, d.width() - 1);
  const int y1 = std::min(y0 + 1, d.height() - 1);
  const double tx = std::clamp(x - x0, 0.0, 1.0);
  const double ty = std::clamp(y - y0, 0.0, 1.0);
  return (1 - ty) * ((1 - tx) * d.at(x0, y0) + tx * d.at(x1, y0)) +
         ty * ((1 - tx) * d.at(x0, y1) + tx * d.at(x1, y1));
}

// Amplitude of the sectors/2 angular harmonic along a circle.
double fundamental(const DepthMap& d, const StarChart& chart, double r) {
  const int k = chart.sectors / 2;
  const int per_sector = std::max(8, static_cast<int>(std::ceil(
                                         4.0 * std::numbers::pi * r /
                                         chart.sectors)));
  const int m = per_sector * chart.sectors;
  double c = 0.0, s = 0.0;
  for (int j = 0; j < m; ++j) {
    const double theta = 2.0 * std::numbers::pi * (j + 0.5) / m;
    const double v = bilinear(d, chart.center_x + r * std::cos(theta),
                              chart.center_y + r * std::sin(theta));
    c += v * std::cos(k * theta);
    s += v * std::sin(k * theta);
  }
  return 2.0 * std::hypot(c, s) / m;
}

}  // namespace

std::vector<MtfPoint> compute_mtf(const StarChart& chart,
                                  const DepthMap& recon,
                                  std::span<const double> radii) {
  if (!recon.same_shape(chart.depth.width(), chart.depth.height())) {
    throw_data("compute_mtf: reconstruction size differs from the chart");
  }
  if (radii.empty()) throw_usage("compute_mtf: no radii");
  for (const double r : radii) {
    if (!(r > 0.0 && r <= chart.radius)) {
      std::ostringstream os;
      os << "compute_mtf: radius " << r << " outside (0, " << chart.radius
         << "]";
      throw_usage(os.str());
    }
  }
  const double ideal =
      (4.0 / std::numbers::pi) * (chart.far_m - chart.near_m) / 2.0;
  std::vector<MtfPoint> curve;
  for (const double r : radii) {
    const double amp = fundamental(recon, chart, r);
    const double ref = fundamental(chart.depth, chart, r);
    curve.push_back(
        {star_frequency(chart.sectors, r), amp / ref, r, amp / ideal});
  }
  std::sort(curve.begin(), curve.end(),
            [](const MtfPoint& a, const MtfPoint& b) {
              return a.frequency < b.frequency;
            });
  const double norm = curve.front().mtf;
  if (norm >= kMtfNoSignal) {
    for (auto& p : curve) p.mtf /= norm;
  }
  return curve;
}

}  // namespace igdepth
