#include "igdepth/planar_model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <sstream>

#include "rng.hpp"

namespace igdepth {

Plane fit_plane(std::span<const PlanePoint> points) {
  if (points.size() < 3) throw_data("fit_plane: need at least 3 points");
  const auto n = static_cast<Eigen::Index>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);

  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = points[static_cast<std::size_t>(i)];
    design(i, 0) = p.x - mx;
    design(i, 1) = p.y - my;
    design(i, 2) = 1.0;
    rhs(i) = p.depth;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) throw_data("fit_plane: sample positions are collinear");
  const Eigen::Vector3d sol = qr.solve(rhs);
  return {sol(0), sol(1), sol(2) - sol(0) * mx - sol(1) * my};
}

void FitModelParams::validate() const {
  if (!(inlier_tol > 0.0)) throw_usage("fit_model: inlier_tol must be > 0");
  if (relative_tol && !(depth_ref > 0.0)) {
    throw_usage("fit_model: depth_ref must be > 0");
  }
  if (!(min_region_fraction > 0.0 && min_region_fraction < 1.0) &&
      min_region_px == 0) {
    throw_usage("fit_model: min_region_fraction must lie in (0, 1)");
  }
  if (!(delta_target >= 0.0 && delta_target < 1.0)) {
    throw_usage("fit_model: delta_target must lie in [0, 1)");
  }
  if (max_regions < 1 || hypotheses < 1 || max_failures < 1) {
    throw_usage("fit_model: counts must be >= 1");
  }
}

double FitModelParams::tolerance_at(double depth) const {
  if (!relative_tol) return inlier_tol;
  return inlier_tol * std::max(1.0, depth / depth_ref);
}

DepthMap PlanarModel::render() const {
  const int w = segments.width();
  std::vector<double> out(segments.pixel_count());
  const auto labels = segments.labels();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::max(0.0, planes[labels[i]](static_cast<double>(i % w),
                                             static_cast<double>(i / w)));
  }
  return {w, segments.height(), std::move(out)};
}

namespace {

class Extractor {
 public:
  Extractor(const DepthMap& depth, const FitModelParams& params)
      : d_(depth),
        p_(params),
        w_(depth.width()),
        h_(depth.height()),
        region_(depth.pixel_count(), -1),
        rng_(params.seed) {
    const double diag = std::hypot(static_cast<double>(w_), h_);
    half_window_ = std::max(2, static_cast<int>(diag / 16.0));
    min_px_ = p_.min_region_px > 0
                  ? p_.min_region_px
                  : std::max<std::size_t>(
                        3, static_cast<std::size_t>(std::ceil(
                               p_.min_region_fraction * d_.pixel_count())));
    for (std::size_t i = 0; i < d_.pixel_count(); ++i) {
      if (d_.valid(i)) free_.push_back(i);
    }
    if (free_.size() < min_px_) {
      std::ostringstream os;
      os << "fit_model: " << free_.size() << " valid pixels, need at least "
         << min_px_;
      throw_data(os.str());
    }
  }

  PlanarModel run() {
    int failures = 0;
    while (static_cast<int>(planes_.size()) < p_.max_regions) {
      const double delta =
          1.0 - static_cast<double>(assigned_) / d_.pixel_count();
      if (delta <= p_.delta_target || free_.size() < min_px_) break;
      if (extract_one()) {
        failures = 0;
      } else if (++failures >= p_.max_failures) {
        break;
      }
    }
    if (planes_.empty()) trivial_fit();
    return finish();
  }

 private:
  bool inlier(std::size_t i, const Plane& plane) const {
    const double v = d_.at(i);
    return std::abs(v - plane(x_of(i), y_of(i))) <= p_.tolerance_at(v);
  }
  double x_of(std::size_t i) const { return static_cast<double>(i % w_); }
  double y_of(std::size_t i) const { return static_cast<double>(i / w_); }

  std::optional<Plane> fit(const std::vector<std::size_t>& pixels) const {
    std::vector<PlanePoint> pts;
    pts.reserve(pixels.size());
    for (const auto i : pixels) pts.push_back({x_of(i), y_of(i), d_.at(i)});
    try {
      return fit_plane(pts);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Data) throw;
      return std::nullopt;
    }
  }

  // A free pixel near `center`, or nullopt after a bounded number of tries.
  std::optional<std::size_t> free_near(std::size_t center) {
    const int cx = static_cast<int>(center % w_);
    const int cy = static_cast<int>(center / w_);
    for (int attempt = 0; attempt < 32; ++attempt) {
      const int x = cx - half_window_ +
                    static_cast<int>(rng_.below(2 * half_window_ + 1));
      const int y = cy - half_window_ +
                    static_cast<int>(rng_.below(2 * half_window_ + 1));
      if (x < 0 || y < 0 || x >= w_ || y >= h_) continue;
      const std::size_t i = static_cast<std::size_t>(y) * w_ + x;
      if (i != center && d_.valid(i) && region_[i] < 0) return i;
    }
    return std::nullopt;
  }

  std::optional<Plane> best_hypothesis() {
    constexpr std::size_t kScoreSamples = 2000;
    std::vector<std::size_t> probe;
    if (free_.size() <= kScoreSamples) {
      probe = free_;
    } else {
      probe.reserve(kScoreSamples);
      for (std::size_t k = 0; k < kScoreSamples; ++k) {
        probe.push_back(free_[rng_.below(free_.size())]);
      }
    }
    std::optional<Plane> best;
    std::size_t best_score = 0;
    for (int h = 0; h < p_.hypotheses; ++h) {
      const std::size_t a = free_[rng_.below(free_.size())];
      const auto b = free_near(a);
      const auto c = free_near(a);
      if (!b || !c || *b == *c) continue;
      const auto plane = fit({a, *b, *c});
      if (!plane) continue;
      std::size_t score = 0;
      for (const auto i : probe) score += inlier(i, *plane) ? 1 : 0;
      if (score > best_score) {
        best_score = score;
        best = plane;
      }
    }
    return best;
  }

  std::vector<std::size_t> largest_component(
      const std::vector<std::size_t>& inliers) {
    std::vector<std::uint8_t> mask(d_.pixel_count(), 0);
    for (const auto i : inliers) mask[i] = 1;
    std::vector<std::size_t> best, current, stack;
    for (const auto start : inliers) {
      if (mask[start] != 1) continue;
      current.clear();
      mask[start] = 2;
      stack.push_back(start);
      while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        current.push_back(i);
        const int x = static_cast<int>(i % w_), y = static_cast<int>(i / w_);
        const std::size_t nb[4] = {i - 1, i + 1, i - w_, i + w_};
        const bool ok[4] = {x > 0, x + 1 < w_, y > 0, y + 1 < h_};
        for (int k = 0; k < 4; ++k) {
          if (ok[k] && mask[nb[k]] == 1) {
            mask[nb[k]] = 2;
            stack.push_back(nb[k]);
          }
        }
      }
      if (current.size() > best.size()) best = current;
    }
    std::sort(best.begin(), best.end());
    return best;
  }

  bool extract_one() {
    auto plane = best_hypothesis();
    if (!plane) return false;
    std::vector<std::size_t> inliers;
    for (int pass = 0; pass < 3; ++pass) {
      inliers.clear();
      for (const auto i : free_) {
        if (inlier(i, *plane)) inliers.push_back(i);
      }
      if (inliers.size() < 3) return false;
      const auto refined = fit(inliers);
      if (!refined) break;
      plane = refined;
    }
    inliers.clear();
    for (const auto i : free_) {
      if (inlier(i, *plane)) inliers.push_back(i);
    }
    auto component = largest_component(inliers);
    if (component.size() < min_px_) return false;
    const auto final_plane = fit(component);
    if (!final_plane) return false;
    const int id = static_cast<int>(planes_.size());
    planes_.push_back(*final_plane);
    for (const auto i : component) region_[i] = id;
    assigned_ += component.size();
    std::erase_if(free_, [&](std::size_t i) { return region_[i] >= 0; });
    return true;
  }

  // Degenerate input: one plane (or constant) over every valid pixel.
  void trivial_fit() {
    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < d_.pixel_count(); ++i) {
      if (d_.valid(i)) all.push_back(i);
    }
    auto plane = fit(all);
    if (!plane) {
      double mean = 0.0;
      for (const auto i : all) mean += d_.at(i);
      plane = Plane{0.0, 0.0, mean / static_cast<double>(all.size())};
    }
    planes_.push_back(*plane);
    for (const auto i : all) region_[i] = 0;
    assigned_ = all.size();
  }

  PlanarModel finish() {
    const std::size_t n = d_.pixel_count();
    std::vector<std::uint8_t> valid(n, 0);
    std::vector<std::int32_t> labels(region_.begin(), region_.end());
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] >= 0) {
        valid[i] = 1;
        queue.push_back(i);
      }
    }
    // Pixels outside V join the nearest region (BFS) so the labels
    // partition the whole image.
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      const int x = static_cast<int>(i % w_), y = static_cast<int>(i / w_);
      const std::size_t nb[4] = {i - 1, i + 1, i - w_, i + w_};
      const bool ok[4] = {x > 0, x + 1 < w_, y > 0, y + 1 < h_};
      for (int k = 0; k < 4; ++k) {
        if (ok[k] && labels[nb[k]] < 0) {
          labels[nb[k]] = labels[i];
          queue.push_back(nb[k]);
        }
      }
    }
    PlanarModel model{SegmentMap(w_, h_, std::move(labels)), planes_,
                      EvalMask(w_, h_, std::move(valid)),
                      {}};
    model.stats.regions = static_cast<int>(planes_.size());
    model.stats.delta = 1.0 - static_cast<double>(assigned_) / n;
    model.stats.epsilon = rmse_v(d_, model);
    return model;
  }

  const DepthMap& d_;
  const FitModelParams& p_;
  int w_, h_;
  int half_window_ = 2;
  std::size_t min_px_ = 3;
  std::vector<int> region_;
  std::vector<std::size_t> free_;
  std::size_t assigned_ = 0;
  std::vector<Plane> planes_;
  detail::Rng rng_;
};

}  // namespace

PlanarModel fit_model(const DepthMap& depth, const FitModelParams& params) {
  params.validate();
  return Extractor(depth, params).run();
}

double rmse_v(const DepthMap& depth, const PlanarModel& model) {
  if (!depth.same_shape(model.segments.width(), model.segments.height())) {
    throw_data("rmse_v: model and depth sizes differ");
  }
  return rmse(depth, model.render(), model.validity);
}

std::size_t min_samples(const PlanarModel& model) {
  return 3 * static_cast<std::size_t>(model.stats.regions);
}

std::size_t min_samples(double mean_regions) {
  if (!(mean_regions >= 0.0)) throw_usage("min_samples: negative region count");
  return static_cast<std::size_t>(std::floor(3.0 * mean_regions + 0.5));
}

}  // namespace igdepth
