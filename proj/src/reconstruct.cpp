#include "igdepth/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "igdepth/delaunay.hpp"
#include "igdepth/planar_model.hpp"
#include "nearest.hpp"
#include "parallel.hpp"

namespace igdepth {

namespace {

std::vector<Pixel> positions(const SampleSet& samples) {
  std::vector<Pixel> out;
  out.reserve(samples.size());
  for (const auto& s : samples.entries()) out.push_back({s.x, s.y});
  return out;
}

void check_consistent(const SegmentMap& segments, const SampleSet& samples) {
  if (segments.width() != samples.width() ||
      segments.height() != samples.height()) {
    throw_data("segment map and sample set sizes differ");
  }
}

// Index of the sample nearest to each segment's center of mass.
int nearest_to_centroid(const SampleSet& samples, double cx, double cy) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  const auto entries = samples.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double dx = entries[i].x - cx, dy = entries[i].y - cy;
    const double d = dx * dx + dy * dy;
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::vector<std::array<double, 2>> centroids(const SegmentMap& segments) {
  std::vector<std::array<double, 3>> acc(segments.num_segments(), {0, 0, 0});
  const int w = segments.width();
  const auto labels = segments.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& a = acc[labels[i]];
    a[0] += static_cast<double>(i % w);
    a[1] += static_cast<double>(i / w);
    a[2] += 1.0;
  }
  std::vector<std::array<double, 2>> out(acc.size());
  for (std::size_t s = 0; s < acc.size(); ++s) {
    out[s] = {acc[s][0] / acc[s][2], acc[s][1] / acc[s][2]};
  }
  return out;
}

}  // namespace

LogDepthMap::LogDepthMap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width < 1 || height < 1) throw_usage("LogDepthMap: empty image");
  if (values_.size() != static_cast<std::size_t>(width) * height) {
    throw_data("LogDepthMap: buffer does not match width*height");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw_data("LogDepthMap: non-finite value");
  }
}

BilateralParams BilateralParams::for_budget(int width, int height,
                                            std::size_t n, SceneType scene) {
  if (n < 1) throw_usage("bilateral defaults: budget must be >= 1");
  const double pitch =
      std::sqrt(static_cast<double>(width) * height / static_cast<double>(n));
  BilateralParams p;
  p.spatial_sigma = 0.75 * pitch;
  p.range_sigma = scene == SceneType::Indoor ? 0.05 : 0.08;
  p.window_radius = std::max(1, static_cast<int>(std::ceil(2.0 * p.spatial_sigma)));
  return p;
}

void BilateralParams::validate() const {
  if (!(spatial_sigma > 0.0) || !(range_sigma > 0.0) || window_radius < 1) {
    throw_usage("bilateral: sigmas and window radius must be positive");
  }
}

DepthMap zero_order_fill(const SegmentMap& segments, const SampleSet& samples,
                         UnsampledSegments policy) {
  check_consistent(segments, samples);
  const auto entries = samples.entries();
  std::vector<int> owner(segments.num_segments(), -1);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const int s = segments.at(entries[i].x, entries[i].y);
    if (owner[s] >= 0) {
      std::ostringstream os;
      os << "zero_order_fill: segment " << s << " holds more than one sample";
      throw_data(os.str());
    }
    owner[s] = static_cast<int>(i);
  }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end()) {
    if (policy == UnsampledSegments::Error) {
      throw_data("zero_order_fill: a segment has no sample");
    }
    if (entries.empty()) throw_data("zero_order_fill: no samples");
    const auto com = centroids(segments);
    for (std::size_t s = 0; s < owner.size(); ++s) {
      if (owner[s] < 0) owner[s] = nearest_to_centroid(samples, com[s][0], com[s][1]);
    }
  }
  std::vector<double> depth(segments.pixel_count());
  const auto labels = segments.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    depth[i] = entries[owner[labels[i]]].depth;
  }
  return {segments.width(), segments.height(), std::move(depth)};
}

LogDepthMap log_transform(const DepthMap& d) {
  std::vector<double> out(d.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!d.valid(i)) throw_data("log_transform: input has invalid pixels");
    out[i] = std::log1p(d.at(i));
  }
  return {d.width(), d.height(), std::move(out)};
}

DepthMap exp_transform(const LogDepthMap& v) {
  std::vector<double> out(v.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (v.values()[i] < 0.0) {
      throw_data("exp_transform: log-depth below zero maps to negative depth");
    }
    out[i] = std::expm1(v.values()[i]);
  }
  return {v.width(), v.height(), std::move(out)};
}

LogDepthMap bilateral_filter(const LogDepthMap& input,
                             const BilateralParams& params) {
  params.validate();
  if (params.range_sigma <= kRangeSigmaShortcut) return input;
  const int w = input.width();
  const int h = input.height();
  const int r = params.window_radius;
  const auto in = input.values();

  // The spatial kernel is separable. Rows are scanned as runs of equal
  // value, so each run costs one range weight and one difference of the
  // cumulative horizontal kernel.
  const double inv_s = 1.0 / (2.0 * params.spatial_sigma * params.spatial_sigma);
  std::vector<double> gauss(2 * r + 1), cumulative(2 * r + 2, 0.0);
  for (int d = -r; d <= r; ++d) {
    gauss[d + r] = std::exp(-d * d * inv_s);
    cumulative[d + r + 1] = cumulative[d + r] + gauss[d + r];
  }
  const double inv_r = 1.0 / (2.0 * params.range_sigma * params.range_sigma);
  // exp(-745) underflows to zero in double precision anyway.
  constexpr double kNegligible = 745.0;

  struct Run {
    int x0, x1;  // inclusive
    double value;
  };
  std::vector<std::vector<Run>> runs(h);
  std::vector<int> run_of(in.size());
  for (int y = 0; y < h; ++y) {
    const double* row = &in[static_cast<std::size_t>(y) * w];
    for (int x = 0; x < w; ++x) {
      if (x == 0 || row[x] != row[x - 1]) runs[y].push_back({x, x, row[x]});
      runs[y].back().x1 = x;
      run_of[static_cast<std::size_t>(y) * w + x] =
          static_cast<int>(runs[y].size()) - 1;
    }
  }

  std::vector<double> out(in.size());
  detail::parallel_for(h, [&](int row_begin, int row_end) {
    for (int y = row_begin; y < row_end; ++y) {
      const int y0 = std::max(0, y - r), y1 = std::min(h - 1, y + r);
      for (int x = 0; x < w; ++x) {
        const int x0 = std::max(0, x - r), x1 = std::min(w - 1, x + r);
        const double vp = in[static_cast<std::size_t>(y) * w + x];
        double num = 0.0, den = 0.0;
        for (int qy = y0; qy <= y1; ++qy) {
          const double gy = gauss[qy - y + r];
          const auto& row_runs = runs[qy];
          for (std::size_t k = run_of[static_cast<std::size_t>(qy) * w + x0];
               k < row_runs.size() && row_runs[k].x0 <= x1; ++k) {
            const Run& run = row_runs[k];
            const double vq = run.value;
            double weight = 1.0;
            if (vq != vp) {
              const double t = (vp - vq) * (vp - vq) * inv_r;
              if (t > kNegligible) continue;
              weight = std::exp(-t);
            }
            const int a = std::max(run.x0, x0) - x + r;
            const int b = std::min(run.x1, x1) - x + r;
            weight *= gy * (cumulative[b + 1] - cumulative[a]);
            num += weight * vq;
            den += weight;
          }
        }
        out[static_cast<std::size_t>(y) * w + x] = num / den;
      }
    }
  });
  return {w, h, std::move(out)};
}

DepthMap zero_order_bilateral(const SegmentMap& segments,
                              const SampleSet& samples,
                              const BilateralParams& params,
                              UnsampledSegments policy) {
  const DepthMap d0 = zero_order_fill(segments, samples, policy);
  return exp_transform(bilateral_filter(log_transform(d0), params));
}

SegmentMap nearest_sample_segments(const SampleSet& samples) {
  if (samples.empty()) throw_data("nearest_sample_segments: no samples");
  const int w = samples.width(), h = samples.height();
  const detail::NearestIndex index(positions(samples), w, h);
  std::vector<std::int32_t> labels(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      labels[static_cast<std::size_t>(y) * w + x] = index.nearest(x, y);
    }
  }
  return {w, h, std::move(labels)};
}

DepthMap bilinear_baseline(const SampleSet& samples, int width, int height) {
  if (samples.width() != width || samples.height() != height) {
    throw_data("bilinear_baseline: sample set size differs from output size");
  }
  if (samples.size() < 3) throw_data("bilinear_baseline: need >= 3 samples");
  const std::vector<Pixel> pts = positions(samples);
  const DelaunayTriangulation tri(pts);
  const auto entries = samples.entries();

  std::vector<double> depth(static_cast<std::size_t>(width) * height, 0.0);
  std::vector<std::uint8_t> done(depth.size(), 0);
  for (const auto& t : tri.triangles()) {
    const Pixel a = pts[t[0]], b = pts[t[1]], c = pts[t[2]];
    const double area = static_cast<double>(orient2d(a, b, c));
    const int x0 = std::min({a.x, b.x, c.x}), x1 = std::max({a.x, b.x, c.x});
    const int y0 = std::min({a.y, b.y, c.y}), y1 = std::max({a.y, b.y, c.y});
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * width + x;
        if (done[i]) continue;
        const Pixel p{x, y};
        const std::int64_t wa = orient2d(b, c, p);
        const std::int64_t wb = orient2d(c, a, p);
        const std::int64_t wc = orient2d(a, b, p);
        if (wa < 0 || wb < 0 || wc < 0) continue;
        depth[i] = (static_cast<double>(wa) * entries[t[0]].depth +
                    static_cast<double>(wb) * entries[t[1]].depth +
                    static_cast<double>(wc) * entries[t[2]].depth) /
                   area;
        done[i] = 1;
      }
    }
  }
  const detail::NearestIndex index(pts, width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      if (!done[i]) depth[i] = entries[index.nearest(x, y)].depth;
    }
  }
  return {width, height, std::move(depth)};
}

DepthMap first_order_fill(const SegmentMap& segments, const SampleSet& samples,
                          FirstOrderStats* stats) {
  check_consistent(segments, samples);
  if (samples.empty()) throw_data("first_order_fill: no samples");
  const auto entries = samples.entries();
  std::vector<std::vector<PlanePoint>> members(segments.num_segments());
  for (const auto& s : entries) {
    members[segments.at(s.x, s.y)].push_back(
        {static_cast<double>(s.x), static_cast<double>(s.y), s.depth});
  }
  FirstOrderStats local;
  std::vector<Plane> planes(members.size());
  const auto com = centroids(segments);
  for (std::size_t s = 0; s < members.size(); ++s) {
    const auto& m = members[s];
    if (m.empty()) {
      const int k = nearest_to_centroid(samples, com[s][0], com[s][1]);
      planes[s] = {0.0, 0.0, entries[k].depth};
      ++local.unsampled_segments;
      continue;
    }
    if (m.size() >= 3) {
      try {
        planes[s] = fit_plane(m);
        ++local.planar_segments;
        continue;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Data) throw;
      }
    }
    double mean = 0.0;
    for (const auto& p : m) mean += p.depth;
    planes[s] = {0.0, 0.0, mean / static_cast<double>(m.size())};
    ++local.degenerate_segments;
  }
  const int w = segments.width();
  std::vector<double> depth(segments.pixel_count());
  const auto labels = segments.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double v = planes[labels[i]](static_cast<double>(i % w),
                                       static_cast<double>(i / w));
    depth[i] = std::max(0.0, v);
  }
  if (stats) *stats = local;
  return {w, segments.height(), std::move(depth)};
}

Sensor simulated_sensor(const DepthMap& gt, double noise_sigma,
                        std::uint64_t noise_seed) {
  auto truth = std::make_shared<const DepthMap>(gt);
  return [truth, noise_sigma, noise_seed](const SamplePattern& pattern,
                                          const SegmentMap* segments) {
    ExecuteOptions options;
    options.segments = segments;
    options.noise_sigma = noise_sigma;
    options.noise_seed = noise_seed;
    return execute(pattern, *truth, options);
  };
}

Reconstruction reconstruct_ours(const RgbImage& image, const Sensor& sensor,
                                std::size_t n, const PipelineParams& params) {
  if (n < 1) throw_usage("reconstruct_ours: budget must be >= 1");
  SlicParams slic = params.slic;
  slic.target_segments = static_cast<int>(
      std::min<std::size_t>(n, std::numeric_limits<int>::max()));
  SegmentMap segments = slic_segment(image, slic);
  SampleSet samples = sensor(com_pattern(segments), &segments);
  const BilateralParams bilateral =
      params.bilateral ? *params.bilateral
                       : BilateralParams::for_budget(image.width(),
                                                     image.height(), n,
                                                     params.scene);
  DepthMap depth = zero_order_bilateral(segments, samples, bilateral);
  return {std::move(depth), std::move(samples), std::move(segments), bilateral};
}

Reconstruction first_order_baseline(const RgbImage& image,
                                    const Sensor& sensor, std::size_t n,
                                    const SlicParams& slic,
                                    FirstOrderStats* stats) {
  if (n < 3) throw_usage("first_order_baseline: budget must be >= 3");
  SlicParams p = slic;
  p.target_segments = static_cast<int>(n / 3);
  SegmentMap segments = slic_segment(image, p);
  SampleSet samples = sensor(com3_pattern(segments), &segments);
  DepthMap depth = first_order_fill(segments, samples, stats);
  return {std::move(depth), std::move(samples), std::move(segments), {}};
}

}  // namespace igdepth
