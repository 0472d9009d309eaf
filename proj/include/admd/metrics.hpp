#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "admd/ground_truth.hpp"
#include "admd/image.hpp"

namespace admd {

/// Local background ring width used by SCR.
inline constexpr int kScrRingMargin = 20;
/// Exclusion margin around ground-truth boxes for BSF and false-alarm
/// accounting; detector responses legitimately spread about one cell
/// beyond the target.
inline constexpr int kNonTargetMargin = 2;

namespace detail {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
  std::size_t count = 0;
};

// Population statistics via Welford's recurrence.
inline MeanStd mean_std(const std::vector<double>& v) {
  MeanStd r;
  double m = 0.0, m2 = 0.0;
  for (double x : v) {
    ++r.count;
    const double d = x - m;
    m += d / static_cast<double>(r.count);
    m2 += d * (x - m);
  }
  r.mean = m;
  r.std = r.count > 0 ? std::sqrt(m2 / static_cast<double>(r.count)) : 0.0;
  return r;
}

inline std::vector<bool> non_target_mask(const GroundTruth& gt, int width,
                                         int height) {
  std::vector<bool> mask(static_cast<std::size_t>(width) * height, true);
  for (const auto& b : gt.targets) {
    const TargetBox z = inflate_clip(b, kNonTargetMargin, width, height);
    for (int y = z.y; y < z.y + z.h; ++y)
      for (int x = z.x; x < z.x + z.w; ++x)
        mask[static_cast<std::size_t>(y) * width + x] = false;
  }
  return mask;
}

}  // namespace detail

/// Signal-to-clutter ratio per target: (f_T - f_b) / sigma_b, where f_T is
/// the mean inside the box and f_b, sigma_b are taken over the surrounding
/// ring (box inflated by 20 px, minus the box, clipped to the image).
/// A constant ring reports +inf.
inline std::vector<double> scr(const GrayImage& img, const GroundTruth& gt) {
  if (gt.targets.empty()) throw std::invalid_argument("scr: no targets");
  validate_ground_truth(gt, img.width, img.height);
  std::vector<double> out;
  out.reserve(gt.targets.size());
  for (const auto& b : gt.targets) {
    double target_sum = 0.0;
    for (int y = b.y; y < b.y + b.h; ++y)
      for (int x = b.x; x < b.x + b.w; ++x) target_sum += img.at(y, x);
    const double f_t = target_sum / (static_cast<double>(b.w) * b.h);

    const TargetBox ring = inflate_clip(b, kScrRingMargin, img.width, img.height);
    std::vector<double> bg;
    bg.reserve(static_cast<std::size_t>(ring.w) * ring.h);
    for (int y = ring.y; y < ring.y + ring.h; ++y)
      for (int x = ring.x; x < ring.x + ring.w; ++x)
        if (!box_contains(b, x, y)) bg.push_back(img.at(y, x));
    const auto stats = detail::mean_std(bg);
    if (stats.count == 0 || stats.std == 0.0) {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    out.push_back((f_t - stats.mean) / stats.std);
  }
  return out;
}

/// Background suppression factor sigma_in / sigma_out over the non-target
/// area (every ground-truth box inflated by 2 px is excluded). sigma_out is
/// measured on the [0,255]-normalized saliency map; perfect suppression
/// (sigma_out == 0) reports +inf.
inline double bsf(const GrayImage& input, const GrayImage& saliency,
                  const GroundTruth& gt) {
  if (!input.same_shape(saliency))
    throw std::invalid_argument("bsf: image dimensions differ");
  validate_ground_truth(gt, input.width, input.height);
  const auto mask = detail::non_target_mask(gt, input.width, input.height);
  std::vector<double> in_px, out_px;
  for (std::size_t i = 0; i < input.size(); ++i)
    if (mask[i]) {
      in_px.push_back(input.data[i]);
      out_px.push_back(saliency.data[i]);
    }
  if (in_px.empty()) throw std::invalid_argument("bsf: non-target area is empty");
  const double sigma_in = detail::mean_std(in_px).std;

  // Normalization to [0,255] is the affine map v -> 255 (v - lo) / (hi - lo);
  // sigma_out picks up only its scale factor.
  auto [lo, hi] = minmax(saliency);
  const double range = static_cast<double>(hi) - static_cast<double>(lo);
  if (range == 0.0) return std::numeric_limits<double>::infinity();
  const double sigma_out = detail::mean_std(out_px).std * (255.0 / range);
  if (sigma_out == 0.0) return std::numeric_limits<double>::infinity();
  return sigma_in / sigma_out;
}

struct PfaPoint {
  int threshold = 0;
  double pfa = 0.0;
};

/// False-alarm rate per global threshold on the [0,255]-normalized map.
struct PfaCurve {
  std::vector<PfaPoint> points;
};

/// Sweeps every integer threshold 0..255 over the normalized saliency map.
/// A false alarm is a pixel strictly above the threshold outside every
/// inflated (2 px) ground-truth box; the rate divides by the total pixel
/// count of the image.
inline PfaCurve pfa_curve(const GrayImage& saliency, const GroundTruth& gt) {
  validate_ground_truth(gt, saliency.width, saliency.height);
  const auto mask = detail::non_target_mask(gt, saliency.width, saliency.height);
  auto [lo, hi] = minmax(saliency);
  const double range = static_cast<double>(hi) - static_cast<double>(lo);

  // bucket[u] counts pixels whose normalized value v satisfies
  // ceil(v) == u; such a pixel exceeds precisely the thresholds t < v,
  // i.e. t = 0 .. u-1.
  std::array<std::uint64_t, 257> bucket{};
  if (range > 0.0) {
    for (std::size_t i = 0; i < saliency.size(); ++i) {
      if (!mask[i]) continue;
      const double v =
          255.0 * (static_cast<double>(saliency.data[i]) - lo) / range;
      const int u = static_cast<int>(std::ceil(v));
      bucket[std::clamp(u, 0, 256)]++;
    }
  }
  const double total = static_cast<double>(saliency.size());
  PfaCurve curve;
  curve.points.resize(256);
  std::uint64_t above = 0;
  for (int t = 255; t >= 0; --t) {
    above += bucket[t + 1];
    curve.points[t] = PfaPoint{t, static_cast<double>(above) / total};
  }
  return curve;
}

inline void write_csv(std::ostream& os, const PfaCurve& curve) {
  os << "threshold,pfa\n";
  for (const auto& p : curve.points) os << p.threshold << ',' << p.pfa << '\n';
}

}  // namespace admd
