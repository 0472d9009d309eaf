#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "admd/filters.hpp"
#include "admd/image.hpp"
#include "admd/parallel.hpp"

namespace admd {

/// Ordered set of odd cell sizes for multi-scale detection.
struct ScaleSet {
  std::vector<int> cells;

  ScaleSet() : cells{3, 5, 7, 9} {}

  explicit ScaleSet(std::vector<int> c) : cells(std::move(c)) { validate(); }

  void validate() const {
    if (cells.empty()) throw std::invalid_argument("ScaleSet: empty");
    int prev = 0;
    for (int c : cells) {
      if (c < 1 || c % 2 == 0)
        throw std::invalid_argument("ScaleSet: cells must be odd and positive");
      if (c <= prev)
        throw std::invalid_argument("ScaleSet: cells must be strictly increasing");
      prev = c;
    }
  }
};

/// The nine cell-mean images of the 3c x 3c local analysis window:
/// m[0] is the central (target) cell mean, m[1..8] the surrounding cell
/// means in the offset order of directional_max_se.
struct CellMeans {
  std::array<GrayImage, 9> m;
};

namespace detail {

inline void check_window(const GrayImage& img, int cell, const char* who) {
  if (cell < 3 || cell % 2 == 0)
    throw std::invalid_argument(std::string(who) + ": cell must be odd and >= 3");
  if (3 * cell > std::min(img.width, img.height))
    throw std::invalid_argument(std::string(who) +
                                ": image smaller than 3x cell window");
}

// Max of the eight surrounding-cell sums, i.e. a sparse dilation of the
// cell-sum plane with clamped reads.
inline std::vector<double> directional_max_sums(const std::vector<double>& s,
                                                int w, int h, int cell) {
  const StructuringElement se = directional_max_se(cell);
  std::vector<double> out(s.size());
  par::for_rows(h, s.size() * 8, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < w; ++x) {
        double best = -std::numeric_limits<double>::infinity();
        for (auto [dy, dx] : se.offsets) {
          const int yy = std::clamp(y + dy, 0, h - 1);
          const int xx = std::clamp(x + dx, 0, w - 1);
          best = std::max(best, s[static_cast<std::size_t>(yy) * w + xx]);
        }
        out[static_cast<std::size_t>(y) * w + x] = best;
      }
  });
  return out;
}

}  // namespace detail

/// Cell means of the 3c x 3c window at every pixel. m[k] for k >= 1 is the
/// central mean translated by the k-th directional offset, with replicate
/// clamping at the borders.
inline CellMeans cell_means(const GrayImage& img, int cell) {
  detail::check_window(img, cell, "cell_means");
  CellMeans cm;
  cm.m[0] = box_mean(img, cell);
  const StructuringElement se = directional_max_se(cell);
  for (int k = 1; k <= 8; ++k) {
    auto [dy, dx] = se.offsets[k - 1];
    GrayImage shifted(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        shifted.at(y, x) = cm.m[0].at_clamped(y + dy, x + dx);
    cm.m[k] = std::move(shifted);
  }
  return cm;
}

/// Average absolute gray difference: squared difference between the mean of
/// the central c x c cell and the mean of the surrounding (3c)^2 window with
/// the central cell removed.
inline GrayImage aagd(const GrayImage& img, int cell) {
  if (cell < 1 || cell % 2 == 0)
    throw std::invalid_argument("aagd: cell must be odd and positive");
  if (3 * cell > std::min(img.width, img.height))
    throw std::invalid_argument("aagd: image smaller than 3x cell window");
  const std::vector<double> s0 = detail::box_sums(img, cell);
  const std::vector<double> s_big = detail::box_sums(img, 3 * cell);
  // m0 - ring_mean = (9*S0 - S_big) / (8 c^2); differences are formed on
  // sums so constant offsets cancel exactly.
  const double inv = 1.0 / (8.0 * cell * cell);
  GrayImage out(img.width, img.height);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d = (9.0 * s0[i] - s_big[i]) * inv;
    out.data[i] = static_cast<float>(d * d);
  }
  return out;
}

/// Directional form of the detector, computed the straightforward way: for
/// every pixel the central and all eight surrounding cell sums are
/// accumulated directly from the padded image, every direction is scored,
/// and the minimum suppressed response wins. Quadratic in the cell size per
/// pixel; admd_efficient produces the same map through box filtering and
/// dilation.
inline GrayImage admd_naive(const GrayImage& img, int cell) {
  detail::check_window(img, cell, "admd_naive");
  const int r = cell / 2;
  const GrayImage p = pad(img, r);
  const StructuringElement se = directional_max_se(cell);
  const double n = static_cast<double>(cell) * cell;
  const double inv4 = 1.0 / (n * n);
  GrayImage out(img.width, img.height);
  par::for_rows(img.height, img.size() * 9 * cell * cell, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < img.width; ++x) {
        // cell sum centered at original-coordinate (cy, cx); the pad margin
        // r turns that into the padded top-left (cy, cx)
        auto cell_sum = [&](int cy, int cx) {
          double s = 0.0;
          for (int yy = 0; yy < cell; ++yy) {
            const float* row = &p.data[static_cast<std::size_t>(cy + yy) * p.width + cx];
            for (int xx = 0; xx < cell; ++xx) s += row[xx];
          }
          return s;
        };
        const double s0 = cell_sum(y, x);
        double best = std::numeric_limits<double>::infinity();
        for (auto [dy, dx] : se.offsets) {
          const int cy = std::clamp(y + dy, 0, img.height - 1);
          const int cx = std::clamp(x + dx, 0, img.width - 1);
          const double d = s0 - cell_sum(cy, cx);
          best = std::min(best, d >= 0.0 ? d * d : 0.0);
        }
        out.at(y, x) = static_cast<float>(best * inv4);
      }
    }
  });
  return out;
}

/// Dilation-based form: one box filter gives the cell-mean plane, a sparse
/// dilation gives the maximum surrounding-cell mean, and the suppressed
/// squared difference of the two is the detector output.
inline GrayImage admd_efficient(const GrayImage& img, int cell) {
  detail::check_window(img, cell, "admd_efficient");
  const std::vector<double> s0 = detail::box_sums(img, cell);
  const std::vector<double> smax =
      detail::directional_max_sums(s0, img.width, img.height, cell);
  const double inv = 1.0 / (static_cast<double>(cell) * cell);
  GrayImage out(img.width, img.height);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d = (s0[i] - smax[i]) * inv;
    out.data[i] = d >= 0.0 ? static_cast<float>(d * d) : 0.0f;
  }
  return out;
}

/// Pixelwise maximum of a single-scale detector across a set of cell sizes.
template <typename Detector>
GrayImage multiscale(Detector&& detector, const GrayImage& img,
                     const ScaleSet& scales) {
  scales.validate();
  GrayImage out = detector(img, scales.cells.front());
  for (std::size_t i = 1; i < scales.cells.size(); ++i) {
    const GrayImage s = detector(img, scales.cells[i]);
    for (std::size_t j = 0; j < out.size(); ++j)
      out.data[j] = std::max(out.data[j], s.data[j]);
  }
  return out;
}

/// White top-hat: input minus its opening by a flat square element,
/// clamped at zero.
inline GrayImage tophat(const GrayImage& img, int se_side) {
  if (se_side < 1 || se_side % 2 == 0)
    throw std::invalid_argument("tophat: side must be odd and positive");
  const GrayImage opened = open(img, flat_square(se_side));
  GrayImage out(img.width, img.height);
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data[i] = std::max(0.0f, img.data[i] - opened.data[i]);
  return out;
}

inline constexpr int kMsLogScaleCount = 12;

/// Geometric sigma grid for the multi-scale LoG detector, spanning blob
/// diameters of roughly 2 to 24 pixels.
inline std::array<double, kMsLogScaleCount> ms_log_sigmas() {
  std::array<double, kMsLogScaleCount> s{};
  double v = 1.0;
  for (int k = 0; k < kMsLogScaleCount; ++k) {
    s[k] = v;
    v *= 1.26;
  }
  return s;
}

/// Multi-scale LoG: pixelwise maximum of the scale-normalized LoG response
/// over the 12-sigma grid, clamped at zero.
inline GrayImage ms_log(const GrayImage& img) {
  if (img.empty()) throw std::invalid_argument("ms_log: empty image");
  const auto sigmas = ms_log_sigmas();
  GrayImage out = log_filter(img, sigmas[0]);
  for (int k = 1; k < kMsLogScaleCount; ++k) {
    const GrayImage s = log_filter(img, sigmas[k]);
    for (std::size_t j = 0; j < out.size(); ++j)
      out.data[j] = std::max(out.data[j], s.data[j]);
  }
  for (float& v : out.data) v = std::max(v, 0.0f);
  return out;
}

}  // namespace admd
