#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "admd/image.hpp"
#include "admd/parallel.hpp"

namespace admd {

/// Sparse flat structuring element: a set of (dy, dx) offsets relative to
/// an implicit anchor at (0, 0). Offsets are deduplicated and kept in a
/// deterministic order.
struct StructuringElement {
  std::vector<std::pair<int, int>> offsets;

  static StructuringElement from_offsets(std::vector<std::pair<int, int>> offs) {
    std::sort(offs.begin(), offs.end());
    offs.erase(std::unique(offs.begin(), offs.end()), offs.end());
    return StructuringElement{std::move(offs)};
  }

  bool contains(int dy, int dx) const {
    return std::binary_search(offsets.begin(), offsets.end(),
                              std::make_pair(dy, dx));
  }
};

inline StructuringElement reflect(const StructuringElement& se) {
  std::vector<std::pair<int, int>> offs;
  offs.reserve(se.offsets.size());
  for (auto [dy, dx] : se.offsets) offs.emplace_back(-dy, -dx);
  return StructuringElement::from_offsets(std::move(offs));
}

/// Full square of side x side offsets centered on the anchor.
inline StructuringElement flat_square(int side) {
  if (side < 1 || side % 2 == 0)
    throw std::invalid_argument("flat_square: side must be odd and positive");
  const int r = side / 2;
  std::vector<std::pair<int, int>> offs;
  offs.reserve(static_cast<std::size_t>(side) * side);
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) offs.emplace_back(dy, dx);
  return StructuringElement{std::move(offs)};
}

/// The eight offsets at Chebyshev distance `cell` from the anchor: the
/// centers of the surrounding cells when a (3*cell)^2 neighborhood is tiled
/// into nine cell^2 cells. The anchor itself is not included, so dilating a
/// cell-mean image with this element yields the maximum surrounding-cell
/// mean at every pixel.
inline StructuringElement directional_max_se(int cell) {
  if (cell < 3 || cell % 2 == 0)
    throw std::invalid_argument("directional_max_se: cell must be odd and >= 3");
  const int c = cell;
  return StructuringElement{{{-c, -c},
                             {-c, 0},
                             {-c, c},
                             {0, -c},
                             {0, c},
                             {c, -c},
                             {c, 0},
                             {c, c}}};
}

/// Summed-area table: (height+1) x (width+1) double-precision running sums
/// with a zero first row and column.
struct IntegralImage {
  int width = 0;
  int height = 0;
  std::vector<double> table;

  static IntegralImage build(const GrayImage& img) {
    if (img.empty()) throw std::invalid_argument("IntegralImage: empty image");
    IntegralImage ii;
    ii.width = img.width;
    ii.height = img.height;
    const std::size_t stride = static_cast<std::size_t>(img.width) + 1;
    ii.table.assign(stride * (img.height + 1), 0.0);
    for (int y = 0; y < img.height; ++y) {
      const float* src = &img.data[static_cast<std::size_t>(y) * img.width];
      const double* prev = &ii.table[static_cast<std::size_t>(y) * stride];
      double* cur = &ii.table[(static_cast<std::size_t>(y) + 1) * stride];
      double row = 0.0;
      for (int x = 0; x < img.width; ++x) {
        row += src[x];
        cur[x + 1] = prev[x + 1] + row;
      }
    }
    return ii;
  }

  /// Sum over the half-open window rows [y0, y1) x cols [x0, x1).
  double sum(int y0, int x0, int y1, int x1) const {
    const std::size_t stride = static_cast<std::size_t>(width) + 1;
    return table[static_cast<std::size_t>(y1) * stride + x1] -
           table[static_cast<std::size_t>(y0) * stride + x1] -
           table[static_cast<std::size_t>(y1) * stride + x0] +
           table[static_cast<std::size_t>(y0) * stride + x0];
  }
};

namespace detail {

/// Per-pixel sums of the side x side window centered on each pixel,
/// taken over the replicate-padded extension of img. Valid for any side.
inline std::vector<double> box_sums(const GrayImage& img, int side) {
  const int r = side / 2;
  const GrayImage p = pad(img, r);
  const IntegralImage ii = IntegralImage::build(p);
  std::vector<double> sums(img.size());
  par::for_rows(img.height, img.size() * 8, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < img.width; ++x)
        sums[static_cast<std::size_t>(y) * img.width + x] =
            ii.sum(y, x, y + side, x + side);
  });
  return sums;
}

inline void check_se(const StructuringElement& se, const GrayImage& img,
                     const char* who) {
  if (se.offsets.empty())
    throw std::invalid_argument(std::string(who) + ": empty structuring element");
  for (auto [dy, dx] : se.offsets)
    if (std::abs(dy) >= img.height || std::abs(dx) >= img.width)
      throw std::invalid_argument(std::string(who) +
                                  ": offset exceeds image dimensions");
}

}  // namespace detail

/// Mean of the side x side neighborhood of every pixel over the
/// replicate-padded image. Output has the input's dimensions.
inline GrayImage box_mean(const GrayImage& img, int side,
                          BorderPolicy = BorderPolicy::Replicate) {
  if (side < 1 || side % 2 == 0)
    throw std::invalid_argument("box_mean: side must be odd and positive");
  if (side > std::min(img.width, img.height))
    throw std::invalid_argument("box_mean: side exceeds image dimensions");
  if (side == 1) return img;
  const std::vector<double> sums = detail::box_sums(img, side);
  const double inv = 1.0 / (static_cast<double>(side) * side);
  GrayImage out(img.width, img.height);
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data[i] = static_cast<float>(sums[i] * inv);
  return out;
}

/// Grayscale dilation: out(y, x) = max over SE offsets of the
/// replicate-padded img(y + dy, x + dx).
inline GrayImage dilate(const GrayImage& img, const StructuringElement& se,
                        BorderPolicy = BorderPolicy::Replicate) {
  detail::check_se(se, img, "dilate");
  GrayImage out(img.width, img.height);
  par::for_rows(img.height, img.size() * se.offsets.size(), [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < img.width; ++x) {
        float best = -std::numeric_limits<float>::infinity();
        for (auto [dy, dx] : se.offsets)
          best = std::max(best, img.at_clamped(y + dy, x + dx));
        out.at(y, x) = best;
      }
  });
  return out;
}

/// Grayscale erosion, the min-counterpart of dilate with the reflected
/// element: out(y, x) = min over SE offsets of img(y - dy, x - dx).
inline GrayImage erode(const GrayImage& img, const StructuringElement& se,
                       BorderPolicy = BorderPolicy::Replicate) {
  detail::check_se(se, img, "erode");
  GrayImage out(img.width, img.height);
  par::for_rows(img.height, img.size() * se.offsets.size(), [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < img.width; ++x) {
        float best = std::numeric_limits<float>::infinity();
        for (auto [dy, dx] : se.offsets)
          best = std::min(best, img.at_clamped(y - dy, x - dx));
        out.at(y, x) = best;
      }
  });
  return out;
}

/// Morphological opening: erosion followed by dilation with the same element.
inline GrayImage open(const GrayImage& img, const StructuringElement& se,
                      BorderPolicy policy = BorderPolicy::Replicate) {
  return dilate(erode(img, se, policy), se, policy);
}

namespace detail {

// 1-D correlation pass with clamped (replicate) reads. Row and column
// passes compose to the full separable 2-D filter over the
// replicate-padded image, corners included.
inline std::vector<double> conv_rows(const std::vector<double>& src, int w,
                                     int h, const std::vector<double>& k) {
  const int R = static_cast<int>(k.size()) / 2;
  std::vector<double> out(src.size());
  par::for_rows(h, src.size() * k.size(), [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      const double* row = &src[static_cast<std::size_t>(y) * w];
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int i = -R; i <= R; ++i)
          acc += k[i + R] * row[std::clamp(x + i, 0, w - 1)];
        out[static_cast<std::size_t>(y) * w + x] = acc;
      }
    }
  });
  return out;
}

inline std::vector<double> conv_cols(const std::vector<double>& src, int w,
                                     int h, const std::vector<double>& k) {
  const int R = static_cast<int>(k.size()) / 2;
  std::vector<double> out(src.size());
  par::for_rows(h, src.size() * k.size(), [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int i = -R; i <= R; ++i)
          acc += k[i + R] *
                 src[static_cast<std::size_t>(std::clamp(y + i, 0, h - 1)) * w + x];
        out[static_cast<std::size_t>(y) * w + x] = acc;
      }
  });
  return out;
}

}  // namespace detail

/// Scale-normalized Laplacian-of-Gaussian filter, sign chosen so bright
/// blobs respond positively. The kernel is truncated at radius ceil(3*sigma)
/// and DC-corrected by subtracting its mean, so constant regions map to
/// (numerically) zero. Runs as two separable passes plus a box-sum
/// correction term.
inline GrayImage log_filter(const GrayImage& img, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("log_filter: sigma must be > 0");
  if (img.empty()) throw std::invalid_argument("log_filter: empty image");
  const int R = static_cast<int>(std::ceil(3.0 * sigma));
  const int taps = 2 * R + 1;
  const double s2 = sigma * sigma;

  // -sigma^2 * laplacian(G) = [a(x) b(y) + b(x) a(y)] / (2 pi sigma^2)
  std::vector<double> a(taps), b(taps);
  for (int i = -R; i <= R; ++i) {
    const double g = std::exp(-0.5 * i * i / s2);
    b[i + R] = g;
    a[i + R] = (s2 - static_cast<double>(i) * i) / s2 * g;
  }

  std::vector<double> src(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) src[i] = img.data[i];
  const int w = img.width, h = img.height;
  std::vector<double> t1 = detail::conv_cols(detail::conv_rows(src, w, h, a), w, h, b);
  std::vector<double> t2 = detail::conv_cols(detail::conv_rows(src, w, h, b), w, h, a);

  const double norm = 1.0 / (2.0 * std::numbers::pi * s2);
  double sum_a = 0.0, sum_b = 0.0;
  for (int i = 0; i < taps; ++i) {
    sum_a += a[i];
    sum_b += b[i];
  }
  const double kernel_mean =
      2.0 * sum_a * sum_b * norm / (static_cast<double>(taps) * taps);
  const std::vector<double> window = detail::box_sums(img, taps);

  GrayImage out(w, h);
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data[i] =
        static_cast<float>((t1[i] + t2[i]) * norm - kernel_mean * window[i]);
  return out;
}

}  // namespace admd
