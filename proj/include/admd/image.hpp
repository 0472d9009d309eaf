#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace admd {

/// Border handling for windowed operators. Replicate clamps every
/// out-of-range read to the nearest edge pixel and is the only mode.
enum class BorderPolicy { Replicate };

/// Dense single-channel image: 32-bit float pixels, row-major.
/// Windowed operators accumulate in double and never modify their inputs.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  GrayImage() = default;

  GrayImage(int w, int h, float fill = 0.0f) : width(w), height(h) {
    if (w < 1 || h < 1)
      throw std::invalid_argument("GrayImage: dimensions must be >= 1");
    data.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill);
  }

  std::size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }

  float& at(int y, int x) {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  float at(int y, int x) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }

  /// Replicate-border read: coordinates clamp to the image rectangle.
  float at_clamped(int y, int x) const {
    y = std::clamp(y, 0, height - 1);
    x = std::clamp(x, 0, width - 1);
    return at(y, x);
  }

  bool same_shape(const GrayImage& o) const {
    return width == o.width && height == o.height;
  }
};

inline bool operator==(const GrayImage& a, const GrayImage& b) {
  return a.width == b.width && a.height == b.height && a.data == b.data;
}
inline bool operator!=(const GrayImage& a, const GrayImage& b) { return !(a == b); }

inline std::pair<float, float> minmax(const GrayImage& img) {
  if (img.empty()) throw std::invalid_argument("minmax: empty image");
  auto [lo, hi] = std::minmax_element(img.data.begin(), img.data.end());
  return {*lo, *hi};
}

inline bool all_finite(const GrayImage& img) {
  for (float v : img.data)
    if (!std::isfinite(v)) return false;
  return true;
}

/// Grows the image by `margin` pixels on every side.
inline GrayImage pad(const GrayImage& img, int margin,
                     BorderPolicy = BorderPolicy::Replicate) {
  if (img.empty()) throw std::invalid_argument("pad: empty image");
  if (margin < 0) throw std::invalid_argument("pad: negative margin");
  if (margin == 0) return img;
  GrayImage out(img.width + 2 * margin, img.height + 2 * margin);
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x)
      out.at(y, x) = img.at_clamped(y - margin, x - margin);
  return out;
}

inline GrayImage crop(const GrayImage& img, int x0, int y0, int w, int h) {
  if (w < 1 || h < 1 || x0 < 0 || y0 < 0 || x0 + w > img.width ||
      y0 + h > img.height)
    throw std::invalid_argument("crop: rectangle out of bounds");
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.at(y, x) = img.at(y0 + y, x0 + x);
  return out;
}

}  // namespace admd
