#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace admd {

/// Axis-aligned target box in pixel coordinates.
struct TargetBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
};

inline bool boxes_overlap(const TargetBox& a, const TargetBox& b) {
  return a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h &&
         b.y < a.y + a.h;
}

/// Inflates a box by `margin` pixels on every side and clips it to the
/// image rectangle.
inline TargetBox inflate_clip(const TargetBox& b, int margin, int width,
                              int height) {
  const int x0 = std::max(0, b.x - margin);
  const int y0 = std::max(0, b.y - margin);
  const int x1 = std::min(width, b.x + b.w + margin);
  const int y1 = std::min(height, b.y + b.h + margin);
  return TargetBox{x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
}

inline bool box_contains(const TargetBox& b, int x, int y) {
  return x >= b.x && x < b.x + b.w && y >= b.y && y < b.y + b.h;
}

/// Target annotations for one image: disjoint boxes, each inside the image.
struct GroundTruth {
  std::vector<TargetBox> targets;
};

inline void validate_ground_truth(const GroundTruth& gt, int width,
                                  int height) {
  for (const auto& b : gt.targets) {
    if (b.w < 1 || b.h < 1)
      throw std::invalid_argument("GroundTruth: box sides must be >= 1");
    if (b.x < 0 || b.y < 0 || b.x + b.w > width || b.y + b.h > height)
      throw std::invalid_argument("GroundTruth: box outside image");
  }
  for (std::size_t i = 0; i < gt.targets.size(); ++i)
    for (std::size_t j = i + 1; j < gt.targets.size(); ++j)
      if (boxes_overlap(gt.targets[i], gt.targets[j]))
        throw std::invalid_argument("GroundTruth: boxes overlap");
}

}  // namespace admd
