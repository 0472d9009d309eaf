#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "admd/ground_truth.hpp"
#include "admd/image.hpp"

namespace admd {

enum class NoiseDist { Gaussian, Poisson, Rayleigh };

/// Noise model: Gaussian(sigma, zero mean), Poisson(lambda) or
/// Rayleigh(scale). `param` is the single distribution parameter.
struct NoiseSpec {
  NoiseDist dist = NoiseDist::Gaussian;
  double param = 3.0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic sampler: std::mt19937_64 is fully specified by the
// standard, and the transforms below are hand-rolled because the
// std::*_distribution output sequences are implementation-defined.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : eng_(splitmix64(seed)) {}

  double uniform01() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double gaussian(double sigma) {
    if (has_spare_) {
      has_spare_ = false;
      return spare_ * sigma;
    }
    double u1 = uniform01(), u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a) * sigma;
  }

  double poisson(double lambda) {
    // Knuth's product-of-uniforms method; fine for the moderate rates here.
    const double limit = std::exp(-lambda);
    double p = 1.0;
    long k = 0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit);
    return static_cast<double>(k - 1);
  }

  double rayleigh(double scale) {
    return scale * std::sqrt(-2.0 * std::log1p(-uniform01()));
  }

  double draw(const NoiseSpec& spec) {
    switch (spec.dist) {
      case NoiseDist::Gaussian: return gaussian(spec.param);
      case NoiseDist::Poisson: return poisson(spec.param);
      case NoiseDist::Rayleigh: return rayleigh(spec.param);
    }
    throw std::invalid_argument("unknown noise distribution");
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline void check_noise(const NoiseSpec& spec) {
  if (!(spec.param > 0.0))
    throw std::invalid_argument("NoiseSpec: parameter must be > 0");
}

}  // namespace detail

/// i.i.d. noise samples, bit-deterministic per seed.
inline std::vector<double> gen_noise(const NoiseSpec& dist, std::size_t n,
                                     std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_noise: n must be >= 1");
  detail::check_noise(dist);
  detail::Sampler s(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = s.draw(dist);
  return out;
}

struct StepEdge {
  enum class Orientation { Vertical, Horizontal };
  Orientation orientation = Orientation::Vertical;
  int position = 0;  // first bright column (vertical) or row (horizontal)
  float bright = 0.0f;
};

struct GaussianTarget {
  double cx = 0.0;
  double cy = 0.0;
  double sigma = 1.0;
  float amplitude = 0.0f;
};

struct RectTarget {
  TargetBox box;
  float amplitude = 0.0f;
};

using SceneElement = std::variant<StepEdge, GaussianTarget, RectTarget>;

/// Declarative synthetic scene: a flat background, a list of elements
/// painted in order, then optional i.i.d. noise.
struct SceneSpec {
  int width = 0;
  int height = 0;
  float background = 0.0f;
  std::vector<SceneElement> elements;
  std::optional<NoiseSpec> noise;
  std::uint64_t rng_seed = 0;
};

/// Ground-truth box of a Gaussian target: center +/- ceil(2 sigma).
inline TargetBox gaussian_target_box(const GaussianTarget& t) {
  const int r = static_cast<int>(std::ceil(2.0 * t.sigma));
  const int cx = static_cast<int>(std::lround(t.cx));
  const int cy = static_cast<int>(std::lround(t.cy));
  return TargetBox{cx - r, cy - r, 2 * r + 1, 2 * r + 1};
}

/// Renders the scene. Deterministic per seed; the ground truth lists the
/// bounding boxes of all target elements (step edges are clutter, not
/// targets).
inline std::pair<GrayImage, GroundTruth> render(const SceneSpec& spec) {
  if (spec.width < 1 || spec.height < 1)
    throw std::invalid_argument("render: dimensions must be >= 1");
  GrayImage img(spec.width, spec.height, spec.background);
  GroundTruth gt;

  for (const auto& elem : spec.elements) {
    if (const auto* e = std::get_if<StepEdge>(&elem)) {
      const int extent =
          e->orientation == StepEdge::Orientation::Vertical ? spec.width : spec.height;
      if (e->position < 0 || e->position > extent)
        throw std::invalid_argument("render: step edge out of bounds");
      for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x) {
          const int c = e->orientation == StepEdge::Orientation::Vertical ? x : y;
          if (c >= e->position) img.at(y, x) = e->bright;
        }
    } else if (const auto* g = std::get_if<GaussianTarget>(&elem)) {
      if (!(g->sigma > 0.0))
        throw std::invalid_argument("render: gaussian sigma must be > 0");
      const TargetBox box = gaussian_target_box(*g);
      if (box.x < 0 || box.y < 0 || box.x + box.w > spec.width ||
          box.y + box.h > spec.height)
        throw std::invalid_argument("render: gaussian target out of bounds");
      const double inv = 1.0 / (2.0 * g->sigma * g->sigma);
      for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x) {
          const double dx = x - g->cx, dy = y - g->cy;
          img.at(y, x) += static_cast<float>(
              g->amplitude * std::exp(-(dx * dx + dy * dy) * inv));
        }
      gt.targets.push_back(box);
    } else if (const auto* rt = std::get_if<RectTarget>(&elem)) {
      const TargetBox& b = rt->box;
      if (b.w < 1 || b.h < 1 || b.x < 0 || b.y < 0 ||
          b.x + b.w > spec.width || b.y + b.h > spec.height)
        throw std::invalid_argument("render: rect target out of bounds");
      for (int y = b.y; y < b.y + b.h; ++y)
        for (int x = b.x; x < b.x + b.w; ++x) img.at(y, x) += rt->amplitude;
      gt.targets.push_back(b);
    }
  }

  if (spec.noise) {
    detail::check_noise(*spec.noise);
    detail::Sampler s(spec.rng_seed);
    for (float& v : img.data) v += static_cast<float>(s.draw(*spec.noise));
  }

  validate_ground_truth(gt, spec.width, spec.height);
  return {std::move(img), std::move(gt)};
}

enum class NoiseAlg { Aagd, Admd, AdmdPlus };

inline const char* to_string(NoiseAlg a) {
  switch (a) {
    case NoiseAlg::Aagd: return "aagd";
    case NoiseAlg::Admd: return "admd";
    case NoiseAlg::AdmdPlus: return "admd+";
  }
  return "?";
}

inline const char* to_string(NoiseDist d) {
  switch (d) {
    case NoiseDist::Gaussian: return "gaussian";
    case NoiseDist::Poisson: return "poisson";
    case NoiseDist::Rayleigh: return "rayleigh";
  }
  return "?";
}

struct McResult {
  double mean = 0.0;
  double variance = 0.0;
};

inline constexpr int kMcSignalLength = 63;

/// One-dimensional analogue of the detectors, evaluated at `center`:
///   aagd  - squared difference between the central cell mean and the mean
///           of the flanking samples of the 3*cell background window;
///   admd  - min of the squared differences against the left and right
///           cell means, without negative-contrast suppression;
///   admd+ - the same with suppression.
inline double eval_noise_response_1d(NoiseAlg alg, const double* sig, int len,
                                     int center, int cell, int aagd_bg) {
  if (cell < 1 || cell % 2 == 0)
    throw std::invalid_argument("eval_noise_response_1d: cell must be odd");
  if (aagd_bg != 3 * cell)
    throw std::invalid_argument(
        "eval_noise_response_1d: background window must be 3x cell");
  const int reach = cell + cell / 2;
  if (center - reach < 0 || center + reach >= len)
    throw std::invalid_argument("eval_noise_response_1d: window out of range");

  auto window_sum = [&](int c, int half) {
    double acc = 0.0;
    for (int i = c - half; i <= c + half; ++i) acc += sig[i];
    return acc;
  };
  const int r = cell / 2;
  const double s0 = window_sum(center, r);
  const double m0 = s0 / cell;
  if (alg == NoiseAlg::Aagd) {
    const double s_bg = window_sum(center, aagd_bg / 2);
    const double flank_mean = (s_bg - s0) / (aagd_bg - cell);
    const double d = m0 - flank_mean;
    return d * d;
  }
  const double dl = m0 - window_sum(center - cell, r) / cell;
  const double dr = m0 - window_sum(center + cell, r) / cell;
  if (alg == NoiseAlg::Admd) return std::min(dl * dl, dr * dr);
  return std::min(dl >= 0.0 ? dl * dl : 0.0, dr >= 0.0 ? dr * dr : 0.0);
}

/// One-dimensional noise-response Monte Carlo. Per trial a fresh 63-sample
/// noise signal is drawn and eval_noise_response_1d is applied at the center
/// sample. Trials partition the seed space by index, so the result is
/// independent of evaluation order. Returns the sample mean and variance.
inline McResult noise_mc_1d(NoiseAlg alg, const NoiseSpec& dist, long trials,
                            int cell = 9, int aagd_bg = 27,
                            std::uint64_t seed = 0) {
  if (trials < 1) throw std::invalid_argument("noise_mc_1d: trials must be >= 1");
  if (cell < 1 || cell % 2 == 0)
    throw std::invalid_argument("noise_mc_1d: cell must be odd and positive");
  if (aagd_bg != 3 * cell)
    throw std::invalid_argument("noise_mc_1d: background window must be 3x cell");
  if (kMcSignalLength < 3 * cell)
    throw std::invalid_argument("noise_mc_1d: cell too large for the signal");
  detail::check_noise(dist);

  const int center = kMcSignalLength / 2;
  double mean = 0.0, m2 = 0.0;
  double sig[kMcSignalLength];
  for (long t = 0; t < trials; ++t) {
    detail::Sampler s(seed + static_cast<std::uint64_t>(t));
    for (double& v : sig) v = s.draw(dist);
    const double value =
        eval_noise_response_1d(alg, sig, kMcSignalLength, center, cell, aagd_bg);
    const double d = value - mean;
    mean += d / static_cast<double>(t + 1);
    m2 += d * (value - mean);
  }
  const double variance = trials > 1 ? m2 / static_cast<double>(trials - 1) : 0.0;
  return McResult{mean, variance};
}

}  // namespace admd
