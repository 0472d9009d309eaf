#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "admd/detectors.hpp"
#include "oracles.hpp"

using admd::GrayImage;

namespace {

// Two-level scene with a vertical edge: columns < edge_col are dark.
GrayImage step_scene(int w, int h, int edge_col, float dark, float bright) {
  GrayImage img(w, h, dark);
  for (int y = 0; y < h; ++y)
    for (int x = edge_col; x < w; ++x) img.at(y, x) = bright;
  return img;
}

GrayImage scale_image(const GrayImage& img, float a) {
  GrayImage out = img;
  for (auto& v : out.data) v *= a;
  return out;
}

GrayImage shift_image(const GrayImage& img, float b) {
  GrayImage out = img;
  for (auto& v : out.data) v += b;
  return out;
}

std::size_t argmax(const GrayImage& img) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < img.size(); ++i)
    if (img.data[i] > img.data[best]) best = i;
  return best;
}

}  // namespace

TEST_CASE("ScaleSet validation", "[detectors]") {
  CHECK(admd::ScaleSet{}.cells == std::vector<int>{3, 5, 7, 9});
  CHECK_THROWS_AS(admd::ScaleSet(std::vector<int>{}), std::invalid_argument);
  CHECK_THROWS_AS(admd::ScaleSet({3, 4}), std::invalid_argument);
  CHECK_THROWS_AS(admd::ScaleSet({5, 3}), std::invalid_argument);
  CHECK_THROWS_AS(admd::ScaleSet({3, 3}), std::invalid_argument);
  CHECK_NOTHROW(admd::ScaleSet({3, 9, 11}));
}

TEST_CASE("cell_means", "[detectors]") {
  SECTION("constant image: all nine means equal the constant") {
    const GrayImage img(12, 12, 6.5f);
    const admd::CellMeans cm = admd::cell_means(img, 3);
    for (const auto& m : cm.m)
      for (float v : m.data) CHECK(v == Catch::Approx(6.5f).margin(1e-6));
  }
  SECTION("random 9x9, cell 3: center pixel matches per-cell averages") {
    const GrayImage img = oracle::random_image(31, 9, 9);
    const admd::CellMeans cm = admd::cell_means(img, 3);
    const auto se = admd::directional_max_se(3);
    CHECK(cm.m[0].at(4, 4) ==
          Catch::Approx(oracle::window_mean(img, 4, 4, 3)).margin(1e-4));
    for (int k = 1; k <= 8; ++k) {
      auto [dy, dx] = se.offsets[k - 1];
      CHECK(cm.m[k].at(4, 4) ==
            Catch::Approx(oracle::window_mean(img, 4 + dy, 4 + dx, 3)).margin(1e-4));
    }
  }
  SECTION("two-level edge geometry, cell 3") {
    // target window one column right of the edge: fully bright, the three
    // left cells fully dark, the five others fully bright
    const GrayImage img = step_scene(48, 48, 24, 50.0f, 200.0f);
    const admd::CellMeans cm = admd::cell_means(img, 3);
    const int y = 24, x = 25;
    const auto se = admd::directional_max_se(3);
    CHECK(cm.m[0].at(y, x) == 200.0f);
    for (int k = 1; k <= 8; ++k) {
      auto [dy, dx] = se.offsets[k - 1];
      const float expected = dx < 0 ? 50.0f : 200.0f;
      CHECK(cm.m[k].at(y, x) == expected);
    }
  }
  SECTION("image smaller than the analysis window throws") {
    const GrayImage img(8, 8, 0.0f);
    CHECK_THROWS_AS(admd::cell_means(img, 3), std::invalid_argument);
  }
}

TEST_CASE("aagd analytic edge response", "[detectors]") {
  const float dark = 50.0f, bright = 200.0f;
  const double dg = bright - dark;
  const double expected = 9.0 / 64.0 * dg * dg;  // 3164.0625
  const GrayImage img = step_scene(48, 48, 24, dark, bright);
  const GrayImage out = admd::aagd(img, 3);

  SECTION("constant image gives zero") {
    const GrayImage c(16, 16, 33.0f);
    for (float v : admd::aagd(c, 3).data) CHECK(v == 0.0f);
  }
  SECTION("bright-side band hits (9/64) dg^2") {
    CHECK(out.at(24, 25) == Catch::Approx(expected).epsilon(1e-6));
  }
  SECTION("dark-side band gives the same value (sign-blind)") {
    CHECK(out.at(24, 22) == Catch::Approx(expected).epsilon(1e-6));
    CHECK(out.at(24, 22) == out.at(24, 25));
  }
  SECTION("the band value is the global peak") {
    auto [lo, hi] = admd::minmax(out);
    CHECK(hi == Catch::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("admd eliminates the ideal step edge exactly", "[detectors]") {
  const GrayImage img = step_scene(40, 36, 17, 50.0f, 200.0f);
  for (int cell : {3, 5, 7, 9}) {
    const GrayImage naive = admd::admd_naive(img, cell);
    const GrayImage eff = admd::admd_efficient(img, cell);
    for (float v : naive.data) REQUIRE(v == 0.0f);
    for (float v : eff.data) REQUIRE(v == 0.0f);
  }
}

TEST_CASE("admd center response to an isolated target square", "[detectors]") {
  const float amplitude = 7.0f;
  GrayImage img(9, 9, 0.0f);
  for (int y = 3; y < 6; ++y)
    for (int x = 3; x < 6; ++x) img.at(y, x) = amplitude;
  const GrayImage naive = admd::admd_naive(img, 3);
  const GrayImage eff = admd::admd_efficient(img, 3);
  CHECK(naive.at(4, 4) == amplitude * amplitude);
  CHECK(eff.at(4, 4) == amplitude * amplitude);
  SECTION("constant image gives zero") {
    const GrayImage c(12, 12, 9.0f);
    for (float v : admd::admd_naive(c, 3).data) CHECK(v == 0.0f);
    for (float v : admd::admd_efficient(c, 3).data) CHECK(v == 0.0f);
  }
}

TEST_CASE("naive and efficient admd agree on random images", "[detectors]") {
  std::mt19937_64 eng(515);
  const float tol = 1e-5f * 255.0f * 255.0f;
  for (int i = 0; i < 30; ++i) {
    const int w = 27 + static_cast<int>(eng() % 60);
    const int h = 27 + static_cast<int>(eng() % 40);
    const GrayImage img = oracle::random_image(eng(), w, h);
    for (int cell : {3, 5, 7, 9}) {
      const GrayImage a = admd::admd_naive(img, cell);
      const GrayImage b = admd::admd_efficient(img, cell);
      REQUIRE(oracle::max_abs_diff(a, b) <= tol);
    }
  }
}

TEST_CASE("admd is dominated by every directional response", "[detectors]") {
  std::mt19937_64 eng(616);
  for (int i = 0; i < 10; ++i) {
    const GrayImage img = oracle::random_image(eng(), 30, 30);
    const int cell = 3;
    const GrayImage out = admd::admd_naive(img, cell);
    const admd::CellMeans cm = admd::cell_means(img, cell);
    for (int k = 1; k <= 8; ++k) {
      for (std::size_t j = 0; j < out.size(); ++j) {
        const double d = static_cast<double>(cm.m[0].data[j]) - cm.m[k].data[j];
        const double dk = d >= 0.0 ? d * d : 0.0;
        REQUIRE(out.data[j] <= dk + 1e-3);
      }
    }
  }
}

TEST_CASE("brightness shift leaves aagd/admd unchanged exactly", "[detectors]") {
  std::mt19937_64 eng(717);
  for (int i = 0; i < 25; ++i) {
    const int w = 21 + static_cast<int>(eng() % 30);
    const int h = 21 + static_cast<int>(eng() % 30);
    const GrayImage img = oracle::random_integer_image(eng(), w, h);
    const float b = static_cast<float>(static_cast<int>(eng() % 150) - 50);
    const GrayImage shifted = shift_image(img, b);
    const int cell = (eng() % 2) ? 3 : 5;
    REQUIRE(admd::aagd(img, cell) == admd::aagd(shifted, cell));
    REQUIRE(admd::admd_efficient(img, cell) == admd::admd_efficient(shifted, cell));
    REQUIRE(admd::admd_naive(img, cell) == admd::admd_naive(shifted, cell));
  }
}

TEST_CASE("gain scales aagd/admd quadratically and keeps the argmax", "[detectors]") {
  std::mt19937_64 eng(818);
  for (int i = 0; i < 15; ++i) {
    const GrayImage img = oracle::random_image(eng(), 33, 29);
    for (float a : {0.5f, 2.0f, 4.0f}) {  // powers of two scale exactly
      const GrayImage scaled = scale_image(img, a);
      const GrayImage base = admd::admd_efficient(img, 3);
      const GrayImage got = admd::admd_efficient(scaled, 3);
      REQUIRE(got == scale_image(base, a * a));
      const GrayImage ab = admd::aagd(img, 3);
      const GrayImage ag = admd::aagd(scaled, 3);
      REQUIRE(ag == scale_image(ab, a * a));
      REQUIRE(argmax(got) == argmax(base));
    }
    const GrayImage scaled = scale_image(img, 1.7f);
    REQUIRE(argmax(admd::admd_efficient(scaled, 3)) ==
            argmax(admd::admd_efficient(img, 3)));
  }
}

TEST_CASE("directional responses agree at the center of an isotropic target",
          "[detectors]") {
  const float amplitude = 13.0f;
  GrayImage img(15, 15, 0.0f);
  for (int y = 5; y < 10; ++y)
    for (int x = 5; x < 10; ++x) img.at(y, x) = amplitude;
  const int cell = 5;
  const admd::CellMeans cm = admd::cell_means(img, cell);
  const double m0 = cm.m[0].at(7, 7);
  for (int k = 1; k <= 8; ++k) {
    const double d = m0 - cm.m[k].at(7, 7);
    CHECK(d * d == Catch::Approx(m0 * m0).epsilon(1e-6));
  }
  // the min fusion does not reduce the center response
  CHECK(admd::admd_efficient(img, cell).at(7, 7) ==
        Catch::Approx(amplitude * amplitude).epsilon(1e-6));
}

TEST_CASE("multiscale fusion", "[detectors]") {
  auto det = [](const GrayImage& i, int c) { return admd::admd_efficient(i, c); };
  const GrayImage img = oracle::random_image(42, 40, 40);
  SECTION("a single-scale set reproduces the detector") {
    CHECK(admd::multiscale(det, img, admd::ScaleSet({5})) == det(img, 5));
  }
  SECTION("the fusion dominates every single scale") {
    const admd::ScaleSet scales;  // default 3,5,7,9
    const GrayImage fused = admd::multiscale(det, img, scales);
    for (int c : scales.cells) {
      const GrayImage single = det(img, c);
      for (std::size_t j = 0; j < fused.size(); ++j)
        REQUIRE(fused.data[j] >= single.data[j]);
    }
  }
  SECTION("detector errors propagate") {
    const GrayImage small(10, 10, 0.0f);
    CHECK_THROWS_AS(admd::multiscale(det, small, admd::ScaleSet({9})),
                    std::invalid_argument);
  }
}

TEST_CASE("admd outputs are non-negative and finite", "[detectors]") {
  std::mt19937_64 eng(919);
  auto det = [](const GrayImage& i, int c) { return admd::admd_efficient(i, c); };
  for (int i = 0; i < 10; ++i) {
    const GrayImage img = oracle::random_image(eng(), 36, 30, -100.0f, 400.0f);
    const GrayImage out = admd::multiscale(det, img, admd::ScaleSet{});
    for (float v : out.data) {
      REQUIRE(v >= 0.0f);
      REQUIRE(std::isfinite(v));
    }
  }
}

TEST_CASE("tophat", "[detectors]") {
  SECTION("constant image gives zero") {
    const GrayImage c(10, 10, 4.0f);
    for (float v : admd::tophat(c, 3).data) CHECK(v == 0.0f);
  }
  SECTION("isolated spike is recovered at full amplitude") {
    GrayImage img(7, 7, 1.0f);
    img.at(3, 3) = 11.0f;
    const GrayImage out = admd::tophat(img, 3);
    CHECK(out.at(3, 3) == 10.0f);
  }
  SECTION("plateau wider than the element vanishes in its interior") {
    GrayImage img(20, 20, 0.0f);
    for (int y = 5; y < 15; ++y)
      for (int x = 5; x < 15; ++x) img.at(y, x) = 50.0f;
    const GrayImage out = admd::tophat(img, 5);
    for (int y = 8; y < 12; ++y)
      for (int x = 8; x < 12; ++x) CHECK(out.at(y, x) == 0.0f);
  }
  SECTION("even element side throws") {
    CHECK_THROWS_AS(admd::tophat(GrayImage(8, 8, 0.0f), 4), std::invalid_argument);
  }
}

TEST_CASE("ms_log", "[detectors]") {
  SECTION("twelve sigmas, geometric") {
    const auto s = admd::ms_log_sigmas();
    REQUIRE(s.size() == 12);
    CHECK(s[0] == 1.0);
    for (std::size_t i = 1; i < s.size(); ++i)
      CHECK(s[i] == Catch::Approx(s[i - 1] * 1.26));
  }
  SECTION("constant image maps to zero") {
    const GrayImage c(40, 32, 123.0f);
    for (float v : admd::ms_log(c).data) CHECK(v <= 1e-6f);
  }
  SECTION("a Gaussian blob peaks at its center") {
    const int n = 64;
    GrayImage img(n, n, 10.0f);
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const double d2 = (y - 30) * (y - 30) + (x - 34) * (x - 34);
        img.at(y, x) += static_cast<float>(80.0 * std::exp(-0.5 * d2 / 4.0));
      }
    const GrayImage out = admd::ms_log(img);
    const std::size_t peak = argmax(out);
    CHECK(peak / n == 30);
    CHECK(peak % n == 34);
  }
}
