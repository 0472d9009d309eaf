#include <catch2/catch_amalgamated.hpp>

#include "admd/image.hpp"
#include "oracles.hpp"

using admd::GrayImage;

TEST_CASE("GrayImage construction and invariants", "[image]") {
  GrayImage img(3, 2, 1.5f);
  CHECK(img.width == 3);
  CHECK(img.height == 2);
  CHECK(img.size() == 6);
  CHECK(img.at(1, 2) == 1.5f);
  CHECK_THROWS_AS(GrayImage(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(GrayImage(4, -1), std::invalid_argument);
}

TEST_CASE("clamped reads replicate the nearest edge pixel", "[image]") {
  GrayImage img(2, 2);
  img.at(0, 0) = 1.0f;
  img.at(0, 1) = 2.0f;
  img.at(1, 0) = 3.0f;
  img.at(1, 1) = 4.0f;
  CHECK(img.at_clamped(-5, -5) == 1.0f);
  CHECK(img.at_clamped(0, 7) == 2.0f);
  CHECK(img.at_clamped(9, 0) == 3.0f);
  CHECK(img.at_clamped(9, 9) == 4.0f);
}

TEST_CASE("pad replicates borders", "[image]") {
  SECTION("single pixel") {
    GrayImage img(1, 1, 7.0f);
    const GrayImage p = admd::pad(img, 1);
    REQUIRE(p.width == 3);
    REQUIRE(p.height == 3);
    for (float v : p.data) CHECK(v == 7.0f);
  }
  SECTION("margin 0 is the identity") {
    const GrayImage img = oracle::random_image(1, 5, 4);
    CHECK(admd::pad(img, 0) == img);
  }
  SECTION("2x1 image") {
    GrayImage img(2, 1);
    img.at(0, 0) = 1.0f;
    img.at(0, 1) = 2.0f;
    const GrayImage p = admd::pad(img, 1);
    REQUIRE(p.width == 4);
    REQUIRE(p.height == 3);
    for (int y = 0; y < 3; ++y) {
      CHECK(p.at(y, 0) == 1.0f);
      CHECK(p.at(y, 1) == 1.0f);
      CHECK(p.at(y, 2) == 2.0f);
      CHECK(p.at(y, 3) == 2.0f);
    }
  }
  SECTION("negative margin throws") {
    GrayImage img(2, 2);
    CHECK_THROWS_AS(admd::pad(img, -1), std::invalid_argument);
  }
}

TEST_CASE("pad then crop recovers the image exactly", "[image]") {
  std::mt19937_64 eng(99);
  for (int i = 0; i < 100; ++i) {
    const int w = 1 + static_cast<int>(eng() % 12);
    const int h = 1 + static_cast<int>(eng() % 12);
    const int m = static_cast<int>(eng() % 5);
    const GrayImage img = oracle::random_image(eng(), w, h, -10.0f, 300.0f);
    const GrayImage back = admd::crop(admd::pad(img, m), m, m, w, h);
    REQUIRE(back == img);
  }
}

TEST_CASE("pad leaves its input unmodified", "[image]") {
  const GrayImage img = oracle::random_image(5, 6, 6);
  const GrayImage copy = img;
  (void)admd::pad(img, 3);
  CHECK(img == copy);
}

TEST_CASE("crop validates its rectangle", "[image]") {
  const GrayImage img(4, 4, 0.0f);
  CHECK_THROWS_AS(admd::crop(img, 2, 2, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(admd::crop(img, -1, 0, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(admd::crop(img, 0, 0, 0, 2), std::invalid_argument);
}

TEST_CASE("minmax and all_finite", "[image]") {
  GrayImage img(2, 2, 3.0f);
  img.at(1, 1) = -2.0f;
  auto [lo, hi] = admd::minmax(img);
  CHECK(lo == -2.0f);
  CHECK(hi == 3.0f);
  CHECK(admd::all_finite(img));
  img.at(0, 1) = std::numeric_limits<float>::infinity();
  CHECK_FALSE(admd::all_finite(img));
}
