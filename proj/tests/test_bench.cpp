#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "admd/bench.hpp"
#include "admd/detectors.hpp"
#include "oracles.hpp"

using admd::BenchAlgo;
using admd::GrayImage;

namespace {

std::vector<BenchAlgo> two_algos() {
  return {
      BenchAlgo{"aagd", "3", [](const GrayImage& i) { return admd::aagd(i, 3); }},
      BenchAlgo{"admd-eff", "3",
                [](const GrayImage& i) { return admd::admd_efficient(i, 3); }},
  };
}

}  // namespace

TEST_CASE("run_bench structure", "[bench]") {
  const GrayImage img = oracle::random_image(3, 32, 24);
  const admd::BenchReport report = admd::run_bench(two_algos(), img, 1, 1);
  REQUIRE(report.entries.size() == 2);
  REQUIRE(report.failures.empty());
  for (const auto& e : report.entries) {
    CHECK(e.reps == 1);
    CHECK(e.mean_ms == e.min_ms);  // single rep
    CHECK(e.mean_ms >= 0.0);
    CHECK(e.width == 32);
    CHECK(e.height == 24);
  }
  CHECK(report.entries[0].algorithm == "aagd");
  CHECK(report.entries[1].algorithm == "admd-eff");
}

TEST_CASE("run_bench mean >= min and checksum stability", "[bench]") {
  const GrayImage img = oracle::random_image(4, 48, 40);
  const admd::BenchReport report = admd::run_bench(two_algos(), img, 5, 2);
  for (const auto& e : report.entries) {
    CHECK(e.mean_ms >= e.min_ms);
    CHECK(e.min_ms >= 0.0);
    CHECK(e.std_ms >= 0.0);
  }
  // identical algorithm list twice: identical checksums (timings aside)
  const admd::BenchReport again = admd::run_bench(two_algos(), img, 2, 0);
  for (std::size_t i = 0; i < report.entries.size(); ++i)
    CHECK(report.entries[i].checksum == again.entries[i].checksum);
}

TEST_CASE("per-entry failures do not abort the suite", "[bench]") {
  const GrayImage img = oracle::random_image(5, 10, 10);  // too small for 3x9
  std::vector<BenchAlgo> algos = two_algos();
  algos.insert(algos.begin(),
               BenchAlgo{"admd-eff-9", "9",
                         [](const GrayImage& i) { return admd::admd_efficient(i, 9); }});
  const admd::BenchReport report = admd::run_bench(algos, img, 1, 0);
  REQUIRE(report.failures.size() == 1);
  CHECK(report.failures[0].algorithm == "admd-eff-9");
  CHECK(report.entries.size() == 2);
}

TEST_CASE("run_bench restores the thread cap and validates reps", "[bench]") {
  const int before = admd::par::thread_cap_override();
  const GrayImage img = oracle::random_image(6, 16, 16);
  (void)admd::run_bench(two_algos(), img, 1, 0);
  CHECK(admd::par::thread_cap_override() == before);
  CHECK_THROWS_AS(admd::run_bench(two_algos(), img, 0), std::invalid_argument);
}

TEST_CASE("worker threads never change results", "[bench]") {
  const GrayImage img = oracle::random_image(8, 512, 520);
  GrayImage serial, threaded;
  {
    admd::par::ThreadCapGuard cap(1);
    serial = admd::admd_efficient(img, 5);
  }
  {
    admd::par::ThreadCapGuard cap(4);
    threaded = admd::admd_efficient(img, 5);
  }
  REQUIRE(serial == threaded);
  {
    admd::par::ThreadCapGuard cap(4);
    REQUIRE(admd::admd_naive(img, 3) == admd::admd_naive(img, 3));
  }
}

TEST_CASE("bench csv has the fixed column schema", "[bench]") {
  const GrayImage img = oracle::random_image(7, 20, 18);
  const admd::BenchReport report = admd::run_bench(two_algos(), img, 1, 0);
  std::ostringstream csv;
  admd::write_csv(csv, report);
  CHECK(csv.str().rfind("algorithm,scales,width,height,reps,mean_ms,std_ms,min_ms\n", 0) == 0);
  std::ostringstream table;
  admd::write_table(table, report);
  CHECK(table.str().find("aagd") != std::string::npos);
}
