#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "admd/image.hpp"
#include "admd/parallel.hpp"

namespace admd {

/// One benchmarkable configuration: a named detector closed over its
/// scale settings.
struct BenchAlgo {
  std::string name;
  std::string scales;
  std::function<GrayImage(const GrayImage&)> run;
};

struct BenchEntry {
  std::string algorithm;
  std::string scales;
  int width = 0;
  int height = 0;
  int reps = 0;
  double mean_ms = 0.0;
  double std_ms = 0.0;
  double min_ms = 0.0;
  double checksum = 0.0;
};

struct BenchFailure {
  std::string algorithm;
  std::string message;
};

struct BenchReport {
  std::vector<BenchEntry> entries;
  std::vector<BenchFailure> failures;
};

namespace detail {

inline double checksum(const GrayImage& img) {
  double s = 0.0;
  for (float v : img.data) s += v;
  return s;
}

}  // namespace detail

/// Times each algorithm over `reps` full invocations after `warmups`
/// untimed runs. Timing is single-threaded unless `parallel` is set, so
/// ratios isolate algorithmic cost. Every run's output is checksummed;
/// a checksum drift or a per-algorithm error is recorded as a failure
/// instead of aborting the suite.
inline BenchReport run_bench(const std::vector<BenchAlgo>& algorithms,
                             const GrayImage& img, int reps, int warmups = 3,
                             bool parallel = false) {
  if (reps < 1) throw std::invalid_argument("run_bench: reps must be >= 1");
  if (warmups < 0) throw std::invalid_argument("run_bench: negative warmups");
  par::ThreadCapGuard cap(parallel ? 0 : 1);
  BenchReport report;
  for (const auto& algo : algorithms) {
    try {
      bool have_ref = false;
      double ref = 0.0;
      auto check = [&](const GrayImage& out) {
        const double c = detail::checksum(out);
        if (!have_ref) {
          ref = c;
          have_ref = true;
        } else if (c != ref) {
          throw std::runtime_error("checksum drift across runs");
        }
        return c;
      };
      for (int i = 0; i < warmups; ++i) check(algo.run(img));
      std::vector<double> ms(reps);
      for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        const GrayImage out = algo.run(img);
        const auto t1 = std::chrono::steady_clock::now();
        check(out);
        ms[i] = std::chrono::duration<double, std::milli>(t1 - t0).count();
      }
      double mean = 0.0;
      double mn = ms[0];
      for (double t : ms) {
        mean += t;
        mn = std::min(mn, t);
      }
      mean /= reps;
      double var = 0.0;
      for (double t : ms) var += (t - mean) * (t - mean);
      const double sd = std::sqrt(var / reps);
      report.entries.push_back(BenchEntry{algo.name, algo.scales, img.width,
                                          img.height, reps, mean, sd, mn, ref});
    } catch (const std::exception& e) {
      report.failures.push_back(BenchFailure{algo.name, e.what()});
    }
  }
  return report;
}

inline void write_csv(std::ostream& os, const BenchReport& report) {
  os << "algorithm,scales,width,height,reps,mean_ms,std_ms,min_ms\n";
  for (const auto& e : report.entries)
    os << e.algorithm << ",\"" << e.scales << "\"," << e.width << ','
       << e.height << ',' << e.reps << ',' << e.mean_ms << ',' << e.std_ms
       << ',' << e.min_ms << '\n';
}

inline void write_table(std::ostream& os, const BenchReport& report) {
  os << std::left << std::setw(12) << "algorithm" << std::setw(12) << "scales"
     << std::right << std::setw(8) << "width" << std::setw(8) << "height"
     << std::setw(6) << "reps" << std::setw(12) << "mean_ms" << std::setw(12)
     << "std_ms" << std::setw(12) << "min_ms" << '\n';
  for (const auto& e : report.entries) {
    os << std::left << std::setw(12) << e.algorithm << std::setw(12)
       << e.scales << std::right << std::setw(8) << e.width << std::setw(8)
       << e.height << std::setw(6) << e.reps << std::fixed
       << std::setprecision(3) << std::setw(12) << e.mean_ms << std::setw(12)
       << e.std_ms << std::setw(12) << e.min_ms << '\n';
    os.unsetf(std::ios::fixed);
  }
  for (const auto& f : report.failures)
    os << f.algorithm << ": FAILED (" << f.message << ")\n";
}

}  // namespace admd
