// Command-line front end for the ADMD small-target detection library.
//
// Subcommands: detect, eval, synth, noise-sim, bench. Results go to stdout
// (JSON or CSV), diagnostics to stderr. Exit codes: 0 success, 1 runtime or
// I/O failure, 2 usage or configuration error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "admd/admd.hpp"

namespace {

using nlohmann::json;

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

admd::ScaleSet parse_scales(const std::string& text) {
  std::vector<int> cells;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const int v = std::stoi(item);
      cells.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad scale value: " + item);
    }
  }
  return admd::ScaleSet(std::move(cells));  // validates odd / increasing
}

admd::GrayImage run_detector(const std::string& alg, const admd::GrayImage& img,
                             const admd::ScaleSet& scales) {
  if (alg == "aagd")
    return admd::multiscale([](const admd::GrayImage& i, int c) { return admd::aagd(i, c); },
                            img, scales);
  if (alg == "admd")
    return admd::multiscale(
        [](const admd::GrayImage& i, int c) { return admd::admd_naive(i, c); }, img, scales);
  if (alg == "admd-eff")
    return admd::multiscale(
        [](const admd::GrayImage& i, int c) { return admd::admd_efficient(i, c); }, img,
        scales);
  if (alg == "tophat")
    return admd::multiscale([](const admd::GrayImage& i, int c) { return admd::tophat(i, c); },
                            img, scales);
  if (alg == "mslog") return admd::ms_log(img);
  throw std::invalid_argument("unknown algorithm: " + alg);
}

struct Peak {
  int x = 0;
  int y = 0;
  float value = 0.0f;
};

Peak find_peak(const admd::GrayImage& img) {
  Peak p{0, 0, img.data[0]};
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      if (img.at(y, x) > p.value) p = Peak{x, y, img.at(y, x)};
  return p;
}

json peak_json(const Peak& p) {
  return json{{"x", p.x}, {"y", p.y}, {"value", p.value}};
}

void save_image_by_ext(const admd::GrayImage& img, const std::string& path) {
  if (admd::detail::ends_with(path, ".raw")) {
    admd::save_raw(img, path);
  } else if (admd::detail::ends_with(path, ".png")) {
    admd::save_png8(img, path);
  } else {
    auto [lo, hi] = admd::minmax(img);
    admd::save_pgm(img, path, hi > 255.0f ? 65535 : 255);
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw admd::IoError("cannot open file for writing: " + path);
  return out;
}

int cmd_detect(const std::string& input, const std::string& output,
               const std::string& alg, const std::string& scales,
               const std::string& raw_out) {
  const admd::ScaleSet ss = parse_scales(scales);
  const admd::GrayImage img = admd::load_auto(input);
  const admd::GrayImage sal = run_detector(alg, img, ss);
  admd::save_normalized(sal, output);
  if (!raw_out.empty()) admd::save_raw(sal, raw_out);
  std::cout << json{{"peak", peak_json(find_peak(sal))}}.dump() << '\n';
  return 0;
}

int cmd_eval(const std::string& input, const std::string& alg,
             const std::string& scales, const std::string& gt_path,
             const std::string& out, const std::string& raw_out,
             const std::string& curve_out, const std::string& csv_out) {
  if (!std::filesystem::exists(gt_path)) {
    std::cerr << "ground-truth file not found: " << gt_path << '\n';
    return kExitConfig;
  }
  const admd::ScaleSet ss = parse_scales(scales);
  const admd::GroundTruth gt = admd::load_ground_truth(gt_path);
  const admd::GrayImage img = admd::load_auto(input);
  const admd::GrayImage sal = run_detector(alg, img, ss);

  const std::vector<double> scr_values = admd::scr(sal, gt);
  const double bsf_value = admd::bsf(img, sal, gt);
  const admd::PfaCurve curve = admd::pfa_curve(sal, gt);
  for (double s : scr_values)
    if (std::isinf(s)) std::cerr << "warning: constant background ring, SCR is inf\n";
  if (std::isinf(bsf_value))
    std::cerr << "warning: zero non-target deviation, BSF is inf\n";

  if (!out.empty()) admd::save_normalized(sal, out);
  if (!raw_out.empty()) admd::save_raw(sal, raw_out);
  if (!curve_out.empty()) {
    auto f = open_out(curve_out);
    admd::write_csv(f, curve);
  }
  if (!csv_out.empty()) {
    auto f = open_out(csv_out);
    f << "algorithm,target_index,scr,bsf\n";
    for (std::size_t i = 0; i < scr_values.size(); ++i)
      f << alg << ',' << i << ',' << scr_values[i] << ',' << bsf_value << '\n';
  }

  json j{{"algorithm", alg},
         {"scales", scales},
         {"peak", peak_json(find_peak(sal))},
         {"scr", scr_values},
         {"bsf", bsf_value}};
  std::cout << j.dump() << '\n';
  return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& out,
              const std::string& gt_out, std::int64_t seed_flag) {
  admd::SceneSpec spec = admd::load_scene_spec(spec_path);
  if (seed_flag >= 0) spec.rng_seed = static_cast<std::uint64_t>(seed_flag);
  auto [img, gt] = admd::render(spec);
  save_image_by_ext(img, out);
  if (!gt_out.empty()) admd::save_ground_truth(gt, gt_out);
  std::cout << json{{"width", img.width},
                    {"height", img.height},
                    {"targets", gt.targets.size()},
                    {"seed", spec.rng_seed}}
                   .dump()
            << '\n';
  return 0;
}

int cmd_noise_sim(long trials, int cell, std::uint64_t seed, bool sweep,
                  const std::string& out, const std::string& format) {
  const admd::NoiseAlg algs[] = {admd::NoiseAlg::Aagd, admd::NoiseAlg::Admd,
                                 admd::NoiseAlg::AdmdPlus};
  const admd::NoiseDist dists[] = {admd::NoiseDist::Gaussian,
                                   admd::NoiseDist::Poisson,
                                   admd::NoiseDist::Rayleigh};
  std::vector<double> params;
  if (sweep)
    for (int p = 1; p <= 10; ++p) params.push_back(p);
  else
    params.push_back(3.0);

  json rows = json::array();
  std::ostringstream csv;
  csv << "algorithm,distribution,parameter,trials,mean,variance\n";
  for (auto alg : algs)
    for (auto dist : dists)
      for (double p : params) {
        const admd::NoiseSpec spec{dist, p};
        const admd::McResult r =
            admd::noise_mc_1d(alg, spec, trials, cell, 3 * cell, seed);
        csv << admd::to_string(alg) << ',' << admd::to_string(dist) << ',' << p
            << ',' << trials << ',' << r.mean << ',' << r.variance << '\n';
        rows.push_back(json{{"algorithm", admd::to_string(alg)},
                            {"distribution", admd::to_string(dist)},
                            {"parameter", p},
                            {"trials", trials},
                            {"mean", r.mean},
                            {"variance", r.variance}});
      }
  const std::string text = format == "json" ? rows.dump(2) + "\n" : csv.str();
  if (out.empty()) {
    std::cout << text;
  } else {
    open_out(out) << text;
  }
  return 0;
}

admd::GrayImage default_bench_image(std::uint64_t seed, int width, int height) {
  admd::SceneSpec spec;
  spec.width = width;
  spec.height = height;
  spec.background = 60.0f;
  spec.rng_seed = seed;
  spec.elements.push_back(
      admd::StepEdge{admd::StepEdge::Orientation::Vertical, width / 2, 160.0f});
  spec.elements.push_back(admd::GaussianTarget{width * 0.25, height * 0.5, 1.6, 90.0f});
  spec.elements.push_back(admd::GaussianTarget{width * 0.75, height * 0.3, 2.2, 70.0f});
  spec.noise = admd::NoiseSpec{admd::NoiseDist::Gaussian, 5.0};
  return admd::render(spec).first;
}

int cmd_bench(const std::string& algs_text, const std::string& scales,
              int reps, int warmups, bool parallel, const std::string& image,
              int width, int height, std::uint64_t seed,
              const std::string& out, const std::string& format) {
  const admd::ScaleSet ss = parse_scales(scales);
  const admd::GrayImage img =
      image.empty() ? default_bench_image(seed, width, height)
                    : admd::load_auto(image);

  std::vector<admd::BenchAlgo> list;
  std::stringstream as(algs_text);
  std::string name;
  while (std::getline(as, name, ',')) {
    if (name.empty()) continue;
    const std::string label = name == "mslog" ? "log12" : scales;
    list.push_back(admd::BenchAlgo{
        name, label,
        [name, ss](const admd::GrayImage& i) { return run_detector(name, i, ss); }});
  }
  if (list.empty()) throw std::invalid_argument("no algorithms selected");

  const admd::BenchReport report = admd::run_bench(list, img, reps, warmups, parallel);
  admd::write_table(std::cerr, report);
  std::ostringstream body;
  if (format == "json") {
    json rows = json::array();
    for (const auto& e : report.entries)
      rows.push_back(json{{"algorithm", e.algorithm},
                          {"scales", e.scales},
                          {"width", e.width},
                          {"height", e.height},
                          {"reps", e.reps},
                          {"mean_ms", e.mean_ms},
                          {"std_ms", e.std_ms},
                          {"min_ms", e.min_ms}});
    body << rows.dump(2) << '\n';
  } else {
    admd::write_csv(body, report);
  }
  if (out.empty()) {
    std::cout << body.str();
  } else {
    open_out(out) << body.str();
  }
  return report.failures.empty() ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ADMD small infrared target detection toolkit"};
  app.require_subcommand(1);

  std::string alg = "admd-eff";
  std::string scales = "3,5,7,9";
  std::string input, output, raw_out, gt_path, curve_out, csv_out, out_path;
  std::string spec_path, gt_out, image_path, format = "csv", algs_text;
  long trials = 100000;
  int cell = 9, reps = 100, warmups = 3, width = 5600, height = 288;
  std::int64_t seed_flag = -1;
  std::uint64_t seed = 0;
  bool sweep = false, parallel = false;

  auto* detect = app.add_subcommand("detect", "run a detector, write the saliency map");
  detect->add_option("--alg", alg, "aagd|admd|admd-eff|tophat|mslog");
  detect->add_option("--scales", scales, "comma-separated odd cell sizes");
  detect->add_option("--raw-out", raw_out, "also dump the raw float map");
  detect->add_option("input", input, "input image (PGM/PNG/raw)")->required();
  detect->add_option("output", output, "normalized 8-bit output image")->required();

  auto* eval = app.add_subcommand("eval", "run a detector and score it against ground truth");
  eval->add_option("--alg", alg, "aagd|admd|admd-eff|tophat|mslog");
  eval->add_option("--scales", scales, "comma-separated odd cell sizes");
  eval->add_option("--gt", gt_path, "ground-truth JSON")->required();
  eval->add_option("--out", out_path, "normalized saliency image");
  eval->add_option("--raw-out", raw_out, "raw float saliency dump");
  eval->add_option("--curve-out", curve_out, "false-alarm curve CSV");
  eval->add_option("--csv-out", csv_out, "per-target metrics CSV");
  eval->add_option("input", input, "input image (PGM/PNG/raw)")->required();

  auto* synth = app.add_subcommand("synth", "render a synthetic scene from a JSON spec");
  synth->add_option("--spec", spec_path, "scene spec JSON")->required();
  synth->add_option("--out", output, "output image (.pgm/.png/.raw)")->required();
  synth->add_option("--gt-out", gt_out, "ground-truth JSON to write");
  synth->add_option("--seed", seed_flag, "override the spec's RNG seed");

  auto* noise = app.add_subcommand("noise-sim", "1-D noise-response Monte Carlo grid");
  noise->add_option("--trials", trials, "trials per configuration");
  noise->add_option("--cell", cell, "cell size (background window is 3x)");
  noise->add_option("--seed", seed, "RNG seed");
  noise->add_flag("--sweep", sweep, "sweep the noise parameter over 1..10");
  noise->add_option("--out", out_path, "write results here instead of stdout");
  noise->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  auto* bench = app.add_subcommand("bench", "execution-time harness");
  bench->add_option("--algs", algs_text, "comma-separated algorithm list")
      ->default_val("aagd,admd,admd-eff,tophat,mslog");
  bench->add_option("--scales", scales, "comma-separated odd cell sizes");
  bench->add_option("--reps", reps, "timed repetitions per algorithm");
  bench->add_option("--warmups", warmups, "untimed warm-up runs");
  bench->add_flag("--parallel", parallel, "let detectors use worker threads");
  bench->add_option("--image", image_path, "benchmark image (default: generated)");
  bench->add_option("--width", width, "generated image width");
  bench->add_option("--height", height, "generated image height");
  bench->add_option("--seed", seed, "seed for the generated image");
  bench->add_option("--out", out_path, "write CSV/JSON here instead of stdout");
  bench->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (app.got_subcommand(detect))
      return cmd_detect(input, output, alg, scales, raw_out);
    if (app.got_subcommand(eval))
      return cmd_eval(input, alg, scales, gt_path, out_path, raw_out, curve_out, csv_out);
    if (app.got_subcommand(synth))
      return cmd_synth(spec_path, output, gt_out, seed_flag);
    if (app.got_subcommand(noise))
      return cmd_noise_sim(trials, cell, seed, sweep, out_path, format);
    if (app.got_subcommand(bench))
      return cmd_bench(algs_text, scales, reps, warmups, parallel, image_path,
                       width, height, seed, out_path, format);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const admd::SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
