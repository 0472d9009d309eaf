#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "admd/ground_truth.hpp"
#include "admd/image_io.hpp"
#include "admd/synth.hpp"

namespace admd {

/// Thrown for malformed JSON interchange files (ground truth, scene specs).
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline nlohmann::json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

template <typename T>
T require(const nlohmann::json& j, const char* key) {
  if (!j.contains(key))
    throw SpecError(std::string("missing key: ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SpecError(std::string("bad value for key: ") + key);
  }
}

// Accepts either of two spellings for a key ("width" / "w").
template <typename T>
T require2(const nlohmann::json& j, const char* key, const char* alias) {
  if (j.contains(key)) return require<T>(j, key);
  if (j.contains(alias)) return require<T>(j, alias);
  throw SpecError(std::string("missing key: ") + key);
}

}  // namespace detail

/// Ground-truth file format: {"targets":[{"x":..,"y":..,"w":..,"h":..}]}.
inline GroundTruth load_ground_truth(const std::string& path) {
  const nlohmann::json j = detail::parse_json_file(path);
  GroundTruth gt;
  if (!j.contains("targets") || !j.at("targets").is_array())
    throw SpecError("ground truth needs a \"targets\" array: " + path);
  for (const auto& t : j.at("targets")) {
    gt.targets.push_back(TargetBox{detail::require<int>(t, "x"),
                                   detail::require<int>(t, "y"),
                                   detail::require<int>(t, "w"),
                                   detail::require<int>(t, "h")});
  }
  return gt;
}

inline nlohmann::json to_json(const GroundTruth& gt) {
  nlohmann::json targets = nlohmann::json::array();
  for (const auto& b : gt.targets)
    targets.push_back({{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}});
  return nlohmann::json{{"targets", targets}};
}

inline void save_ground_truth(const GroundTruth& gt, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << to_json(gt).dump(2) << '\n';
  if (!out) throw IoError("write failure: " + path);
}

inline NoiseSpec noise_from_json(const nlohmann::json& j) {
  const std::string d = detail::require<std::string>(j, "dist");
  if (d == "gaussian")
    return NoiseSpec{NoiseDist::Gaussian, detail::require<double>(j, "sigma")};
  if (d == "poisson")
    return NoiseSpec{NoiseDist::Poisson, detail::require<double>(j, "lambda")};
  if (d == "rayleigh")
    return NoiseSpec{NoiseDist::Rayleigh, detail::require<double>(j, "scale")};
  throw SpecError("unknown noise distribution: " + d);
}

/// Scene file format:
/// {
///   "width": 96, "height": 96, "background": 30, "seed": 7,
///   "noise": {"dist":"gaussian","sigma":4},
///   "elements": [
///     {"type":"step","orientation":"vertical","position":48,"bright":200},
///     {"type":"gaussian","x":32,"y":40,"sigma":1.5,"amplitude":80},
///     {"type":"rect","x":10,"y":12,"w":5,"h":4,"amplitude":60}
///   ]
/// }
/// Short spellings w/h/bg are accepted; elements and noise are optional.
inline SceneSpec load_scene_spec(const std::string& path) {
  const nlohmann::json j = detail::parse_json_file(path);
  SceneSpec spec;
  spec.width = detail::require2<int>(j, "width", "w");
  spec.height = detail::require2<int>(j, "height", "h");
  spec.background = detail::require2<float>(j, "background", "bg");
  if (j.contains("seed")) spec.rng_seed = detail::require<std::uint64_t>(j, "seed");
  if (j.contains("noise") && !j.at("noise").is_null())
    spec.noise = noise_from_json(j.at("noise"));
  if (j.contains("elements")) {
    if (!j.at("elements").is_array())
      throw SpecError("\"elements\" must be an array: " + path);
    for (const auto& e : j.at("elements")) {
      const std::string type = detail::require<std::string>(e, "type");
      if (type == "step") {
        const std::string o = detail::require<std::string>(e, "orientation");
        if (o != "vertical" && o != "horizontal")
          throw SpecError("step orientation must be vertical or horizontal");
        spec.elements.push_back(
            StepEdge{o == "vertical" ? StepEdge::Orientation::Vertical
                                     : StepEdge::Orientation::Horizontal,
                     detail::require<int>(e, "position"),
                     detail::require<float>(e, "bright")});
      } else if (type == "gaussian") {
        spec.elements.push_back(GaussianTarget{
            detail::require<double>(e, "x"), detail::require<double>(e, "y"),
            detail::require<double>(e, "sigma"),
            detail::require<float>(e, "amplitude")});
      } else if (type == "rect") {
        spec.elements.push_back(RectTarget{
            TargetBox{detail::require<int>(e, "x"), detail::require<int>(e, "y"),
                      detail::require<int>(e, "w"), detail::require<int>(e, "h")},
            detail::require<float>(e, "amplitude")});
      } else {
        throw SpecError("unknown element type: " + type);
      }
    }
  }
  return spec;
}

}  // namespace admd
