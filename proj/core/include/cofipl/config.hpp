#pragma once

#include "cofipl/pipeline.hpp"
#include "cofipl/synth.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cofipl::config {

/// Parsed "key = value" text. '#' starts a comment, "[section]" prefixes the
/// following keys with "section.". Later assignments override earlier ones.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::string_view text);
KeyValues load_key_values(const std::filesystem::path& path);

/// Scene description used by the `synth` subcommand.
struct SceneConfig {
  int p = 31;
  double rho = 0.9;
  double sigma = 1.0;
  std::string texture = "gaussian";  ///< "gaussian" or "gamma:<shape>"
  double phase_step = 0.3;           ///< base phase increment per image (rad)
  double row_rate = 0.0;             ///< ramp slope per image per row (rad)
  double col_rate = 0.0;             ///< ramp slope per image per column (rad)
  int rows = 128;
  int cols = 128;
  std::uint64_t seed = 1;

  synth::SceneModel model() const;
};

/// Every key understood by apply_run_key, in a stable order.
const std::vector<std::string>& run_keys();
const std::vector<std::string>& scene_keys();

void apply_run_key(pipeline::RunConfig& cfg, std::string_view key, std::string_view value);
void apply_scene_key(SceneConfig& cfg, std::string_view key, std::string_view value);

/// Applies every key; keys outside `run_keys()` and `scene_keys()` are
/// rejected, scene keys are ignored.
pipeline::RunConfig run_config_from(const KeyValues& kv, pipeline::RunConfig base = {});
SceneConfig scene_config_from(const KeyValues& kv, SceneConfig base = {});

/// Key/value echo of a configuration (round-trips through run_config_from).
std::vector<std::pair<std::string, std::string>> to_key_values(const pipeline::RunConfig& cfg);
std::vector<std::pair<std::string, std::string>> to_key_values(const SceneConfig& cfg);

std::string format_key_values(const std::vector<std::pair<std::string, std::string>>& kv);

}  // namespace cofipl::config
