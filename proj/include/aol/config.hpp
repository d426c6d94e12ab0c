#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "aol/evaluate.hpp"

namespace aol {

/// Command-line values that replace the corresponding config-file entries.
struct ConfigOverrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_samples;
  std::optional<std::size_t> n_pretrain;
  std::optional<std::size_t> n_rounds;
  std::optional<std::vector<std::string>> models;
  std::optional<std::vector<std::string>> streams;
  std::optional<std::string> strategy;
};

/// Parses the JSON config object. Unknown keys, malformed JSON (with byte
/// position) and ill-typed values raise ConfigError. Does not validate
/// cross-field constraints.
ExperimentConfig parse_config_json(std::string_view text);
ExperimentConfig load_config_file(const std::filesystem::path& path);

void apply_overrides(ExperimentConfig& config, const ConfigOverrides& overrides);

/// File (optional) + flags + AWESOME_OL_OUT fallback, then validate().
ExperimentConfig parse_config(const std::optional<std::filesystem::path>& file, const ConfigOverrides& overrides);

/// AWESOME_OL_OUT fallback for an empty out_dir, validate(), out_dir required.
void finalize_config(ExperimentConfig& config);

std::vector<std::string> split_list(std::string_view csv);

/// Config as a JSON object in the file schema; out_dir only when asked for.
nlohmann::json config_to_json(const ExperimentConfig& config, bool include_out_dir);

}  // namespace aol
