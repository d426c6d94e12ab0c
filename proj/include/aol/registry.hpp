#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "aol/drift.hpp"
#include "aol/learner.hpp"
#include "aol/strategies.hpp"
#include "aol/stream.hpp"

namespace aol {

using Params = nlohmann::json;

/// Runtime form of the method table: every component the CLI can name.
struct ModelEntry {
  std::string name;
  LearnerCaps caps;
  std::string description;
  std::function<LearnerPtr(const StreamSchema&, const Params&, std::uint64_t)> make;
};

struct StreamEntry {
  std::string name;
  std::string description;
  std::function<StreamPtr(const Params&, std::uint64_t)> make;
};

struct StrategyEntry {
  std::string name;
  std::string description;
  std::function<StrategyPtr(const Params&, std::uint64_t)> make;
};

struct DetectorEntry {
  std::string name;
  std::string description;
  std::function<std::unique_ptr<DriftDetector>(const Params&)> make;
};

const std::vector<ModelEntry>& model_registry();
const std::vector<StreamEntry>& stream_registry();
const std::vector<StrategyEntry>& strategy_registry();
const std::vector<DetectorEntry>& detector_registry();

/// Lookups throw RegistryError naming the valid choices.
const ModelEntry& find_model(std::string_view name);
const StreamEntry& find_stream(std::string_view name);
const StrategyEntry& find_strategy(std::string_view name);
const DetectorEntry& find_detector(std::string_view name);

/// Constructors throw ConfigError on unknown or ill-typed parameters.
LearnerPtr make_learner(std::string_view name, const StreamSchema& schema, const Params& params, std::uint64_t seed);
StreamPtr make_stream(std::string_view name, const Params& params, std::uint64_t seed);
StrategyPtr make_strategy(std::string_view name, const Params& params, std::uint64_t seed);
std::unique_ptr<DriftDetector> make_detector(std::string_view name, const Params& params);

/// One line per component with its capability flags, in registry order.
std::string list_components();

}  // namespace aol
