#include "aol/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "aol/error.hpp"

namespace aol {

namespace {

using nlohmann::json;

std::size_t read_count(const json& v, const char* key) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    fail(ErrorCode::ConfigError, fmt::format("'{}' must be a non-negative integer", key));
  return v.get<std::size_t>();
}

ComponentSpec read_component(const json& v, const char* kind, bool allow_online) {
  ComponentSpec c;
  if (v.is_string()) {
    c.name = v.get<std::string>();
    return c;
  }
  if (!v.is_object()) fail(ErrorCode::ConfigError, fmt::format("{} entries must be names or objects", kind));
  for (const auto& [key, value] : v.items()) {
    if (key == "name" && value.is_string()) {
      c.name = value.get<std::string>();
    } else if (key == "label" && value.is_string()) {
      c.label = value.get<std::string>();
    } else if (key == "params" && (value.is_object() || value.is_null())) {
      c.params = value.is_null() ? json::object() : value;
    } else if (key == "online" && allow_online && value.is_boolean()) {
      c.online = value.get<bool>();
    } else if (key == "name" || key == "label" || key == "params" || (key == "online" && allow_online)) {
      fail(ErrorCode::ConfigError, fmt::format("{} entry: '{}' has the wrong type", kind, key));
    } else {
      fail(ErrorCode::ConfigError, fmt::format("{} entry: unknown key '{}'", kind, key));
    }
  }
  if (c.name.empty()) fail(ErrorCode::ConfigError, fmt::format("{} entry is missing 'name'", kind));
  return c;
}

std::vector<ComponentSpec> read_components(const json& v, const char* key, bool allow_online) {
  if (!v.is_array()) fail(ErrorCode::ConfigError, fmt::format("'{}' must be an array", key));
  std::vector<ComponentSpec> out;
  for (const auto& item : v) out.push_back(read_component(item, key, allow_online));
  return out;
}

std::vector<ComponentSpec> named(const std::vector<std::string>& names) {
  std::vector<ComponentSpec> out;
  for (const auto& n : names) out.push_back(ComponentSpec{n, "", json::object(), true});
  return out;
}

}  // namespace

std::vector<std::string> split_list(std::string_view csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = csv.find(',', start);
    std::string_view item = csv.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

ExperimentConfig parse_config_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ConfigError, fmt::format("malformed JSON at byte {}: {}", e.byte, e.what()));
  }
  if (!doc.is_object()) fail(ErrorCode::ConfigError, "config must be a JSON object");

  ExperimentConfig c;
  for (const auto& [key, value] : doc.items()) {
    if (key == "n_samples") {
      c.n_samples = read_count(value, "n_samples");
    } else if (key == "n_pretrain") {
      c.n_pretrain = read_count(value, "n_pretrain");
    } else if (key == "n_rounds") {
      c.n_rounds = read_count(value, "n_rounds");
    } else if (key == "seed") {
      if (!value.is_number_integer()) fail(ErrorCode::ConfigError, "'seed' must be an integer");
      c.seed = value.is_number_unsigned() ? value.get<std::uint64_t>() : static_cast<std::uint64_t>(value.get<long long>());
    } else if (key == "out_dir") {
      if (!value.is_string()) fail(ErrorCode::ConfigError, "'out_dir' must be a string");
      c.out_dir = value.get<std::string>();
    } else if (key == "models") {
      c.models = read_components(value, "models", true);
    } else if (key == "streams") {
      c.streams = read_components(value, "streams", false);
    } else if (key == "strategy") {
      c.strategy = read_component(value, "strategy", false);
    } else {
      fail(ErrorCode::ConfigError, fmt::format("unknown config key '{}'", key));
    }
  }
  return c;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ConfigError, "cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

void apply_overrides(ExperimentConfig& c, const ConfigOverrides& o) {
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.seed) c.seed = *o.seed;
  if (o.n_samples) c.n_samples = *o.n_samples;
  if (o.n_pretrain) c.n_pretrain = *o.n_pretrain;
  if (o.n_rounds) c.n_rounds = *o.n_rounds;
  if (o.models) c.models = named(*o.models);
  if (o.streams) c.streams = named(*o.streams);
  if (o.strategy) c.strategy = ComponentSpec{*o.strategy, "", json::object(), true};
}

namespace {

json component_to_json(const ComponentSpec& c, bool with_online) {
  json j{{"name", c.name}, {"params", c.params}};
  if (!c.label.empty()) j["label"] = c.label;
  if (with_online && !c.online) j["online"] = false;
  return j;
}

}  // namespace

json config_to_json(const ExperimentConfig& c, bool include_out_dir) {
  json j{{"n_samples", c.n_samples}, {"n_pretrain", c.n_pretrain}, {"n_rounds", c.n_rounds}, {"seed", c.seed}};
  j["models"] = json::array();
  for (const auto& m : c.models) j["models"].push_back(component_to_json(m, true));
  j["streams"] = json::array();
  for (const auto& s : c.streams) j["streams"].push_back(component_to_json(s, false));
  j["strategy"] = component_to_json(c.strategy, false);
  if (include_out_dir) j["out_dir"] = c.out_dir;
  return j;
}

ExperimentConfig parse_config(const std::optional<std::filesystem::path>& file, const ConfigOverrides& overrides) {
  ExperimentConfig c = file ? load_config_file(*file) : ExperimentConfig{};
  apply_overrides(c, overrides);
  finalize_config(c);
  return c;
}

void finalize_config(ExperimentConfig& c) {
  if (c.out_dir.empty())
    if (const char* env = std::getenv("AWESOME_OL_OUT"); env && *env) c.out_dir = env;
  c.validate();
  if (c.out_dir.empty()) fail(ErrorCode::ConfigError, "out_dir is required (config, --out or AWESOME_OL_OUT)");
}

}  // namespace aol
