#include <cstdlib>
#include <functional>
#include <optional>

#include <gtest/gtest.h>

#include "aol/config.hpp"
#include "aol/error.hpp"
#include "aol/report.hpp"
#include "test_util.hpp"

using namespace aol;
using aol::test::TempDir;

namespace {

constexpr const char* kMinimal = R"({"models":["MajorityClass"],"streams":["sea"],"n_samples":1000,"n_pretrain":100})";

std::optional<ErrorCode> code_of(const std::function<void()>& f, std::string* message = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  return std::nullopt;
}

}  // namespace

TEST(Config, MinimalFileGetsDefaults) {
  const auto c = parse_config_json(kMinimal);
  EXPECT_EQ(c.n_samples, 1000u);
  EXPECT_EQ(c.n_pretrain, 100u);
  EXPECT_EQ(c.n_rounds, 1u);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.strategy.name, "supervised");
  ASSERT_EQ(c.models.size(), 1u);
  EXPECT_EQ(c.models[0].name, "MajorityClass");
  EXPECT_TRUE(c.models[0].online);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, FlagOverridesFileValue) {
  TempDir dir("cfg");
  write_text_file(dir / "c.json", R"({"models":["KNN"],"streams":["sea"],"n_samples":500,"n_pretrain":50,"seed":1,"out_dir":"x"})");
  ConfigOverrides o;
  o.seed = 7;
  EXPECT_EQ(parse_config(dir / "c.json", o).seed, 7u);
  EXPECT_EQ(parse_config(dir / "c.json", {}).seed, 1u);
}

TEST(Config, OverridesReplaceLists) {
  auto c = parse_config_json(kMinimal);
  ConfigOverrides o;
  o.models = split_list("KNN, HoeffdingTree");
  o.streams = split_list("hyperplane");
  o.strategy = "Random";
  o.n_rounds = 3;
  apply_overrides(c, o);
  ASSERT_EQ(c.models.size(), 2u);
  EXPECT_EQ(c.models[1].name, "HoeffdingTree");
  EXPECT_EQ(c.streams[0].name, "hyperplane");
  EXPECT_EQ(c.strategy.name, "Random");
  EXPECT_EQ(c.n_rounds, 3u);
}

TEST(Config, PretrainMustBeBelowSamples) {
  std::string msg;
  auto c = parse_config_json(R"({"models":["KNN"],"streams":["sea"],"n_samples":1000,"n_pretrain":1000,"out_dir":"x"})");
  EXPECT_EQ(code_of([&] { finalize_config(c); }, &msg), ErrorCode::ConfigError);
  EXPECT_NE(msg.find("n_pretrain < n_samples"), std::string::npos);
}

TEST(Config, MalformedJsonReportsPosition) {
  std::string msg;
  EXPECT_EQ(code_of([] { parse_config_json(R"({"models": ["KNN",, "x"]})"); }, &msg), ErrorCode::ConfigError);
  // Second comma is the 19th byte (1-based).
  EXPECT_NE(msg.find("byte 19"), std::string::npos) << msg;
}

TEST(Config, UnknownKeysAreNamed) {
  std::string msg;
  EXPECT_EQ(code_of([] { parse_config_json(R"({"n_sampels": 10})"); }, &msg), ErrorCode::ConfigError);
  EXPECT_NE(msg.find("n_sampels"), std::string::npos);
  EXPECT_EQ(code_of([] { parse_config_json(R"({"models":[{"name":"KNN","parms":{}}]})"); }, &msg), ErrorCode::ConfigError);
  EXPECT_NE(msg.find("parms"), std::string::npos);
  // online is a model-only key.
  EXPECT_EQ(code_of([] { parse_config_json(R"({"streams":[{"name":"sea","online":false}]})"); }), ErrorCode::ConfigError);
}

TEST(Config, IllTypedValues) {
  for (const char* bad : {R"({"n_samples": -1})", R"({"n_samples": 1.5})", R"({"seed": "x"})", R"({"models": "KNN"})",
                          R"({"models": [{"params": {}}]})", R"({"out_dir": 3})", R"([1,2])"})
    EXPECT_EQ(code_of([&] { parse_config_json(bad); }), ErrorCode::ConfigError) << bad;
}

TEST(Config, ObjectEntriesKeepParamsLabelAndOnline) {
  const auto c = parse_config_json(
      R"({"models":[{"name":"HoeffdingTree","label":"HT-frozen","online":false,"params":{"grace_period":50}}],"streams":["sea"],"strategy":{"name":"VariableUncertainty","params":{"budget":0.2}}})");
  EXPECT_EQ(c.models[0].display(), "HT-frozen");
  EXPECT_FALSE(c.models[0].online);
  EXPECT_EQ(c.models[0].params["grace_period"], 50);
  EXPECT_EQ(c.strategy.params["budget"], 0.2);
}

TEST(Config, OutDirFallsBackToEnvironment) {
  auto c = parse_config_json(kMinimal);
  ::setenv("AWESOME_OL_OUT", "/tmp/from-env", 1);
  finalize_config(c);
  ::unsetenv("AWESOME_OL_OUT");
  EXPECT_EQ(c.out_dir, "/tmp/from-env");
  auto d = parse_config_json(kMinimal);
  EXPECT_EQ(code_of([&] { finalize_config(d); }), ErrorCode::ConfigError);
}

TEST(Config, JsonEchoRoundTrips) {
  const auto c = parse_config_json(
      R"({"models":[{"name":"KNN","params":{"k":3}},"OGD"],"streams":["sea"],"n_samples":10,"n_pretrain":2,"seed":9,"out_dir":"o"})");
  const auto again = parse_config_json(config_to_json(c, true).dump());
  EXPECT_EQ(config_to_json(again, true), config_to_json(c, true));
  EXPECT_FALSE(config_to_json(c, false).contains("out_dir"));
}

TEST(Config, SplitList) {
  EXPECT_EQ(split_list("a, b ,,c"), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(split_list("").empty());
}

TEST(Config, MissingFile) {
  EXPECT_EQ(code_of([] { load_config_file("/nonexistent/cfg.json"); }), ErrorCode::ConfigError);
}
