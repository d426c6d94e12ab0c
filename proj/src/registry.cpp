#include "aol/registry.hpp"

#include <set>

#include <fmt/format.h>

#include "aol/ensembles.hpp"
#include "aol/error.hpp"
#include "aol/learners.hpp"
#include "aol/streams.hpp"

namespace aol {

namespace {

/// Typed access to a parameter block that remembers which keys were read, so
/// leftovers can be reported as unknown.
class ParamReader {
 public:
  ParamReader(std::string_view owner, const Params& params) : owner_(owner), params_(params) {
    if (!params_.is_null() && !params_.is_object())
      fail(ErrorCode::ConfigError, owner_ + ": parameters must be a JSON object");
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    used_.insert(key);
    if (!params_.is_object() || !params_.contains(key)) return fallback;
    return convert<T>(key, params_.at(key));
  }

  template <typename T>
  std::optional<T> maybe(const std::string& key) {
    used_.insert(key);
    if (!params_.is_object() || !params_.contains(key) || params_.at(key).is_null()) return std::nullopt;
    return convert<T>(key, params_.at(key));
  }

  bool has(const std::string& key) const { return params_.is_object() && params_.contains(key); }

  const Params& raw(const std::string& key) {
    used_.insert(key);
    static const Params null_value;
    return has(key) ? params_.at(key) : null_value;
  }

  void finish() const {
    if (!params_.is_object()) return;
    for (const auto& [key, value] : params_.items())
      if (!used_.count(key)) fail(ErrorCode::ConfigError, fmt::format("{}: unknown parameter '{}'", owner_, key));
  }

 private:
  template <typename T>
  T convert(const std::string& key, const Params& v) const {
    try {
      if constexpr (std::is_same_v<T, std::size_t>) {
        if (!v.is_number_integer() || v.get<long long>() < 0)
          fail(ErrorCode::ConfigError, fmt::format("{}: '{}' must be a non-negative integer", owner_, key));
        return v.get<std::size_t>();
      } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_integer() || v.get<long long>() < 0)
          fail(ErrorCode::ConfigError, fmt::format("{}: '{}' must be a non-negative integer", owner_, key));
        return v.get<std::uint64_t>();
      } else if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) fail(ErrorCode::ConfigError, fmt::format("{}: '{}' must be a number", owner_, key));
        return v.get<double>();
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) fail(ErrorCode::ConfigError, fmt::format("{}: '{}' must be true or false", owner_, key));
        return v.get<bool>();
      } else {
        return v.get<T>();
      }
    } catch (const nlohmann::json::exception&) {
      fail(ErrorCode::ConfigError, fmt::format("{}: parameter '{}' has the wrong type", owner_, key));
    }
  }

  std::string owner_;
  const Params& params_;
  std::set<std::string> used_;
};

HtConfig read_tree(ParamReader& p, HtConfig d = {}) {
  HtConfig c;
  c.delta = p.get("delta", d.delta);
  c.tie_threshold = p.get("tie_threshold", d.tie_threshold);
  c.grace_period = p.get("grace_period", d.grace_period);
  c.max_depth = p.maybe<std::size_t>("max_depth");
  return c;
}

OgdConfig read_ogd(ParamReader& p, std::size_t default_hidden) {
  OgdConfig c;
  c.learning_rate = p.get("learning_rate", c.learning_rate);
  c.l2 = p.get("l2", c.l2);
  c.hidden = p.get("hidden", default_hidden);
  c.epochs = p.get("epochs", c.epochs);
  return c;
}

ForestConfig read_forest(ParamReader& p, ForestMode mode) {
  ForestConfig c;
  c.mode = mode;
  c.n_members = p.get("n_members", c.n_members);
  c.lambda = p.get("lambda", c.lambda);
  if (mode == ForestMode::Srp) c.subspace_fraction = p.get("subspace_fraction", c.subspace_fraction);
  c.tree = read_tree(p, c.tree);
  c.detector.min_n = p.get("min_n", c.detector.min_n);
  c.detector.warning_sigmas = p.get("warning_sigmas", c.detector.warning_sigmas);
  c.detector.drift_sigmas = p.get("drift_sigmas", c.detector.drift_sigmas);
  return c;
}

LearnerPtr read_base(ParamReader& p, const StreamSchema& schema, std::uint64_t seed, const Params& default_params) {
  // Trees are classification-only, so regression streams default to kNN.
  const std::string base = p.get<std::string>("base", schema.is_classification() ? "HoeffdingTree" : "KNN");
  const Params& given = p.raw("base_params");
  const Params& params = given.is_null() && base == "HoeffdingTree" ? default_params : given;
  return make_learner(base, schema, params, seed);
}

std::vector<ModelEntry> build_models() {
  std::vector<ModelEntry> m;
  m.push_back({"MajorityClass", {true, true, false, false}, "majority-class baseline",
               [](const StreamSchema& s, const Params& params, std::uint64_t) -> LearnerPtr {
                 ParamReader p("MajorityClass", params);
                 p.finish();
                 return std::make_unique<MajorityClass>(s);
               }});
  m.push_back({"OGD", {true, true, false, false}, "softmax regression by online gradient descent",
               [](const StreamSchema& s, const Params& params, std::uint64_t seed) -> LearnerPtr {
                 ParamReader p("OGD", params);
                 auto c = read_ogd(p, 0);
                 p.finish();
                 return std::make_unique<OgdLearner>(s, c, seed);
               }});
  m.push_back({"MLP", {true, true, false, false}, "one tanh hidden layer, online gradient descent",
               [](const StreamSchema& s, const Params& params, std::uint64_t seed) -> LearnerPtr {
                 ParamReader p("MLP", params);
                 auto c = read_ogd(p, 16);
                 p.finish();
                 return std::make_unique<OgdLearner>(s, c, seed);
               }});
  m.push_back({"KNN", {true, true, true, false}, "sliding-window k nearest neighbours",
               [](const StreamSchema& s, const Params& params, std::uint64_t) -> LearnerPtr {
                 ParamReader p("KNN", params);
                 KnnConfig c;
                 c.k = p.get("k", c.k);
                 c.capacity = p.get("capacity", c.capacity);
                 p.finish();
                 return std::make_unique<KnnLearner>(s, c);
               }});
  m.push_back({"HoeffdingTree", {true, true, false, false}, "Hoeffding tree, Gaussian split estimators",
               [](const StreamSchema& s, const Params& params, std::uint64_t) -> LearnerPtr {
                 ParamReader p("HoeffdingTree", params);
                 auto c = read_tree(p);
                 p.finish();
                 return std::make_unique<HoeffdingTree>(s, c);
               }});
  m.push_back({"OzaBagging", {true, true, true, false}, "online bagging with Poisson(lambda) weights",
               [](const StreamSchema& s, const Params& params, std::uint64_t seed) -> LearnerPtr {
                 ParamReader p("OzaBagging", params);
                 BaggingConfig c;
                 c.n_members = p.get("n_members", c.n_members);
                 c.lambda = p.get("lambda", c.lambda);
                 auto base = read_base(p, s, seed, Params());
                 p.finish();
                 return std::make_unique<OzaBagging>(*base, c, seed);
               }});
  m.push_back({"ARF", {true, true, false, true}, "adaptive random forest, DDM warning/drift per tree",
               [](const StreamSchema& s, const Params& params, std::uint64_t seed) -> LearnerPtr {
                 ParamReader p("ARF", params);
                 auto c = read_forest(p, ForestMode::Arf);
                 p.finish();
                 return std::make_unique<AdaptiveForest>(s, c, seed);
               }});
  m.push_back({"SRP", {true, true, false, true}, "random subspace ensemble, resampled on drift",
               [](const StreamSchema& s, const Params& params, std::uint64_t seed) -> LearnerPtr {
                 ParamReader p("SRP", params);
                 auto c = read_forest(p, ForestMode::Srp);
                 p.finish();
                 return std::make_unique<AdaptiveForest>(s, c, seed);
               }});
  m.push_back({"ChunkEnsemble", {true, true, false, true}, "chunk-weighted ensemble (MSE reference weights)",
               [](const StreamSchema& s, const Params& params, std::uint64_t seed) -> LearnerPtr {
                 ParamReader p("ChunkEnsemble", params);
                 ChunkConfig c;
                 c.chunk_size = p.get("chunk_size", c.chunk_size);
                 c.max_members = p.get("max_members", c.max_members);
                 auto base = read_base(p, s, seed, Params{{"grace_period", 50}, {"delta", 0.01}});
                 p.finish();
                 return std::make_unique<ChunkEnsemble>(*base, c, seed);
               }});
  return m;
}

SeaConfig read_sea(ParamReader& p) {
  SeaConfig c;
  c.before.threshold = p.get("theta", 8.0);
  c.before.noise_rate = p.get("noise_rate", 0.0);
  if (auto after = p.maybe<double>("theta_after")) {
    c.after = SeaConcept{*after, p.get("noise_rate_after", c.before.noise_rate)};
    auto pos = p.maybe<std::size_t>("drift_position");
    if (!pos) fail(ErrorCode::ConfigError, "sea: theta_after needs drift_position");
    c.schedule.position = *pos;
    c.schedule.width = p.get<std::size_t>("drift_width", 0);
  }
  return c;
}

std::optional<HyperplaneConcept> read_plane(ParamReader& p, const std::string& wkey, const std::string& bkey) {
  auto w = p.maybe<std::vector<double>>(wkey);
  auto b = p.maybe<double>(bkey);
  if (!w) {
    if (b) fail(ErrorCode::ConfigError, "hyperplane: " + bkey + " given without " + wkey);
    return std::nullopt;
  }
  return HyperplaneConcept{*w, b.value_or(0.0)};
}

std::vector<StreamEntry> build_streams() {
  std::vector<StreamEntry> s;
  s.push_back({"sea", "SEA concepts, 3 features on [0,10], optional abrupt/gradual drift",
               [](const Params& params, std::uint64_t seed) -> StreamPtr {
                 ParamReader p("sea", params);
                 auto c = read_sea(p);
                 p.finish();
                 return std::make_unique<SeaStream>(c, seed);
               }});
  s.push_back({"hyperplane", "hyperplane concepts on [0,1]^d, optional drift to a second plane",
               [](const Params& params, std::uint64_t seed) -> StreamPtr {
                 ParamReader p("hyperplane", params);
                 HyperplaneConfig c;
                 c.n_features = p.get("n_features", c.n_features);
                 c.noise_rate = p.get("noise_rate", c.noise_rate);
                 c.before = read_plane(p, "weights", "bias");
                 c.after = read_plane(p, "weights_after", "bias_after");
                 if (auto pos = p.maybe<std::size_t>("drift_position")) {
                   c.drift = true;
                   c.schedule.position = *pos;
                   c.schedule.width = p.get<std::size_t>("drift_width", 0);
                 }
                 if (c.before && !p.has("n_features")) c.n_features = c.before->weights.size();
                 p.finish();
                 return std::make_unique<HyperplaneStream>(c, seed);
               }});
  s.push_back({"friedman", "Friedman #1 regression, 10 features, 5 informative",
               [](const Params& params, std::uint64_t seed) -> StreamPtr {
                 ParamReader p("friedman", params);
                 FriedmanConfig c;
                 c.noise_sd = p.get("noise_sd", c.noise_sd);
                 p.finish();
                 return std::make_unique<FriedmanStream>(c, seed);
               }});
  s.push_back({"csv", "CSV file ingestion (path, label_column, has_header, shuffle_seed, task)",
               [](const Params& params, std::uint64_t) -> StreamPtr {
                 ParamReader p("csv", params);
                 CsvStreamConfig c;
                 auto path = p.maybe<std::string>("path");
                 if (!path) fail(ErrorCode::ConfigError, "csv: 'path' is required");
                 c.path = *path;
                 const Params& label = p.raw("label_column");
                 if (label.is_string())
                   c.label_column = label.get<std::string>();
                 else if (label.is_number_unsigned())
                   c.label_column = label.get<std::size_t>();
                 else if (!label.is_null())
                   fail(ErrorCode::ConfigError, "csv: label_column must be a name or a column index");
                 c.has_header = p.get("has_header", true);
                 c.shuffle_seed = p.maybe<std::uint64_t>("shuffle_seed");
                 const auto task = p.get<std::string>("task", "classification");
                 if (task == "regression")
                   c.task = TaskKind::Regression;
                 else if (task != "classification")
                   fail(ErrorCode::ConfigError, "csv: task must be 'classification' or 'regression'");
                 c.n_classes = p.maybe<std::size_t>("n_classes");
                 p.finish();
                 return std::make_unique<CsvStream>(c);
               }});
  return s;
}

std::vector<StrategyEntry> build_strategies() {
  std::vector<StrategyEntry> s;
  s.push_back({"supervised", "every label is used", [](const Params& params, std::uint64_t) -> StrategyPtr {
                 ParamReader p("supervised", params);
                 p.finish();
                 return std::make_unique<SupervisedStrategy>();
               }});
  s.push_back({"Random", "query with probability = budget", [](const Params& params, std::uint64_t seed) -> StrategyPtr {
                 ParamReader p("Random", params);
                 const double b = p.get("budget", 0.1);
                 p.finish();
                 return std::make_unique<RandomStrategy>(b, seed);
               }});
  s.push_back({"FixedUncertainty", "query when max proba <= theta, budget-gated",
               [](const Params& params, std::uint64_t) -> StrategyPtr {
                 ParamReader p("FixedUncertainty", params);
                 const double b = p.get("budget", 0.1);
                 const double theta = p.get("theta", 0.9);
                 p.finish();
                 return std::make_unique<FixedUncertaintyStrategy>(b, theta);
               }});
  s.push_back({"VariableUncertainty", "adaptive uncertainty threshold, budget-gated",
               [](const Params& params, std::uint64_t) -> StrategyPtr {
                 ParamReader p("VariableUncertainty", params);
                 const double b = p.get("budget", 0.1);
                 const double theta = p.get("theta", 1.0);
                 const double step = p.get("step", 0.01);
                 p.finish();
                 return std::make_unique<VariableUncertaintyStrategy>(b, theta, step);
               }});
  return s;
}

std::vector<DetectorEntry> build_detectors() {
  std::vector<DetectorEntry> d;
  d.push_back({"DDM", "error-rate detector with warning (2 sigma) and drift (3 sigma) levels",
               [](const Params& params) -> std::unique_ptr<DriftDetector> {
                 ParamReader p("DDM", params);
                 DdmConfig c;
                 c.min_n = p.get("min_n", c.min_n);
                 c.warning_sigmas = p.get("warning_sigmas", c.warning_sigmas);
                 c.drift_sigmas = p.get("drift_sigmas", c.drift_sigmas);
                 p.finish();
                 return std::make_unique<Ddm>(c);
               }});
  d.push_back({"PageHinkley", "cumulative deviation test for a mean increase",
               [](const Params& params) -> std::unique_ptr<DriftDetector> {
                 ParamReader p("PageHinkley", params);
                 PageHinkleyConfig c;
                 c.delta = p.get("delta", c.delta);
                 c.lambda = p.get("lambda", c.lambda);
                 c.alpha = p.get("alpha", c.alpha);
                 p.finish();
                 return std::make_unique<PageHinkley>(c);
               }});
  return d;
}

template <typename Entry>
const Entry& find_in(const std::vector<Entry>& table, std::string_view kind, std::string_view name) {
  for (const Entry& e : table)
    if (e.name == name) return e;
  std::string valid;
  for (const Entry& e : table) valid += (valid.empty() ? "" : ", ") + e.name;
  fail(ErrorCode::RegistryError, fmt::format("unknown {} '{}'; available {}s: {}", kind, name, kind, valid));
}

}  // namespace

const std::vector<ModelEntry>& model_registry() {
  static const auto table = build_models();
  return table;
}
const std::vector<StreamEntry>& stream_registry() {
  static const auto table = build_streams();
  return table;
}
const std::vector<StrategyEntry>& strategy_registry() {
  static const auto table = build_strategies();
  return table;
}
const std::vector<DetectorEntry>& detector_registry() {
  static const auto table = build_detectors();
  return table;
}

const ModelEntry& find_model(std::string_view name) { return find_in(model_registry(), "model", name); }
const StreamEntry& find_stream(std::string_view name) { return find_in(stream_registry(), "stream", name); }
const StrategyEntry& find_strategy(std::string_view name) { return find_in(strategy_registry(), "strategy", name); }
const DetectorEntry& find_detector(std::string_view name) { return find_in(detector_registry(), "detector", name); }

LearnerPtr make_learner(std::string_view name, const StreamSchema& schema, const Params& params, std::uint64_t seed) {
  const ModelEntry& e = find_model(name);
  if (!schema.is_classification() && !e.caps.supports_regression)
    fail(ErrorCode::ConfigError, fmt::format("model '{}' does not support regression streams", name));
  return e.make(schema, params, seed);
}

StreamPtr make_stream(std::string_view name, const Params& params, std::uint64_t seed) {
  return find_stream(name).make(params, seed);
}

StrategyPtr make_strategy(std::string_view name, const Params& params, std::uint64_t seed) {
  return find_strategy(name).make(params, seed);
}

std::unique_ptr<DriftDetector> make_detector(std::string_view name, const Params& params) {
  return find_detector(name).make(params);
}

std::string list_components() {
  std::string out = "models:\n";
  for (const ModelEntry& m : model_registry()) {
    std::string flags = m.caps.classification ? "classification" : "";
    if (m.caps.supports_regression) flags += flags.empty() ? "regression" : "+regression";
    flags += m.caps.supports_multiclass ? " multiclass" : " binary";
    if (m.caps.drift_adaptive) flags += " drift-adaptive";
    out += fmt::format("  {:<20} {:<44} {}\n", m.name, flags, m.description);
  }
  out += "strategies:\n";
  for (const StrategyEntry& s : strategy_registry()) out += fmt::format("  {:<20} {}\n", s.name, s.description);
  out += "streams:\n";
  for (const StreamEntry& s : stream_registry()) out += fmt::format("  {:<20} {}\n", s.name, s.description);
  out += "detectors:\n";
  for (const DetectorEntry& d : detector_registry()) out += fmt::format("  {:<20} {}\n", d.name, d.description);
  return out;
}

}  // namespace aol
