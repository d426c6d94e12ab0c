#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "awesome_ol.h"

#include "aol/app.hpp"
#include "aol/config.hpp"
#include "aol/error.hpp"
#include "aol/registry.hpp"

struct aol_config {
  aol::ExperimentConfig config;
};

struct aol_run {
  aol::RunOutcome outcome;
  std::size_t failed = 0;
};

struct aol_learner {
  aol::LearnerPtr learner;
};

struct aol_stream {
  aol::StreamPtr stream;
};

struct aol_detector {
  std::unique_ptr<aol::DriftDetector> detector;
};

namespace {

thread_local std::string last_error;

aol_status code_of(aol::ErrorCode c) {
  using aol::ErrorCode;
  switch (c) {
    case ErrorCode::InvalidPretrain: return AOL_ERR_INVALID_PRETRAIN;
    case ErrorCode::MissingLabel: return AOL_ERR_MISSING_LABEL;
    case ErrorCode::SchemaError: return AOL_ERR_SCHEMA;
    case ErrorCode::NotFitted: return AOL_ERR_NOT_FITTED;
    case ErrorCode::Unsupported: return AOL_ERR_UNSUPPORTED;
    case ErrorCode::NumericError: return AOL_ERR_NUMERIC;
    case ErrorCode::ParseError: return AOL_ERR_PARSE;
    case ErrorCode::InvalidArgument: return AOL_ERR_INVALID_ARGUMENT;
    case ErrorCode::RegistryError: return AOL_ERR_REGISTRY;
    case ErrorCode::ConfigError: return AOL_ERR_CONFIG;
    case ErrorCode::EmptySeries: return AOL_ERR_EMPTY_SERIES;
    case ErrorCode::IoError: return AOL_ERR_IO;
  }
  return AOL_ERR_INTERNAL;
}

template <typename F>
aol_status guarded(F&& body) {
  try {
    body();
    return AOL_OK;
  } catch (const aol::Error& e) {
    last_error = e.what();
    return code_of(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return AOL_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return AOL_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) aol::fail(aol::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

aol::Params parse_params(const char* json) {
  if (!json || !*json) return aol::Params::object();
  try {
    return aol::Params::parse(json);
  } catch (const aol::Params::parse_error& e) {
    aol::fail(aol::ErrorCode::ConfigError, std::string("malformed parameter JSON: ") + e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::size_t parse_count(const char* key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty() || v.front() == '-')
    aol::fail(aol::ErrorCode::ConfigError, std::string(key) + " expects a non-negative integer, got '" + v + "'");
  return static_cast<std::size_t>(n);
}

aol::Instance make_instance(const double* features, std::size_t n_features) {
  aol::Instance x;
  x.features.assign(features, features + n_features);
  return x;
}

void attach_label(aol::Instance& x, const aol::StreamSchema& schema, double label) {
  if (schema.is_classification()) {
    if (label != static_cast<double>(static_cast<aol::ClassId>(label)))
      aol::fail(aol::ErrorCode::SchemaError, "class label must be an integer");
    x.label = static_cast<aol::ClassId>(label);
  } else {
    x.target = label;
  }
}

}  // namespace

extern "C" {

const char* aol_version(void) { return "0.1.0"; }

const char* aol_status_name(aol_status status) {
  switch (status) {
    case AOL_OK: return "OK";
    case AOL_END_OF_STREAM: return "EndOfStream";
    case AOL_ERR_INVALID_PRETRAIN: return "InvalidPretrain";
    case AOL_ERR_MISSING_LABEL: return "MissingLabel";
    case AOL_ERR_SCHEMA: return "SchemaError";
    case AOL_ERR_NOT_FITTED: return "NotFitted";
    case AOL_ERR_UNSUPPORTED: return "Unsupported";
    case AOL_ERR_NUMERIC: return "NumericError";
    case AOL_ERR_PARSE: return "ParseError";
    case AOL_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case AOL_ERR_REGISTRY: return "RegistryError";
    case AOL_ERR_CONFIG: return "ConfigError";
    case AOL_ERR_EMPTY_SERIES: return "EmptySeries";
    case AOL_ERR_IO: return "IoError";
    case AOL_ERR_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

const char* aol_last_error(void) { return last_error.c_str(); }

void aol_string_free(char* s) { std::free(s); }

// Config --------------------------------------------------------------------------

aol_status aol_config_new(aol_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new aol_config{};
  });
}

aol_status aol_config_from_json(const char* json, aol_config** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    auto c = std::make_unique<aol_config>();
    c->config = aol::parse_config_json(json);
    *out = c.release();
  });
}

aol_status aol_config_from_file(const char* path, aol_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto c = std::make_unique<aol_config>();
    c->config = aol::load_config_file(path);
    *out = c.release();
  });
}

void aol_config_free(aol_config* config) { delete config; }

aol_status aol_config_set(aol_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    const std::string k = key, v = value;
    aol::ConfigOverrides o;
    if (k == "out_dir")
      o.out_dir = v;
    else if (k == "seed")
      o.seed = parse_count("seed", v);
    else if (k == "n_samples")
      o.n_samples = parse_count("n_samples", v);
    else if (k == "n_pretrain")
      o.n_pretrain = parse_count("n_pretrain", v);
    else if (k == "n_rounds")
      o.n_rounds = parse_count("n_rounds", v);
    else if (k == "models")
      o.models = aol::split_list(v);
    else if (k == "streams")
      o.streams = aol::split_list(v);
    else if (k == "strategy")
      o.strategy = v;
    else
      aol::fail(aol::ErrorCode::ConfigError, "unknown config key '" + k + "'");
    aol::apply_overrides(config->config, o);
  });
}

aol_status aol_config_finalize(aol_config* config) {
  return guarded([&] {
    require(config, "config");
    aol::finalize_config(config->config);
    aol::resolve(config->config);
  });
}

aol_status aol_config_to_json(const aol_config* config, char** json_out) {
  return guarded([&] {
    require(config, "config");
    require(json_out, "json_out");
    *json_out = dup_string(aol::config_to_json(config->config, true).dump(2));
  });
}

// Run -------------------------------------------------------------------------------

aol_status aol_run_experiment(const aol_config* config, size_t parallelism, aol_run** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    auto run = std::make_unique<aol_run>();
    run->outcome = aol::run_experiment_to_dir(config->config, parallelism);
    for (const auto& r : run->outcome.results) run->failed += r.status == aol::JobStatus::Failed ? 1 : 0;
    *out = run.release();
  });
}

int aol_run_exit_code(const aol_run* run) { return run ? run->outcome.exit_code : 2; }
const char* aol_run_summary(const aol_run* run) { return run ? run->outcome.summary_text.c_str() : ""; }
size_t aol_run_job_count(const aol_run* run) { return run ? run->outcome.results.size() : 0; }
size_t aol_run_failed_count(const aol_run* run) { return run ? run->failed : 0; }
void aol_run_free(aol_run* run) { delete run; }

const char* aol_list_components(void) {
  static const std::string text = aol::list_components();
  return text.c_str();
}

aol_status aol_compare(const char* const* record_files, size_t n_files, const char* out_svg, size_t window,
                       char** summary_out) {
  return guarded([&] {
    require(out_svg, "out_svg");
    if (n_files > 0) require(record_files, "record_files");
    std::vector<std::filesystem::path> files;
    for (size_t i = 0; i < n_files; ++i) {
      require(record_files[i], "record file");
      files.emplace_back(record_files[i]);
    }
    std::string table = aol::compare_records(files, out_svg, window);
    if (summary_out) *summary_out = dup_string(table);
  });
}

// Learners -----------------------------------------------------------------------------

aol_status aol_learner_new(const char* name, const char* params_json, size_t n_features, size_t n_classes,
                           uint64_t seed, aol_learner** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    const auto schema = n_classes == 0 ? aol::StreamSchema::regression(n_features)
                                       : aol::StreamSchema::classification(n_features, n_classes);
    auto h = std::make_unique<aol_learner>();
    h->learner = aol::make_learner(name, schema, parse_params(params_json), seed);
    *out = h.release();
  });
}

void aol_learner_free(aol_learner* learner) { delete learner; }

aol_status aol_learner_fit(aol_learner* learner, const double* features, const double* labels, size_t n_rows,
                           size_t n_features) {
  return guarded([&] {
    require(learner, "learner");
    if (n_rows > 0) {
      require(features, "features");
      require(labels, "labels");
    }
    const auto& schema = learner->learner->schema();
    std::vector<aol::Instance> batch;
    batch.reserve(n_rows);
    for (size_t i = 0; i < n_rows; ++i) {
      aol::Instance x = make_instance(features + i * n_features, n_features);
      x.index = i;
      attach_label(x, schema, labels[i]);
      batch.push_back(std::move(x));
    }
    learner->learner->fit(batch);
  });
}

aol_status aol_learner_partial_fit(aol_learner* learner, const double* features, size_t n_features, double label) {
  return guarded([&] {
    require(learner, "learner");
    require(features, "features");
    aol::Instance x = make_instance(features, n_features);
    attach_label(x, learner->learner->schema(), label);
    learner->learner->partial_fit(x);
  });
}

aol_status aol_learner_predict(const aol_learner* learner, const double* features, size_t n_features, double* out) {
  return guarded([&] {
    require(learner, "learner");
    require(features, "features");
    require(out, "out");
    *out = learner->learner->predict(make_instance(features, n_features)).value;
  });
}

aol_status aol_learner_predict_proba(const aol_learner* learner, const double* features, size_t n_features,
                                     double* proba, size_t n_classes) {
  return guarded([&] {
    require(learner, "learner");
    require(features, "features");
    require(proba, "proba");
    const auto p = learner->learner->predict_proba(make_instance(features, n_features));
    if (n_classes != p.size())
      aol::fail(aol::ErrorCode::InvalidArgument, "proba buffer holds " + std::to_string(n_classes) + " entries, learner has " +
                                                     std::to_string(p.size()) + " classes");
    std::copy(p.begin(), p.end(), proba);
  });
}

aol_status aol_learner_n_seen(const aol_learner* learner, size_t* out) {
  return guarded([&] {
    require(learner, "learner");
    require(out, "out");
    *out = learner->learner->n_seen();
  });
}

// Streams --------------------------------------------------------------------------------

aol_status aol_stream_new(const char* name, const char* params_json, uint64_t seed, aol_stream** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    auto h = std::make_unique<aol_stream>();
    h->stream = aol::make_stream(name, parse_params(params_json), seed);
    *out = h.release();
  });
}

void aol_stream_free(aol_stream* stream) { delete stream; }

aol_status aol_stream_shape(const aol_stream* stream, size_t* n_features, size_t* n_classes) {
  return guarded([&] {
    require(stream, "stream");
    const auto& s = stream->stream->schema();
    if (n_features) *n_features = s.n_features;
    if (n_classes) *n_classes = s.n_classes();
  });
}

aol_status aol_stream_next(aol_stream* stream, double* features, size_t n_features, double* label, size_t* index) {
  bool ended = false;
  const aol_status st = guarded([&] {
    require(stream, "stream");
    require(features, "features");
    const auto& schema = stream->stream->schema();
    if (n_features != schema.n_features)
      aol::fail(aol::ErrorCode::InvalidArgument, "feature buffer holds " + std::to_string(n_features) + " entries, stream has " +
                                                     std::to_string(schema.n_features));
    auto x = stream->stream->next();
    if (!x) {
      ended = true;
      return;
    }
    std::copy(x->features.begin(), x->features.end(), features);
    if (label) *label = x->label ? static_cast<double>(*x->label) : x->target.value_or(0.0);
    if (index) *index = x->index;
  });
  return st == AOL_OK && ended ? AOL_END_OF_STREAM : st;
}

// Detectors ---------------------------------------------------------------------------------

aol_status aol_detector_new(const char* name, const char* params_json, aol_detector** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    auto h = std::make_unique<aol_detector>();
    h->detector = aol::make_detector(name, parse_params(params_json));
    *out = h.release();
  });
}

void aol_detector_free(aol_detector* detector) { delete detector; }

aol_status aol_detector_update(aol_detector* detector, double value, aol_drift_level* level) {
  return guarded([&] {
    require(detector, "detector");
    const auto l = detector->detector->update(value);
    if (level) *level = static_cast<aol_drift_level>(static_cast<int>(l));
  });
}

aol_status aol_detector_reset(aol_detector* detector) {
  return guarded([&] {
    require(detector, "detector");
    detector->detector->reset();
  });
}

}  // extern "C"
