#include "aol/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <thread>

#include <fmt/format.h>

#include "aol/error.hpp"

namespace aol {

void ExperimentConfig::validate() const {
  if (n_samples == 0) fail(ErrorCode::ConfigError, "n_samples must be a positive integer");
  if (!(n_pretrain < n_samples)) fail(ErrorCode::ConfigError, "constraint violated: n_pretrain < n_samples");
  if (n_rounds == 0) fail(ErrorCode::ConfigError, "n_rounds must be a positive integer");
  if (models.empty()) fail(ErrorCode::ConfigError, "at least one model is required");
  if (streams.empty()) fail(ErrorCode::ConfigError, "at least one stream is required");
  auto unique_labels = [](const std::vector<ComponentSpec>& specs, const char* what) {
    for (std::size_t i = 0; i < specs.size(); ++i)
      for (std::size_t j = i + 1; j < specs.size(); ++j)
        if (specs[i].display() == specs[j].display())
          fail(ErrorCode::ConfigError, fmt::format("duplicate {} label '{}'; set distinct 'label' values", what, specs[i].display()));
  };
  unique_labels(models, "model");
  unique_labels(streams, "stream");
  for (const auto* group : {&models, &streams})
    for (const auto& c : *group)
      if (c.display().find_first_of(",\"\r\n") != std::string::npos)
        fail(ErrorCode::ConfigError, fmt::format("label '{}' may not contain commas, quotes or newlines", c.display()));
}

std::vector<JobSpec> plan_jobs(const ExperimentConfig& config) {
  std::vector<JobSpec> jobs;
  for (std::size_t m = 0; m < config.models.size(); ++m)
    for (std::size_t s = 0; s < config.streams.size(); ++s)
      for (std::size_t r = 0; r < config.n_rounds; ++r) {
        JobSpec j;
        j.index = jobs.size();
        j.model = m;
        j.stream = s;
        j.round = r;
        const std::string stream_key = "stream:" + config.streams[s].display();
        const std::string cell_key = "model:" + config.models[m].display() + "|" + stream_key;
        j.stream_seed = derive_seed(config.seed, stream_key, r);
        j.learner_seed = derive_seed(config.seed, cell_key, r);
        j.strategy_seed = derive_seed(config.seed, "strategy|" + cell_key, r);
        jobs.push_back(j);
      }
  return jobs;
}

ResolvedJob resolve_job(const ExperimentConfig& config, const JobSpec& job) {
  const ComponentSpec& m = config.models.at(job.model);
  const ComponentSpec& s = config.streams.at(job.stream);
  ResolvedJob r;
  r.spec = job;
  r.model_name = m.display();
  r.stream_name = s.display();
  r.online = m.online;
  r.stream = make_stream(s.name, s.params, job.stream_seed);
  r.learner = make_learner(m.name, r.stream->schema(), m.params, job.learner_seed);
  r.strategy = make_strategy(config.strategy.name, config.strategy.params, job.strategy_seed);
  if (r.strategy->needs_proba() && !r.stream->schema().is_classification())
    fail(ErrorCode::ConfigError, fmt::format("strategy '{}' needs class probabilities but stream '{}' is regression",
                                             config.strategy.name, s.display()));
  return r;
}

std::vector<ResolvedJob> resolve(const ExperimentConfig& config) {
  config.validate();
  // Name checks first so a typo is reported even when another component
  // would fail to construct.
  for (const auto& m : config.models) find_model(m.name);
  for (const auto& s : config.streams) find_stream(s.name);
  find_strategy(config.strategy.name);
  std::vector<ResolvedJob> out;
  for (const JobSpec& j : plan_jobs(config)) out.push_back(resolve_job(config, j));
  return out;
}

// Metrics --------------------------------------------------------------------------

std::size_t ConfusionMatrix::total() const noexcept {
  std::size_t t = 0;
  for (std::size_t c : counts) t += c;
  return t;
}

ConfusionMatrix confusion_matrix(const std::vector<PrequentialRecord>& records, std::size_t n_classes) {
  ConfusionMatrix cm(n_classes);
  for (const auto& r : records) {
    const auto t = static_cast<std::size_t>(r.truth);
    const auto p = static_cast<std::size_t>(r.prediction);
    if (t >= n_classes || p >= n_classes) fail(ErrorCode::InvalidArgument, "record class outside the confusion matrix");
    ++cm.at(t, p);
  }
  return cm;
}

double macro_f1(const ConfusionMatrix& cm) {
  if (cm.total() == 0) fail(ErrorCode::EmptySeries, "macro_f1 of an empty confusion matrix");
  double sum = 0.0;
  for (std::size_t c = 0; c < cm.n_classes; ++c) {
    double tp = static_cast<double>(cm.at(c, c));
    double predicted = 0.0, actual = 0.0;
    for (std::size_t k = 0; k < cm.n_classes; ++k) {
      predicted += static_cast<double>(cm.at(k, c));
      actual += static_cast<double>(cm.at(c, k));
    }
    const double precision = predicted > 0.0 ? tp / predicted : 0.0;
    const double recall = actual > 0.0 ? tp / actual : 0.0;
    if (precision + recall > 0.0) sum += 2.0 * precision * recall / (precision + recall);
  }
  return sum / static_cast<double>(cm.n_classes);
}

double accuracy(const std::vector<PrequentialRecord>& records) {
  if (records.empty()) fail(ErrorCode::EmptySeries, "accuracy of no records");
  std::size_t ok = 0;
  for (const auto& r : records) ok += r.correct() ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(records.size());
}

namespace {

template <typename Score>
MetricSeries trailing_mean(const std::vector<PrequentialRecord>& records, std::size_t window, Score score) {
  if (window == 0) fail(ErrorCode::InvalidArgument, "window must be at least 1");
  if (records.empty()) fail(ErrorCode::EmptySeries, "no records to summarize");
  MetricSeries out;
  out.steps.reserve(records.size());
  out.values.reserve(records.size());
  std::deque<double> trail;
  double sum = 0.0;
  for (const auto& r : records) {
    const double v = score(r);
    trail.push_back(v);
    sum += v;
    if (trail.size() > window) {
      sum -= trail.front();
      trail.pop_front();
    }
    out.steps.push_back(r.step);
    out.values.push_back(sum / static_cast<double>(trail.size()));
  }
  return out;
}

}  // namespace

MetricSeries windowed_accuracy(const std::vector<PrequentialRecord>& records, std::size_t window) {
  // Integer counts keep the running sum exact.
  return trailing_mean(records, window, [](const PrequentialRecord& r) { return r.correct() ? 1.0 : 0.0; });
}

MetricSeries windowed_mae(const std::vector<PrequentialRecord>& records, std::size_t window) {
  if (window == 0) fail(ErrorCode::InvalidArgument, "window must be at least 1");
  if (records.empty()) fail(ErrorCode::EmptySeries, "no records to summarize");
  // Recomputed per point: running float sums would drift from the trailing definition.
  MetricSeries out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::size_t lo = i + 1 >= window ? i + 1 - window : 0;
    double sum = 0.0;
    for (std::size_t j = lo; j <= i; ++j) sum += std::abs(records[j].truth - records[j].prediction);
    out.steps.push_back(records[i].step);
    out.values.push_back(sum / static_cast<double>(i + 1 - lo));
  }
  return out;
}

MetricSeries cumulative_spend(const std::vector<PrequentialRecord>& records) {
  if (records.empty()) fail(ErrorCode::EmptySeries, "no records to summarize");
  MetricSeries out;
  std::size_t queried = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    queried += records[i].queried ? 1 : 0;
    out.steps.push_back(records[i].step);
    out.values.push_back(static_cast<double>(queried) / static_cast<double>(i + 1));
  }
  return out;
}

// Runner -----------------------------------------------------------------------------

namespace {

void finalize_metrics(JobResult& r) {
  if (r.records.empty()) return;
  std::size_t queried = 0;
  for (const auto& rec : r.records) queried += rec.queried ? 1 : 0;
  r.spend = static_cast<double>(queried) / static_cast<double>(r.records.size());
  if (r.task == TaskKind::Classification) {
    r.accuracy = accuracy(r.records);
    r.macro_f1 = macro_f1(confusion_matrix(r.records, r.n_classes));
  } else {
    double abs_sum = 0.0, sq_sum = 0.0;
    for (const auto& rec : r.records) {
      const double e = rec.truth - rec.prediction;
      abs_sum += std::abs(e);
      sq_sum += e * e;
    }
    r.mae = abs_sum / static_cast<double>(r.records.size());
    r.mse = sq_sum / static_cast<double>(r.records.size());
  }
}

}  // namespace

JobResult run_prequential(ResolvedJob& job, const RunOptions& options) {
  JobResult result;
  result.spec = job.spec;
  result.model = job.model_name;
  result.stream = job.stream_name;
  const StreamSchema& schema = job.stream->schema();
  result.task = schema.task;
  result.n_classes = schema.n_classes();

  std::vector<Instance> pretrain = take(*job.stream, options.n_pretrain);
  if (pretrain.size() < options.n_pretrain)
    fail(ErrorCode::InvalidPretrain, fmt::format("stream '{}' ended after {} instances, before the {} pretraining instances",
                                                 job.stream_name, pretrain.size(), options.n_pretrain));
  try {
    if (pretrain.empty())
      job.learner->start_empty();
    else
      job.learner->fit(pretrain);

    for (std::size_t t = options.n_pretrain; t < options.n_samples; ++t) {
      auto x = job.stream->next();
      if (!x) break;
      // Test on a label-free copy so the prediction cannot see the answer.
      Instance probe;
      probe.index = x->index;
      probe.features = x->features;
      const Prediction p = job.learner->predict(probe);

      PrequentialRecord rec;
      rec.step = x->index;
      rec.truth = x->label ? static_cast<double>(*x->label) : x->target.value_or(0.0);
      rec.prediction = schema.is_classification() ? static_cast<double>(p.label) : p.value;
      rec.model = job.model_name;
      rec.stream = job.stream_name;
      rec.round = job.spec.round;
      rec.queried = job.strategy->decide(p.proba);
      result.records.push_back(rec);

      if (rec.queried && job.online) job.learner->partial_fit(*x);
    }
  } catch (const std::exception& e) {
    result.status = JobStatus::Failed;
    result.error = e.what();
  }
  finalize_metrics(result);
  return result;
}

std::vector<JobResult> run_experiment(const ExperimentConfig& config, std::vector<ResolvedJob> jobs, std::size_t parallelism) {
  const RunOptions options{config.n_samples, config.n_pretrain};
  std::vector<JobResult> results(jobs.size());
  auto run_one = [&](std::size_t i) {
    try {
      results[i] = run_prequential(jobs[i], options);
    } catch (const std::exception& e) {
      JobResult& r = results[i];
      r.spec = jobs[i].spec;
      r.model = jobs[i].model_name;
      r.stream = jobs[i].stream_name;
      r.task = jobs[i].stream->schema().task;
      r.n_classes = jobs[i].stream->schema().n_classes();
      r.status = JobStatus::Failed;
      r.error = e.what();
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(jobs.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_one(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) run_one(i);
    });
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace aol
