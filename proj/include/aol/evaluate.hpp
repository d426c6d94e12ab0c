#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "aol/learner.hpp"
#include "aol/registry.hpp"
#include "aol/strategies.hpp"
#include "aol/stream.hpp"

namespace aol {

/// A named component plus its parameter block. `label` is the display name
/// used in records and plots (defaults to `name`).
struct ComponentSpec {
  std::string name;
  std::string label;
  Params params = Params::object();
  /// Models only: false keeps the learner frozen after pretraining.
  bool online = true;

  const std::string& display() const noexcept { return label.empty() ? name : label; }
};

struct ExperimentConfig {
  std::size_t n_samples = 0;
  std::size_t n_pretrain = 0;
  std::size_t n_rounds = 1;
  std::vector<ComponentSpec> models;
  std::vector<ComponentSpec> streams;
  ComponentSpec strategy{"supervised", "", Params::object(), true};
  std::uint64_t seed = 42;
  std::string out_dir;

  /// Structural constraints (ConfigError); names are checked by resolve()
  /// and out_dir by the file-writing entry points.
  void validate() const;
};

/// One (model, stream, round) cell of the experiment matrix.
struct JobSpec {
  std::size_t index = 0;
  std::size_t model = 0;
  std::size_t stream = 0;
  std::size_t round = 0;
  std::uint64_t stream_seed = 0;    // shared by every model in the same (stream, round)
  std::uint64_t learner_seed = 0;
  std::uint64_t strategy_seed = 0;
};

/// Jobs in (model, stream, round) order.
std::vector<JobSpec> plan_jobs(const ExperimentConfig& config);

struct ResolvedJob {
  JobSpec spec;
  std::string model_name;
  std::string stream_name;
  LearnerPtr learner;
  StreamPtr stream;
  StrategyPtr strategy;
  bool online = true;
};

/// Instantiates the components of one job.
ResolvedJob resolve_job(const ExperimentConfig& config, const JobSpec& job);
/// Instantiates every job; any RegistryError/ConfigError surfaces before a
/// single instance is processed.
std::vector<ResolvedJob> resolve(const ExperimentConfig& config);

struct PrequentialRecord {
  std::size_t step = 0;
  double truth = 0.0;       // class id or regression target
  double prediction = 0.0;  // class id or regression estimate
  bool queried = false;
  std::string model;
  std::string stream;
  std::size_t round = 0;

  bool correct() const noexcept { return truth == prediction; }
  bool operator==(const PrequentialRecord&) const = default;
};

struct ConfusionMatrix {
  std::size_t n_classes = 0;
  std::vector<std::size_t> counts;  // row-major, rows = truth

  explicit ConfusionMatrix(std::size_t classes = 0) : n_classes(classes), counts(classes * classes, 0) {}
  std::size_t& at(std::size_t truth, std::size_t pred) { return counts[truth * n_classes + pred]; }
  std::size_t at(std::size_t truth, std::size_t pred) const { return counts[truth * n_classes + pred]; }
  std::size_t total() const noexcept;
};

ConfusionMatrix confusion_matrix(const std::vector<PrequentialRecord>& records, std::size_t n_classes);
/// Unweighted mean of per-class F1; a class with P + R = 0 scores 0.
double macro_f1(const ConfusionMatrix& cm);
double accuracy(const std::vector<PrequentialRecord>& records);

struct MetricSeries {
  std::vector<std::size_t> steps;
  std::vector<double> values;
  std::size_t size() const noexcept { return values.size(); }
};

/// Trailing-window mean correctness. EmptySeries on empty input.
MetricSeries windowed_accuracy(const std::vector<PrequentialRecord>& records, std::size_t window);
/// Trailing-window mean absolute error (regression records).
MetricSeries windowed_mae(const std::vector<PrequentialRecord>& records, std::size_t window);
/// Cumulative queried / seen.
MetricSeries cumulative_spend(const std::vector<PrequentialRecord>& records);

enum class JobStatus { Ok, Failed };

struct JobResult {
  JobSpec spec;
  std::string model;
  std::string stream;
  TaskKind task = TaskKind::Classification;
  std::size_t n_classes = 0;
  JobStatus status = JobStatus::Ok;
  std::string error;  // set when Failed
  std::vector<PrequentialRecord> records;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double mae = 0.0;
  double mse = 0.0;
  double spend = 0.0;
};

struct RunOptions {
  std::size_t n_samples = 0;
  std::size_t n_pretrain = 0;
};

/// Pretrain on the first n_pretrain instances, then test-then-train up to
/// n_samples. Learner failures mark the result Failed and keep the records
/// gathered so far; a stream shorter than the pretraining span raises
/// InvalidPretrain.
JobResult run_prequential(ResolvedJob& job, const RunOptions& options);

/// Runs all jobs with up to `parallelism` worker threads; results come back
/// in job-index order. Failed jobs never stop their siblings.
std::vector<JobResult> run_experiment(const ExperimentConfig& config, std::vector<ResolvedJob> jobs, std::size_t parallelism);

}  // namespace aol
