#include "aol/app.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <system_error>

#include <fmt/format.h>

#include "aol/error.hpp"
#include "aol/report.hpp"

namespace aol {

namespace {

/// Pointwise mean over rounds, truncated to the shortest round.
MetricSeries mean_series(const std::vector<MetricSeries>& rounds) {
  MetricSeries out;
  if (rounds.empty()) return out;
  std::size_t n = rounds.front().size();
  for (const auto& r : rounds) n = std::min(n, r.size());
  out.steps.assign(rounds.front().steps.begin(), rounds.front().steps.begin() + static_cast<std::ptrdiff_t>(n));
  out.values.assign(n, 0.0);
  for (const auto& r : rounds)
    for (std::size_t i = 0; i < n; ++i) out.values[i] += r.values[i];
  for (double& v : out.values) v /= static_cast<double>(rounds.size());
  return out;
}

std::pair<double, double> auto_range(const std::vector<SeriesSpec>& series) {
  double top = 0.0;
  for (const auto& s : series)
    for (double v : s.series.values) top = std::max(top, v);
  return {0.0, top > 0.0 ? top * 1.05 : 1.0};
}

}  // namespace

RunOutcome run_experiment_to_dir(const ExperimentConfig& config, std::size_t parallelism) {
  if (config.out_dir.empty()) fail(ErrorCode::ConfigError, "out_dir is required (config, --out or AWESOME_OL_OUT)");
  std::vector<ResolvedJob> jobs = resolve(config);

  RunOutcome outcome;
  outcome.results = run_experiment(config, std::move(jobs), parallelism);
  const auto& results = outcome.results;

  const std::filesystem::path dir(config.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

  auto emit = [&](const std::string& name, const std::string& content) {
    write_text_file(dir / name, content);
    outcome.files.push_back(name);
  };

  for (const auto& r : results) {
    if (r.records.empty()) continue;
    emit(fmt::format("records_{}_{}_r{}.csv", file_token(r.model), file_token(r.stream), r.spec.round),
         format_records_csv(r.records));
  }

  const bool any_done = std::any_of(results.begin(), results.end(),
                                    [](const JobResult& r) { return r.status == JobStatus::Ok && !r.records.empty(); });
  if (any_done) {
    emit("summary.csv", format_summary_csv(results));
    if (auto reg = format_regression_summary_csv(results); !reg.empty()) emit("regression_summary.csv", reg);
  }

  const bool budgeted = config.strategy.name != "supervised";
  for (std::size_t s = 0; s < config.streams.size(); ++s) {
    ComparisonSpec perf, spend;
    const std::string stream_label = config.streams[s].display();
    bool regression = false;
    for (std::size_t m = 0; m < config.models.size(); ++m) {
      std::vector<MetricSeries> perf_rounds, spend_rounds;
      for (const auto& r : results) {
        if (r.spec.model != m || r.spec.stream != s || r.status != JobStatus::Ok || r.records.empty()) continue;
        regression = r.task == TaskKind::Regression;
        perf_rounds.push_back(regression ? windowed_mae(r.records, kPlotWindow) : windowed_accuracy(r.records, kPlotWindow));
        spend_rounds.push_back(cumulative_spend(r.records));
      }
      if (perf_rounds.empty()) continue;
      perf.series.push_back({config.models[m].display(), mean_series(perf_rounds), m});
      spend.series.push_back({config.models[m].display(), mean_series(spend_rounds), m});
    }
    if (perf.series.empty()) continue;
    perf.title = fmt::format("{} on {} (trailing {})", regression ? "MAE" : "Accuracy", stream_label, kPlotWindow);
    perf.y_label = regression ? "mean absolute error" : "accuracy";
    if (regression) perf.y_range = auto_range(perf.series);
    const std::string svg = render_comparison_svg(perf);
    if (s == 0) emit("comparison.svg", svg);
    emit(fmt::format("comparison_{}.svg", file_token(stream_label)), svg);
    if (budgeted) {
      spend.title = fmt::format("Label spend on {} ({})", stream_label, config.strategy.name);
      spend.y_label = "queried / seen";
      emit(fmt::format("spend_{}.svg", file_token(stream_label)), render_comparison_svg(spend));
    }
  }

  std::vector<ManifestFile> inventory;
  for (const auto& name : outcome.files) {
    const auto path = dir / name;
    inventory.push_back({name, sha256_file(path), static_cast<std::size_t>(std::filesystem::file_size(path))});
  }
  emit("manifest.txt", format_manifest(config, results, inventory));

  outcome.summary_text = format_summary_table(results);
  outcome.exit_code = std::any_of(results.begin(), results.end(), [](const JobResult& r) { return r.status == JobStatus::Failed; })
                          ? 1
                          : 0;
  return outcome;
}

std::string compare_records(const std::vector<std::filesystem::path>& record_files, const std::filesystem::path& out_svg,
                            std::size_t window) {
  if (record_files.empty()) fail(ErrorCode::EmptySeries, "compare needs at least one records file");
  // (model, stream) -> rounds, in first-seen order.
  std::vector<std::pair<std::string, std::string>> keys;
  std::map<std::pair<std::string, std::string>, std::map<std::size_t, std::vector<PrequentialRecord>>> groups;
  bool regression = false;
  for (const auto& f : record_files) {
    for (auto& r : read_records_csv(f)) {
      const auto key = std::make_pair(r.model, r.stream);
      if (!groups.count(key)) keys.push_back(key);
      if (r.truth != std::floor(r.truth) || r.prediction != std::floor(r.prediction)) regression = true;
      groups[key][r.round].push_back(std::move(r));
    }
  }
  if (keys.empty()) fail(ErrorCode::EmptySeries, "records files hold no rows");

  bool multi_stream = false;
  for (const auto& k : keys) multi_stream |= k.second != keys.front().second;

  ComparisonSpec spec;
  spec.title = fmt::format("{} (trailing {})", regression ? "MAE" : "Accuracy", window);
  spec.y_label = regression ? "mean absolute error" : "accuracy";
  std::string table = fmt::format("{:<32} {:>6} {:>10} {:>8}\n", "series", "rounds", regression ? "mae" : "accuracy", "spend");
  for (std::size_t i = 0; i < keys.size(); ++i) {
    std::vector<MetricSeries> rounds;
    double score = 0.0, spend = 0.0;
    for (auto& [round, recs] : groups[keys[i]]) {
      std::sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) { return a.step < b.step; });
      rounds.push_back(regression ? windowed_mae(recs, window) : windowed_accuracy(recs, window));
      double abs_err = 0.0;
      std::size_t queried = 0;
      for (const auto& r : recs) {
        abs_err += std::abs(r.truth - r.prediction);
        queried += r.queried ? 1 : 0;
      }
      score += regression ? abs_err / static_cast<double>(recs.size()) : accuracy(recs);
      spend += static_cast<double>(queried) / static_cast<double>(recs.size());
    }
    const auto n = static_cast<double>(rounds.size());
    const std::string label = multi_stream ? keys[i].first + " / " + keys[i].second : keys[i].first;
    spec.series.push_back({label, mean_series(rounds), i});
    table += fmt::format("{:<32} {:>6} {:>10.4f} {:>8.4f}\n", label, rounds.size(), score / n, spend / n);
  }
  if (regression) spec.y_range = auto_range(spec.series);
  write_comparison_svg(spec, out_svg);
  return table;
}

}  // namespace aol
