#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "aol/evaluate.hpp"

namespace aol {

// Records -----------------------------------------------------------------------

inline constexpr const char* kRecordsHeader = "step,true,pred,queried,model,stream,round";

/// Header plus one row per record, sorted by (model, stream, round, step).
/// Values are printed in shortest round-trip form. EmptySeries when empty.
std::string format_records_csv(std::vector<PrequentialRecord> records);
void write_records_csv(const std::vector<PrequentialRecord>& records, const std::filesystem::path& path);
std::vector<PrequentialRecord> read_records_csv(const std::filesystem::path& path);

// Comparison plot ----------------------------------------------------------------

struct SeriesSpec {
  std::string label;
  MetricSeries series;
  std::size_t color = 0;  // index into the 10-color palette
};

struct ComparisonSpec {
  std::vector<SeriesSpec> series;
  std::string title;
  std::string x_label = "step";
  std::string y_label = "accuracy";
  std::pair<double, double> y_range{0.0, 1.0};
};

inline constexpr std::size_t kPaletteSize = 10;
const char* palette_color(std::size_t index) noexcept;

/// Standalone SVG 1.1: one polyline per series, tick-labelled axes, legend.
/// Pure function of the spec.
std::string render_comparison_svg(const ComparisonSpec& spec);
void write_comparison_svg(const ComparisonSpec& spec, const std::filesystem::path& path);

// Summaries ------------------------------------------------------------------------

struct SummaryRow {
  std::string model;
  std::string stream;
  std::size_t rounds = 0;  // completed rounds
  double mean_acc = 0.0;
  double std_acc = 0.0;    // population standard deviation
  double mean_macro_f1 = 0.0;
  double spend = 0.0;
  // regression jobs
  TaskKind task = TaskKind::Classification;
  double mean_mae = 0.0;
  double std_mae = 0.0;
  double mean_mse = 0.0;
};

/// One row per (model, stream) with at least one completed job, in job order.
std::vector<SummaryRow> summarize(const std::vector<JobResult>& jobs);

inline constexpr const char* kSummaryHeader = "model,stream,rounds,mean_acc,std_acc,mean_macro_f1,spend";
inline constexpr const char* kRegressionSummaryHeader = "model,stream,rounds,mean_mae,std_mae,mean_mse,spend";

/// Classification rows. The file opens with a '#' comment naming the std
/// convention. EmptySeries if no job completed.
std::string format_summary_csv(const std::vector<JobResult>& jobs);
void write_summary(const std::vector<JobResult>& jobs, const std::filesystem::path& path);
/// Regression rows; empty string when there are none.
std::string format_regression_summary_csv(const std::vector<JobResult>& jobs);

/// Fixed-width table for the terminal, including failed jobs.
std::string format_summary_table(const std::vector<JobResult>& jobs);

// Manifest -------------------------------------------------------------------------

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct ManifestFile {
  std::string name;  // relative to out_dir
  std::string sha256;
  std::size_t bytes = 0;
};

/// Flat `key=value` text: config echo (without out_dir), per-job status, and
/// the file inventory with content hashes.
std::string format_manifest(const ExperimentConfig& config, const std::vector<JobResult>& jobs,
                            const std::vector<ManifestFile>& files);

/// Stable file-name fragment for a label.
std::string file_token(const std::string& label);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace aol
