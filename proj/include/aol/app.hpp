#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "aol/evaluate.hpp"

namespace aol {

inline constexpr std::size_t kPlotWindow = 500;

struct RunOutcome {
  int exit_code = 0;  // 0 all jobs ok, 1 some job failed
  std::string summary_text;
  std::vector<JobResult> results;
  std::vector<std::string> files;  // written files, relative to out_dir
};

/// The whole pipeline behind `run`: resolve every job (configuration problems
/// throw before anything touches out_dir), run them, then write per-job
/// records, summary.csv, comparison plots and manifest.txt.
RunOutcome run_experiment_to_dir(const ExperimentConfig& config, std::size_t parallelism);

/// Rebuilds comparison plots and a summary table from records CSV files.
/// Returns the terminal summary.
std::string compare_records(const std::vector<std::filesystem::path>& record_files, const std::filesystem::path& out_svg,
                            std::size_t window);

}  // namespace aol
