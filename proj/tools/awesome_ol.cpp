// awesome-ol: command-line front end over the C API.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "awesome_ol.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;

int report(aol_status st, const char* what) {
  std::cerr << "awesome-ol: " << what << ": " << aol_status_name(st) << ": " << aol_last_error() << "\n";
  return kExitConfig;
}

struct ConfigDeleter {
  void operator()(aol_config* c) const { aol_config_free(c); }
};
struct RunDeleter {
  void operator()(aol_run* r) const { aol_run_free(r); }
};

struct RunArgs {
  std::optional<std::string> config, out, models, streams, strategy;
  std::optional<std::string> seed, samples, pretrain, rounds;
  std::size_t jobs = 1;
};

int cmd_run(const RunArgs& a) {
  aol_config* raw = nullptr;
  aol_status st = a.config ? aol_config_from_file(a.config->c_str(), &raw) : aol_config_new(&raw);
  if (st != AOL_OK) return report(st, "config");
  std::unique_ptr<aol_config, ConfigDeleter> config(raw);

  const std::pair<const char*, const std::optional<std::string>*> overrides[] = {
      {"out_dir", &a.out},       {"seed", &a.seed},       {"n_samples", &a.samples},
      {"n_pretrain", &a.pretrain}, {"n_rounds", &a.rounds}, {"models", &a.models},
      {"streams", &a.streams},   {"strategy", &a.strategy},
  };
  for (const auto& [key, value] : overrides) {
    if (!*value) continue;
    if ((st = aol_config_set(config.get(), key, (*value)->c_str())) != AOL_OK) return report(st, key);
  }
  if ((st = aol_config_finalize(config.get())) != AOL_OK) return report(st, "config");

  aol_run* run_raw = nullptr;
  if ((st = aol_run_experiment(config.get(), a.jobs, &run_raw)) != AOL_OK) return report(st, "run");
  std::unique_ptr<aol_run, RunDeleter> run(run_raw);
  std::cout << aol_run_summary(run.get());
  if (aol_run_failed_count(run.get()) > 0)
    std::cerr << "awesome-ol: " << aol_run_failed_count(run.get()) << " of " << aol_run_job_count(run.get())
              << " jobs failed\n";
  return aol_run_exit_code(run.get());
}

int cmd_compare(std::vector<std::string> files, const std::optional<std::string>& dir, const std::string& svg,
                std::size_t window) {
  if (dir) {
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(*dir, ec)) {
      const auto name = entry.path().filename().string();
      if (name.rfind("records_", 0) == 0 && entry.path().extension() == ".csv") files.push_back(entry.path().string());
    }
    if (ec) {
      std::cerr << "awesome-ol: cannot read " << *dir << ": " << ec.message() << "\n";
      return kExitConfig;
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "awesome-ol: compare needs record files or --dir\n";
    return kExitConfig;
  }
  std::vector<const char*> paths;
  for (const auto& f : files) paths.push_back(f.c_str());
  char* table = nullptr;
  const aol_status st = aol_compare(paths.data(), paths.size(), svg.c_str(), window, &table);
  if (st != AOL_OK) return report(st, "compare");
  std::cout << table;
  aol_string_free(table);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stream learning experiments: prequential runs, drift, active learning"};
  app.set_version_flag("--version", aol_version());
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run every model on every stream and write the report");
  run->add_option("--config", run_args.config, "JSON experiment config")->check(CLI::ExistingFile);
  run->add_option("--out", run_args.out, "Output directory (fallback: AWESOME_OL_OUT)");
  run->add_option("--seed", run_args.seed, "Base seed");
  run->add_option("--samples", run_args.samples, "Instances per stream");
  run->add_option("--pretrain", run_args.pretrain, "Instances used for the initial fit");
  run->add_option("--rounds", run_args.rounds, "Independent repetitions");
  run->add_option("--models", run_args.models, "Comma-separated model names");
  run->add_option("--streams", run_args.streams, "Comma-separated stream names");
  run->add_option("--strategy", run_args.strategy, "Query strategy");
  run->add_option("--jobs", run_args.jobs, "Parallel jobs")->check(CLI::PositiveNumber);

  app.add_subcommand("list", "List registered models, strategies, streams and detectors");

  std::vector<std::string> files;
  std::optional<std::string> dir;
  std::string svg = "comparison.svg";
  std::size_t window = 500;
  auto* compare = app.add_subcommand("compare", "Plot records CSV files against each other");
  compare->add_option("files", files, "records_*.csv files");
  compare->add_option("--dir", dir, "Use every records_*.csv in this directory");
  compare->add_option("--svg", svg, "Output SVG path");
  compare->add_option("--window", window, "Trailing window length")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (run->parsed()) return cmd_run(run_args);
  if (compare->parsed()) return cmd_compare(files, dir, svg, window);
  std::cout << aol_list_components();
  return kExitOk;
}
