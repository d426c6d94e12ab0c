#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "aol/rng.hpp"
#include "aol/stream.hpp"

namespace aol {

// Drift mixing ---------------------------------------------------------------

struct DriftSchedule {
  std::size_t position = 0;  // t0
  std::size_t width = 0;     // 0 = abrupt
};

/// Probability that instance t is drawn from the post-drift concept.
/// Abrupt: step at t0. Gradual: 1 / (1 + exp(-4 (t - t0) / w)).
double concept_mix(std::size_t t, const DriftSchedule& schedule);

// SEA ------------------------------------------------------------------------

struct SeaConcept {
  double threshold = 8.0;
  double noise_rate = 0.0;
};

/// 1 iff f1 + f2 <= theta.
ClassId sea_label(double f1, double f2, double threshold) noexcept;

struct SeaConfig {
  SeaConcept before;
  std::optional<SeaConcept> after;  // no drift when empty
  DriftSchedule schedule;
};

/// Three features uniform on [0, 10]; only the first two carry signal.
class SeaStream final : public Stream {
 public:
  SeaStream(SeaConfig config, std::uint64_t seed);

  const StreamSchema& schema() const override { return schema_; }
  std::optional<Instance> next() override;
  std::string_view name() const override { return "sea"; }

 private:
  SeaConfig config_;
  StreamSchema schema_;
  Rng rng_;
  std::size_t t_ = 0;
};

// Hyperplane -----------------------------------------------------------------

struct HyperplaneConcept {
  std::vector<double> weights;
  double bias = 0.0;
};

/// 1 iff w.x + b >= 0. Dimension mismatch raises SchemaError.
ClassId hyperplane_label(std::span<const double> x, std::span<const double> w, double b);

struct HyperplaneConfig {
  std::size_t n_features = 10;
  std::optional<HyperplaneConcept> before;  // drawn from the seed when empty
  std::optional<HyperplaneConcept> after;   // drawn from the seed when empty and drift is on
  bool drift = false;
  DriftSchedule schedule;
  double noise_rate = 0.0;
};

/// Features uniform on [0, 1]; random concepts use weights uniform on [0, 1]
/// with bias -sum(w)/2, which splits the cube roughly in half.
class HyperplaneStream final : public Stream {
 public:
  HyperplaneStream(HyperplaneConfig config, std::uint64_t seed);

  const StreamSchema& schema() const override { return schema_; }
  std::optional<Instance> next() override;
  std::string_view name() const override { return "hyperplane"; }

  const HyperplaneConcept& concept_before() const noexcept { return before_; }
  const HyperplaneConcept& concept_after() const noexcept { return after_; }

 private:
  HyperplaneConfig config_;
  StreamSchema schema_;
  HyperplaneConcept before_, after_;
  Rng rng_;
  std::size_t t_ = 0;
};

// Friedman #1 regression -------------------------------------------------------

struct FriedmanConfig {
  double noise_sd = 1.0;
};

/// y = 10 sin(pi x0 x1) + 20 (x2 - 0.5)^2 + 10 x3 + 5 x4 + N(0, noise_sd^2);
/// ten features uniform on [0, 1], the last five irrelevant.
class FriedmanStream final : public Stream {
 public:
  FriedmanStream(FriedmanConfig config, std::uint64_t seed);

  const StreamSchema& schema() const override { return schema_; }
  std::optional<Instance> next() override;
  std::string_view name() const override { return "friedman"; }

 private:
  FriedmanConfig config_;
  StreamSchema schema_;
  Rng rng_;
  std::size_t t_ = 0;
};

// CSV --------------------------------------------------------------------------

struct CsvStreamConfig {
  std::filesystem::path path;
  std::variant<std::string, std::size_t> label_column = std::string("label");
  bool has_header = true;
  std::optional<std::uint64_t> shuffle_seed;
  TaskKind task = TaskKind::Classification;
  std::optional<std::size_t> n_classes;  // inferred as max label + 1 when empty
};

/// Loads the whole file up front. Malformed rows raise ParseError with the
/// 1-based data row number.
class CsvStream final : public Stream {
 public:
  explicit CsvStream(CsvStreamConfig config);

  const StreamSchema& schema() const override { return schema_; }
  std::optional<Instance> next() override;
  std::string_view name() const override { return "csv"; }
  std::size_t size() const noexcept { return rows_.size(); }

 private:
  StreamSchema schema_;
  std::vector<Instance> rows_;
  std::size_t pos_ = 0;
};

/// Writes `f0,...,f{n-1},label` plus one row per instance, reals in shortest
/// round-trip form.
void write_stream_csv(std::span<const Instance> instances, const StreamSchema& schema, const std::filesystem::path& path);

}  // namespace aol
