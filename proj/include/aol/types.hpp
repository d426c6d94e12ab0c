#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aol {

using ClassId = int;

enum class TaskKind { Classification, Regression };

/// One element of a stream. Classification streams fill `label`, regression
/// streams fill `target`; an instance with neither is unlabeled.
struct Instance {
  std::size_t index = 0;
  std::vector<double> features;
  std::optional<ClassId> label;
  std::optional<double> target;

  bool labeled() const noexcept { return label.has_value() || target.has_value(); }
  bool operator==(const Instance&) const = default;
};

struct StreamSchema {
  std::size_t n_features = 0;
  std::vector<std::string> feature_names;
  TaskKind task = TaskKind::Classification;
  std::vector<std::string> class_names;

  std::size_t n_classes() const noexcept { return class_names.size(); }
  bool is_classification() const noexcept { return task == TaskKind::Classification; }

  static StreamSchema classification(std::size_t n_features, std::size_t n_classes);
  static StreamSchema regression(std::size_t n_features);

  /// Throws SchemaError if the invariants do not hold.
  void validate() const;
  bool operator==(const StreamSchema&) const = default;
};

struct Prediction {
  ClassId label = 0;   // classification
  double value = 0.0;  // regression, or the label as a real
  std::vector<double> proba;
};

struct LearnerCaps {
  bool classification = true;
  bool supports_multiclass = true;
  bool supports_regression = false;
  bool drift_adaptive = false;
};

/// Index of the maximum entry; ties go to the smallest index.
std::size_t argmax(std::span<const double> values) noexcept;

/// Clamps negatives to zero and rescales to sum 1. A zero-sum or non-finite
/// vector becomes uniform.
void normalize_proba(std::vector<double>& proba);

/// Throws SchemaError when the instance does not fit the schema (length,
/// finiteness, label range).
void check_instance(const StreamSchema& schema, const Instance& x, bool require_label);

}  // namespace aol
