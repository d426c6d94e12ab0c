#include "aol/types.hpp"

#include <cmath>
#include <string>

#include "aol/error.hpp"

namespace aol {

StreamSchema StreamSchema::classification(std::size_t n_features, std::size_t n_classes) {
  StreamSchema s;
  s.n_features = n_features;
  s.task = TaskKind::Classification;
  for (std::size_t i = 0; i < n_features; ++i) s.feature_names.push_back("f" + std::to_string(i));
  for (std::size_t c = 0; c < n_classes; ++c) s.class_names.push_back(std::to_string(c));
  return s;
}

StreamSchema StreamSchema::regression(std::size_t n_features) {
  StreamSchema s = classification(n_features, 0);
  s.task = TaskKind::Regression;
  return s;
}

void StreamSchema::validate() const {
  if (n_features == 0) fail(ErrorCode::SchemaError, "schema needs at least one feature");
  if (feature_names.size() != n_features) fail(ErrorCode::SchemaError, "feature_names length differs from n_features");
  if (is_classification() && class_names.size() < 2) fail(ErrorCode::SchemaError, "classification needs at least 2 classes");
  if (!is_classification() && !class_names.empty()) fail(ErrorCode::SchemaError, "regression schema carries class names");
}

std::size_t argmax(std::span<const double> values) noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

void normalize_proba(std::vector<double>& proba) {
  double sum = 0.0;
  bool finite = true;
  for (double& p : proba) {
    if (!std::isfinite(p)) finite = false;
    if (p < 0.0) p = 0.0;
    sum += p;
  }
  if (!finite || !(sum > 0.0) || !std::isfinite(sum)) {
    const double u = proba.empty() ? 0.0 : 1.0 / static_cast<double>(proba.size());
    for (double& p : proba) p = u;
    return;
  }
  for (double& p : proba) p /= sum;
}

void check_instance(const StreamSchema& schema, const Instance& x, bool require_label) {
  if (x.features.size() != schema.n_features)
    fail(ErrorCode::SchemaError, "instance " + std::to_string(x.index) + " has " + std::to_string(x.features.size()) +
                                     " features, schema expects " + std::to_string(schema.n_features));
  for (std::size_t j = 0; j < x.features.size(); ++j)
    if (!std::isfinite(x.features[j]))
      fail(ErrorCode::SchemaError, "instance " + std::to_string(x.index) + " feature " + std::to_string(j) + " is not finite");
  if (schema.is_classification()) {
    if (x.target) fail(ErrorCode::SchemaError, "regression target on a classification instance");
    if (x.label && (*x.label < 0 || static_cast<std::size_t>(*x.label) >= schema.n_classes()))
      fail(ErrorCode::SchemaError, "label " + std::to_string(*x.label) + " outside [0, " +
                                       std::to_string(schema.n_classes()) + ")");
    if (require_label && !x.label) fail(ErrorCode::MissingLabel, "instance " + std::to_string(x.index) + " has no label");
  } else {
    if (x.label) fail(ErrorCode::SchemaError, "class label on a regression instance");
    if (x.target && !std::isfinite(*x.target)) fail(ErrorCode::SchemaError, "regression target is not finite");
    if (require_label && !x.target) fail(ErrorCode::MissingLabel, "instance " + std::to_string(x.index) + " has no target");
  }
}

}  // namespace aol
