#include "aol/learner.hpp"

#include <string>

#include "aol/error.hpp"

namespace aol {

Learner::Learner(StreamSchema schema) : schema_(std::move(schema)) { schema_.validate(); }

void Learner::fit(std::span<const Instance> batch) {
  if (batch.empty()) fail(ErrorCode::InvalidPretrain, std::string(name()) + ": pretraining batch is empty");
  for (const Instance& x : batch) check_instance(schema_, x, true);
  do_fit(batch);
  trained_ = true;
  n_seen_ = batch.size();
}

void Learner::partial_fit(const Instance& x) {
  if (!trained_) fail(ErrorCode::NotFitted, std::string(name()) + ": partial_fit before fit");
  check_instance(schema_, x, true);
  do_update(x);
  ++n_seen_;
}

void Learner::start_empty() {
  trained_ = true;
  n_seen_ = 0;
}

std::vector<double> Learner::predict_proba(const Instance& x) const {
  if (regression()) fail(ErrorCode::Unsupported, std::string(name()) + ": predict_proba on a regression learner");
  if (!trained_) fail(ErrorCode::NotFitted, std::string(name()) + ": predict before fit");
  check_instance(schema_, x, false);
  std::vector<double> proba = do_proba(x.features);
  proba.resize(schema_.n_classes(), 0.0);
  normalize_proba(proba);
  return proba;
}

Prediction Learner::predict(const Instance& x) const {
  Prediction out;
  if (regression()) {
    if (!trained_) fail(ErrorCode::NotFitted, std::string(name()) + ": predict before fit");
    check_instance(schema_, x, false);
    out.value = do_regress(x.features);
    return out;
  }
  out.proba = predict_proba(x);
  out.label = static_cast<ClassId>(argmax(out.proba));
  out.value = out.label;
  return out;
}

void Learner::do_fit(std::span<const Instance> batch) {
  for (const Instance& x : batch) do_update(x);
}

std::vector<double> Learner::do_proba(std::span<const double>) const {
  fail(ErrorCode::Unsupported, std::string(name()) + " does not support classification");
}

double Learner::do_regress(std::span<const double>) const {
  fail(ErrorCode::Unsupported, std::string(name()) + " does not support regression");
}

}  // namespace aol
