#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "aol/types.hpp"

namespace aol {

/// Uniform incremental-learner contract: fit once on a pretraining batch, then
/// partial_fit one instance at a time, predict/predict_proba in between.
///
/// The public entry points validate preconditions and keep the bookkeeping
/// (trained flag, n_seen); subclasses only implement the model arithmetic.
/// predict and predict_proba never mutate observable state.
class Learner {
 public:
  explicit Learner(StreamSchema schema);
  virtual ~Learner() = default;

  Learner(const Learner&) = default;
  Learner& operator=(const Learner&) = default;

  virtual std::string_view name() const = 0;
  virtual LearnerCaps caps() const = 0;
  /// Untrained copy of this learner's configuration, seeded with `seed`.
  virtual std::unique_ptr<Learner> fresh(std::uint64_t seed) const = 0;
  /// Deep copy including the trained state.
  virtual std::unique_ptr<Learner> clone() const = 0;

  void fit(std::span<const Instance> batch);
  void fit(const std::vector<Instance>& batch) { fit(std::span<const Instance>(batch)); }
  void partial_fit(const Instance& x);
  Prediction predict(const Instance& x) const;
  std::vector<double> predict_proba(const Instance& x) const;

  /// Marks an empty learner ready for partial_fit without a pretraining batch.
  /// Ensembles use this for members created mid-stream.
  void start_empty();

  bool trained() const noexcept { return trained_; }
  std::size_t n_seen() const noexcept { return n_seen_; }
  const StreamSchema& schema() const noexcept { return schema_; }
  bool regression() const noexcept { return !schema_.is_classification(); }

 protected:
  /// Batch initialization; the default replays do_update in order.
  virtual void do_fit(std::span<const Instance> batch);
  virtual void do_update(const Instance& x) = 0;
  /// Unnormalized class scores are fine; the caller renormalizes.
  virtual std::vector<double> do_proba(std::span<const double> features) const;
  virtual double do_regress(std::span<const double> features) const;

 private:
  StreamSchema schema_;
  bool trained_ = false;
  std::size_t n_seen_ = 0;
};

using LearnerPtr = std::unique_ptr<Learner>;

}  // namespace aol
