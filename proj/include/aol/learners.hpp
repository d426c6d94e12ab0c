#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "aol/learner.hpp"
#include "aol/rng.hpp"

namespace aol {

// ---------------------------------------------------------------------------
// Majority class

class MajorityClass final : public Learner {
 public:
  explicit MajorityClass(StreamSchema schema);

  std::string_view name() const override { return "MajorityClass"; }
  LearnerCaps caps() const override { return {true, true, false, false}; }
  LearnerPtr fresh(std::uint64_t seed) const override;
  LearnerPtr clone() const override { return std::make_unique<MajorityClass>(*this); }

  const std::vector<double>& class_counts() const noexcept { return counts_; }

 protected:
  void do_fit(std::span<const Instance> batch) override;
  void do_update(const Instance& x) override;
  std::vector<double> do_proba(std::span<const double> features) const override;

 private:
  std::vector<double> counts_;
};

// ---------------------------------------------------------------------------
// Online gradient descent: softmax regression with an optional tanh layer

struct OgdConfig {
  double learning_rate = 0.05;
  double l2 = 0.0;
  std::size_t hidden = 0;  // 0 = linear softmax
  std::size_t epochs = 5;  // passes over the pretraining batch
};

/// Parameters of a softmax model, stored flat so that gradients share the
/// layout. Linear: W (C x d), b (C). Hidden: V (H x d), c (H), W (C x H), b (C).
class OgdModel {
 public:
  OgdModel(std::size_t n_features, std::size_t n_classes, std::size_t hidden, Rng& init_rng);

  std::size_t n_features() const noexcept { return d_; }
  std::size_t n_classes() const noexcept { return c_; }
  std::size_t hidden() const noexcept { return h_; }

  std::span<const double> params() const noexcept { return theta_; }
  std::span<double> params() noexcept { return theta_; }

  std::vector<double> proba(std::span<const double> x) const;
  /// Cross-entropy plus (l2 / 2) * ||theta||^2.
  double loss(std::span<const double> x, ClassId y, double l2) const;
  /// Gradient of loss() in the layout of params().
  std::vector<double> gradient(std::span<const double> x, ClassId y, double l2) const;
  /// theta <- theta - eta * (grad + l2 * theta). Throws NumericError on a
  /// non-finite gradient or result; the model is left untouched in that case.
  void step(std::span<const double> x, ClassId y, double eta, double l2);

 private:
  struct Forward {
    std::vector<double> hidden;  // activations (empty when linear)
    std::vector<double> proba;
  };
  Forward forward(std::span<const double> x) const;
  std::span<const double> layer_input(const Forward& f, std::span<const double> x) const;

  std::size_t d_, c_, h_;
  std::size_t out_w_ = 0, out_b_ = 0;  // offsets of W and b
  std::vector<double> theta_;
};

class OgdLearner final : public Learner {
 public:
  OgdLearner(StreamSchema schema, OgdConfig config, std::uint64_t seed);

  std::string_view name() const override { return config_.hidden > 0 ? "MLP" : "OGD"; }
  LearnerCaps caps() const override { return {true, true, false, false}; }
  LearnerPtr fresh(std::uint64_t seed) const override;
  LearnerPtr clone() const override { return std::make_unique<OgdLearner>(*this); }

  const OgdModel& model() const noexcept { return model_; }
  const OgdConfig& config() const noexcept { return config_; }

 protected:
  void do_fit(std::span<const Instance> batch) override;
  void do_update(const Instance& x) override;
  std::vector<double> do_proba(std::span<const double> features) const override;

 private:
  OgdConfig config_;
  Rng init_rng_;
  OgdModel model_;
};

// ---------------------------------------------------------------------------
// Sliding-window k nearest neighbours

struct KnnConfig {
  std::size_t k = 5;
  std::size_t capacity = 1000;
};

class KnnLearner final : public Learner {
 public:
  KnnLearner(StreamSchema schema, KnnConfig config);

  std::string_view name() const override { return "KNN"; }
  LearnerCaps caps() const override { return {true, true, true, false}; }
  LearnerPtr fresh(std::uint64_t seed) const override;
  LearnerPtr clone() const override { return std::make_unique<KnnLearner>(*this); }

  struct Stored {
    std::vector<double> features;
    double label;  // class id or regression target
    std::uint64_t order;
  };
  const std::deque<Stored>& window() const noexcept { return window_; }

  /// Window positions of the min(k, size) nearest points, nearest first.
  /// Distance ties go to the older point.
  std::vector<std::size_t> neighbours(std::span<const double> x) const;

 protected:
  void do_update(const Instance& x) override;
  std::vector<double> do_proba(std::span<const double> features) const override;
  double do_regress(std::span<const double> features) const override;

 private:
  void require_data() const;

  KnnConfig config_;
  std::deque<Stored> window_;
  std::uint64_t next_order_ = 0;
};

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

// ---------------------------------------------------------------------------
// Hoeffding tree

struct HtConfig {
  double delta = 1e-7;
  double tie_threshold = 0.05;
  std::size_t grace_period = 200;
  std::optional<std::size_t> max_depth;
};

/// epsilon = sqrt(R^2 ln(1/delta) / (2n)). delta = 1 is accepted (epsilon 0).
double hoeffding_bound(double range, double delta, std::size_t n);

/// Running weight/mean/variance of one feature within one class, plus the
/// observed range.
struct GaussianSummary {
  double weight = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  double min = 0.0;
  double max = 0.0;

  void add(double value);
  double variance() const noexcept;
  /// Estimated weight of observations <= value.
  double weight_at_or_below(double value) const;
};

struct HtNode {
  std::optional<std::size_t> split_feature;
  std::optional<double> split_value;
  std::optional<std::array<std::size_t, 2>> children;  // indices into the node table
  std::vector<double> class_counts;
  std::size_t n_since_eval = 0;
  std::size_t depth = 0;
  // Leaf statistics: stats[feature][class].
  std::vector<std::vector<GaussianSummary>> stats;

  bool is_leaf() const noexcept { return !children.has_value(); }
  double weight() const noexcept;
};

struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

struct SplitDecision {
  bool split = false;
  std::optional<SplitCandidate> best;
  double best_gain = 0.0;
  double second_gain = 0.0;
  double epsilon = 0.0;
};

/// Entropy in bits of a count vector.
double entropy(std::span<const double> counts);
/// Parent entropy minus the weighted entropies of the two branches.
double information_gain(std::span<const double> parent, std::span<const double> left, std::span<const double> right);
/// Candidate thresholds of one feature: 10 evenly spaced points strictly
/// between the observed min and max.
std::vector<double> candidate_thresholds(const HtNode& leaf, std::size_t feature);
/// Best threshold of every feature that has candidates, in feature order.
std::vector<SplitCandidate> best_split_per_feature(const HtNode& leaf);
SplitDecision ht_try_split(const HtNode& leaf, const HtConfig& config, const StreamSchema& schema);

class HoeffdingTree final : public Learner {
 public:
  HoeffdingTree(StreamSchema schema, HtConfig config);

  std::string_view name() const override { return "HoeffdingTree"; }
  LearnerCaps caps() const override { return {true, true, false, false}; }
  LearnerPtr fresh(std::uint64_t seed) const override;
  LearnerPtr clone() const override { return std::make_unique<HoeffdingTree>(*this); }

  const HtConfig& config() const noexcept { return config_; }
  const std::vector<HtNode>& nodes() const noexcept { return nodes_; }
  std::size_t n_leaves() const noexcept;
  /// Index of the leaf reached by x (x[f] <= v goes left).
  std::size_t route(std::span<const double> x) const;

 protected:
  void do_update(const Instance& x) override;
  std::vector<double> do_proba(std::span<const double> features) const override;

 private:
  HtNode make_leaf(std::size_t depth) const;
  void split_leaf(std::size_t index, const SplitCandidate& split);

  HtConfig config_;
  std::vector<HtNode> nodes_;
};

}  // namespace aol
