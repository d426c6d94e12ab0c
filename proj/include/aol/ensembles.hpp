#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aol/drift.hpp"
#include "aol/learners.hpp"
#include "aol/rng.hpp"

namespace aol {

/// Poisson(lambda) training weight for online bagging. lambda must be > 0.
int poisson_draw(double lambda, Rng& rng);

/// Weighted average of member probability vectors, renormalized. Zero-weight
/// members are excluded; if every weight is zero the plain average is used.
std::vector<double> combine_proba(std::span<const std::vector<double>> probas, std::span<const double> weights);
Prediction ensemble_predict(std::span<const std::vector<double>> probas, std::span<const double> weights);

// ---------------------------------------------------------------------------

struct BaggingConfig {
  std::size_t n_members = 10;
  double lambda = 1.0;
  /// Test hook: every member trains exactly this many times per instance.
  std::optional<int> fixed_weight;
};

/// Oza online bagging over copies of a base learner.
class OzaBagging final : public Learner {
 public:
  OzaBagging(const Learner& base, BaggingConfig config, std::uint64_t seed);
  OzaBagging(const OzaBagging& other);
  OzaBagging& operator=(const OzaBagging&) = delete;

  std::string_view name() const override { return "OzaBagging"; }
  LearnerCaps caps() const override;
  LearnerPtr fresh(std::uint64_t seed) const override;
  LearnerPtr clone() const override { return std::make_unique<OzaBagging>(*this); }

  std::size_t size() const noexcept { return members_.size(); }
  const Learner& member(std::size_t i) const { return *members_[i]; }

 protected:
  void do_fit(std::span<const Instance> batch) override;
  void do_update(const Instance& x) override;
  std::vector<double> do_proba(std::span<const double> features) const override;
  double do_regress(std::span<const double> features) const override;

 private:
  int draw();

  LearnerPtr base_;
  BaggingConfig config_;
  Rng rng_;
  std::vector<LearnerPtr> members_;
};

// ---------------------------------------------------------------------------

enum class ForestMode { Arf, Srp };

struct ForestConfig {
  ForestMode mode = ForestMode::Arf;
  std::size_t n_members = 10;
  double lambda = 6.0;
  double subspace_fraction = 0.6;  // SRP only; ARF uses ceil(sqrt(d))
  HtConfig tree{0.01, 0.05, 50, std::nullopt};
  DdmConfig detector;
};

struct ReplacementEvent {
  std::size_t step;    // n_seen of the forest when the drift fired
  std::size_t member;
  bool promoted;       // background learner took over
};

/// Adaptive random forest style ensemble of Hoeffding trees, each on a random
/// feature subspace with its own DDM. Warning starts a background tree, drift
/// swaps it in (or a fresh tree). SRP mode draws larger subspaces, resamples
/// them on every replacement and never promotes backgrounds.
class AdaptiveForest final : public Learner {
 public:
  AdaptiveForest(StreamSchema schema, ForestConfig config, std::uint64_t seed);
  AdaptiveForest(const AdaptiveForest& other);
  AdaptiveForest& operator=(const AdaptiveForest&) = delete;

  std::string_view name() const override { return config_.mode == ForestMode::Arf ? "ARF" : "SRP"; }
  LearnerCaps caps() const override { return {true, true, false, true}; }
  LearnerPtr fresh(std::uint64_t seed) const override;
  LearnerPtr clone() const override { return std::make_unique<AdaptiveForest>(*this); }

  struct Member {
    LearnerPtr learner;
    std::vector<std::size_t> mask;  // sorted feature indexes
    Ddm detector;
    LearnerPtr background;
  };

  const ForestConfig& config() const noexcept { return config_; }
  std::size_t size() const noexcept { return members_.size(); }
  const Member& member(std::size_t i) const { return members_[i]; }
  const std::vector<ReplacementEvent>& replacements() const noexcept { return replacements_; }
  std::size_t subspace_size() const noexcept;

  /// Test hook: replaces the Poisson draws with a constant.
  void set_fixed_weight(std::optional<int> k) { fixed_weight_ = k; }

 protected:
  void do_fit(std::span<const Instance> batch) override;
  void do_update(const Instance& x) override;
  std::vector<double> do_proba(std::span<const double> features) const override;

 private:
  std::vector<std::size_t> draw_mask();
  LearnerPtr new_tree(std::size_t n_features);
  Instance project(const Instance& x, std::span<const std::size_t> mask) const;
  int draw();

  ForestConfig config_;
  Rng rng_;
  std::vector<Member> members_;
  std::vector<ReplacementEvent> replacements_;
  std::optional<int> fixed_weight_;
};

// ---------------------------------------------------------------------------

struct ChunkConfig {
  std::size_t chunk_size = 500;
  std::size_t max_members = 10;
  double weight_floor = 1e-6;
};

/// Mean of (1 - p(y))^2 over a labeled chunk.
double member_mse(const Learner& member, std::span<const Instance> chunk);
/// sum_c f(c) (1 - f(c)) with f the chunk's class frequencies.
double reference_mse(std::span<const Instance> chunk, std::size_t n_classes);

/// Chunk-based weighted ensemble: every full chunk trains a new member and
/// reweights all members by max(0, MSE_r - MSE_i).
class ChunkEnsemble final : public Learner {
 public:
  ChunkEnsemble(const Learner& base, ChunkConfig config, std::uint64_t seed);
  ChunkEnsemble(const ChunkEnsemble& other);
  ChunkEnsemble& operator=(const ChunkEnsemble&) = delete;

  std::string_view name() const override { return "ChunkEnsemble"; }
  LearnerCaps caps() const override { return {true, true, false, true}; }
  LearnerPtr fresh(std::uint64_t seed) const override;
  LearnerPtr clone() const override { return std::make_unique<ChunkEnsemble>(*this); }

  struct Member {
    LearnerPtr learner;
    double weight = 0.0;
    std::size_t born = 0;  // commit counter at creation
  };

  const ChunkConfig& config() const noexcept { return config_; }
  const std::vector<Member>& members() const noexcept { return members_; }
  const std::vector<Instance>& buffer() const noexcept { return buffer_; }

  /// Trains a member on `chunk`, reweights everyone, evicts past max_members.
  void commit(std::span<const Instance> chunk);
  /// Adds a pre-built member; used by tests to stage weighting scenarios.
  void add_member(LearnerPtr learner, double weight);

 protected:
  void do_fit(std::span<const Instance> batch) override;
  void do_update(const Instance& x) override;
  std::vector<double> do_proba(std::span<const double> features) const override;

 private:
  LearnerPtr base_;
  ChunkConfig config_;
  Rng rng_;
  std::vector<Member> members_;
  std::vector<Instance> buffer_;
  std::size_t commits_ = 0;
};

}  // namespace aol
