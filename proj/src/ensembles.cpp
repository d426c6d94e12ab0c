#include "aol/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "aol/error.hpp"

namespace aol {

int poisson_draw(double lambda, Rng& rng) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail(ErrorCode::InvalidArgument, "poisson lambda must be positive");
  return rng.poisson(lambda);
}

std::vector<double> combine_proba(std::span<const std::vector<double>> probas, std::span<const double> weights) {
  if (probas.empty()) fail(ErrorCode::InvalidArgument, "ensemble has no members");
  if (weights.size() != probas.size()) fail(ErrorCode::InvalidArgument, "ensemble weights and members differ in length");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const bool uniform = !(total > 0.0);
  std::vector<double> out(probas.front().size(), 0.0);
  for (std::size_t m = 0; m < probas.size(); ++m) {
    const double w = uniform ? 1.0 : std::max(weights[m], 0.0);
    if (w == 0.0) continue;
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += w * probas[m][c];
  }
  normalize_proba(out);
  return out;
}

Prediction ensemble_predict(std::span<const std::vector<double>> probas, std::span<const double> weights) {
  Prediction p;
  p.proba = combine_proba(probas, weights);
  p.label = static_cast<ClassId>(argmax(p.proba));
  p.value = p.label;
  return p;
}

namespace {

std::vector<Instance> resample(std::span<const Instance> batch, const std::function<int()>& draw) {
  std::vector<Instance> out;
  for (const Instance& x : batch)
    for (int k = draw(); k > 0; --k) out.push_back(x);
  return out;
}

void fit_or_start(Learner& learner, std::span<const Instance> batch) {
  if (batch.empty())
    learner.start_empty();
  else
    learner.fit(batch);
}

}  // namespace

// OzaBagging ----------------------------------------------------------------------

OzaBagging::OzaBagging(const Learner& base, BaggingConfig config, std::uint64_t seed)
    : Learner(base.schema()), base_(base.fresh(seed)), config_(config), rng_(seed) {
  if (config_.n_members == 0) fail(ErrorCode::InvalidArgument, "OzaBagging needs at least one member");
  if (!(config_.lambda > 0.0)) fail(ErrorCode::InvalidArgument, "OzaBagging lambda must be positive");
  for (std::size_t i = 0; i < config_.n_members; ++i) members_.push_back(base.fresh(derive_seed(seed, "bagging.member", i)));
}

OzaBagging::OzaBagging(const OzaBagging& other)
    : Learner(other), base_(other.base_->clone()), config_(other.config_), rng_(other.rng_) {
  for (const auto& m : other.members_) members_.push_back(m->clone());
}

LearnerCaps OzaBagging::caps() const {
  LearnerCaps c = base_->caps();
  c.drift_adaptive = false;
  return c;
}

LearnerPtr OzaBagging::fresh(std::uint64_t seed) const { return std::make_unique<OzaBagging>(*base_, config_, seed); }

int OzaBagging::draw() { return config_.fixed_weight ? *config_.fixed_weight : poisson_draw(config_.lambda, rng_); }

void OzaBagging::do_fit(std::span<const Instance> batch) {
  for (auto& m : members_) fit_or_start(*m, resample(batch, [this] { return draw(); }));
}

void OzaBagging::do_update(const Instance& x) {
  for (auto& m : members_)
    for (int k = draw(); k > 0; --k) m->partial_fit(x);
}

std::vector<double> OzaBagging::do_proba(std::span<const double> features) const {
  Instance q;
  q.features.assign(features.begin(), features.end());
  std::vector<std::vector<double>> probas;
  for (const auto& m : members_) probas.push_back(m->predict_proba(q));
  const std::vector<double> weights(members_.size(), 1.0);
  return combine_proba(probas, weights);
}

double OzaBagging::do_regress(std::span<const double> features) const {
  Instance q;
  q.features.assign(features.begin(), features.end());
  double sum = 0.0;
  for (const auto& m : members_) sum += m->predict(q).value;
  return sum / static_cast<double>(members_.size());
}

// AdaptiveForest ----------------------------------------------------------------------

AdaptiveForest::AdaptiveForest(StreamSchema schema, ForestConfig config, std::uint64_t seed)
    : Learner(std::move(schema)), config_(config), rng_(seed) {
  if (regression()) fail(ErrorCode::Unsupported, "ARF/SRP are classification-only");
  if (config_.n_members == 0) fail(ErrorCode::InvalidArgument, "forest needs at least one member");
  if (!(config_.lambda > 0.0)) fail(ErrorCode::InvalidArgument, "forest lambda must be positive");
  if (!(config_.subspace_fraction > 0.0 && config_.subspace_fraction <= 1.0))
    fail(ErrorCode::InvalidArgument, "subspace_fraction must lie in (0, 1]");
  for (std::size_t i = 0; i < config_.n_members; ++i) {
    Member m{nullptr, draw_mask(), Ddm(config_.detector), nullptr};
    m.learner = new_tree(m.mask.size());
    members_.push_back(std::move(m));
  }
}

AdaptiveForest::AdaptiveForest(const AdaptiveForest& other)
    : Learner(other),
      config_(other.config_),
      rng_(other.rng_),
      replacements_(other.replacements_),
      fixed_weight_(other.fixed_weight_) {
  for (const Member& m : other.members_)
    members_.push_back(Member{m.learner->clone(), m.mask, m.detector, m.background ? m.background->clone() : nullptr});
}

LearnerPtr AdaptiveForest::fresh(std::uint64_t seed) const { return std::make_unique<AdaptiveForest>(schema(), config_, seed); }

std::size_t AdaptiveForest::subspace_size() const noexcept {
  const auto d = static_cast<double>(schema().n_features);
  const double raw = config_.mode == ForestMode::Arf ? std::ceil(std::sqrt(d)) : std::ceil(config_.subspace_fraction * d);
  return std::clamp<std::size_t>(static_cast<std::size_t>(raw), 1, schema().n_features);
}

std::vector<std::size_t> AdaptiveForest::draw_mask() {
  std::vector<std::size_t> all(schema().n_features);
  std::iota(all.begin(), all.end(), 0);
  const std::size_t k = subspace_size();
  for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + rng_.below(all.size() - i)]);
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

LearnerPtr AdaptiveForest::new_tree(std::size_t n_features) {
  auto tree = std::make_unique<HoeffdingTree>(StreamSchema::classification(n_features, schema().n_classes()), config_.tree);
  tree->start_empty();
  return tree;
}

Instance AdaptiveForest::project(const Instance& x, std::span<const std::size_t> mask) const {
  Instance out;
  out.index = x.index;
  out.label = x.label;
  out.features.reserve(mask.size());
  for (std::size_t j : mask) out.features.push_back(x.features[j]);
  return out;
}

int AdaptiveForest::draw() { return fixed_weight_ ? *fixed_weight_ : poisson_draw(config_.lambda, rng_); }

void AdaptiveForest::do_fit(std::span<const Instance> batch) {
  for (Member& m : members_) {
    std::vector<Instance> local;
    for (const Instance& x : batch)
      for (int k = draw(); k > 0; --k) local.push_back(project(x, m.mask));
    m.learner = new_tree(m.mask.size());
    if (!local.empty()) m.learner->fit(local);
  }
}

void AdaptiveForest::do_update(const Instance& x) {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    Member& m = members_[i];
    const Instance local = project(x, m.mask);
    const bool error = m.learner->predict(local).label != *x.label;
    const int k = draw();
    for (int r = 0; r < k; ++r) {
      m.learner->partial_fit(local);
      if (m.background) m.background->partial_fit(local);
    }
    const DriftLevel level = m.detector.update_error(error);
    if (level == DriftLevel::Drift) {
      const bool promote = config_.mode == ForestMode::Arf && m.background != nullptr;
      if (promote) {
        m.learner = std::move(m.background);
      } else {
        if (config_.mode == ForestMode::Srp) m.mask = draw_mask();
        m.learner = new_tree(m.mask.size());
      }
      m.background.reset();
      m.detector.reset();
      replacements_.push_back({n_seen() + 1, i, promote});
    } else if (level == DriftLevel::Warning && config_.mode == ForestMode::Arf && !m.background) {
      m.background = new_tree(m.mask.size());
    }
  }
}

std::vector<double> AdaptiveForest::do_proba(std::span<const double> features) const {
  Instance q;
  q.features.assign(features.begin(), features.end());
  std::vector<std::vector<double>> probas;
  probas.reserve(members_.size());
  for (const Member& m : members_) probas.push_back(m.learner->predict_proba(project(q, m.mask)));
  const std::vector<double> weights(members_.size(), 1.0);
  return combine_proba(probas, weights);
}

// ChunkEnsemble --------------------------------------------------------------------------

double member_mse(const Learner& member, std::span<const Instance> chunk) {
  if (chunk.empty()) fail(ErrorCode::InvalidArgument, "member_mse on an empty chunk");
  double sum = 0.0;
  for (const Instance& x : chunk) {
    const double miss = 1.0 - member.predict_proba(x)[static_cast<std::size_t>(*x.label)];
    sum += miss * miss;
  }
  return sum / static_cast<double>(chunk.size());
}

double reference_mse(std::span<const Instance> chunk, std::size_t n_classes) {
  if (chunk.empty()) fail(ErrorCode::InvalidArgument, "reference_mse on an empty chunk");
  std::vector<double> freq(n_classes, 0.0);
  for (const Instance& x : chunk) freq[static_cast<std::size_t>(*x.label)] += 1.0;
  double out = 0.0;
  for (double f : freq) {
    const double p = f / static_cast<double>(chunk.size());
    out += p * (1.0 - p);
  }
  return out;
}

ChunkEnsemble::ChunkEnsemble(const Learner& base, ChunkConfig config, std::uint64_t seed)
    : Learner(base.schema()), base_(base.fresh(seed)), config_(config), rng_(seed) {
  if (regression()) fail(ErrorCode::Unsupported, "ChunkEnsemble is classification-only");
  if (config_.chunk_size == 0 || config_.max_members == 0)
    fail(ErrorCode::InvalidArgument, "ChunkEnsemble chunk_size and max_members must be positive");
}

ChunkEnsemble::ChunkEnsemble(const ChunkEnsemble& other)
    : Learner(other),
      base_(other.base_->clone()),
      config_(other.config_),
      rng_(other.rng_),
      buffer_(other.buffer_),
      commits_(other.commits_) {
  for (const Member& m : other.members_) members_.push_back({m.learner->clone(), m.weight, m.born});
}

LearnerPtr ChunkEnsemble::fresh(std::uint64_t seed) const { return std::make_unique<ChunkEnsemble>(*base_, config_, seed); }

void ChunkEnsemble::add_member(LearnerPtr learner, double weight) {
  members_.push_back({std::move(learner), std::max(weight, 0.0), commits_++});
}

void ChunkEnsemble::commit(std::span<const Instance> chunk) {
  if (chunk.empty()) fail(ErrorCode::InvalidArgument, "ChunkEnsemble commit on an empty chunk");
  LearnerPtr fresh_member = base_->fresh(rng_.next_u64());
  fresh_member->fit(chunk);

  const double reference = reference_mse(chunk, schema().n_classes());
  for (Member& m : members_) m.weight = std::max(0.0, reference - member_mse(*m.learner, chunk));
  const double w_new = std::max(config_.weight_floor, reference - member_mse(*fresh_member, chunk));
  members_.push_back({std::move(fresh_member), w_new, commits_++});

  while (members_.size() > config_.max_members) {
    // Lowest weight goes; among equals the oldest.
    auto victim = std::min_element(members_.begin(), members_.end(), [](const Member& a, const Member& b) {
      return a.weight < b.weight || (a.weight == b.weight && a.born < b.born);
    });
    members_.erase(victim);
  }
}

void ChunkEnsemble::do_fit(std::span<const Instance> batch) {
  members_.clear();
  buffer_.clear();
  commit(batch);
}

void ChunkEnsemble::do_update(const Instance& x) {
  buffer_.push_back(x);
  if (buffer_.size() == config_.chunk_size) {
    commit(buffer_);
    buffer_.clear();
  }
}

std::vector<double> ChunkEnsemble::do_proba(std::span<const double> features) const {
  if (members_.empty()) return std::vector<double>(schema().n_classes(), 1.0);
  Instance q;
  q.features.assign(features.begin(), features.end());
  std::vector<std::vector<double>> probas;
  std::vector<double> weights;
  for (const Member& m : members_) {
    probas.push_back(m.learner->predict_proba(q));
    weights.push_back(m.weight);
  }
  return combine_proba(probas, weights);
}

}  // namespace aol
