#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "aol/error.hpp"
#include "aol/learners.hpp"

namespace aol {

double hoeffding_bound(double range, double delta, std::size_t n) {
  if (!(range > 0.0) || !(delta > 0.0) || !(delta <= 1.0) || n == 0)
    fail(ErrorCode::InvalidArgument, "hoeffding_bound needs range > 0, 0 < delta <= 1, n >= 1");
  return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * static_cast<double>(n)));
}

void GaussianSummary::add(double value) {
  if (weight == 0.0) {
    min = max = value;
  } else {
    min = std::min(min, value);
    max = std::max(max, value);
  }
  weight += 1.0;
  const double delta = value - mean;
  mean += delta / weight;
  m2 += delta * (value - mean);
}

double GaussianSummary::variance() const noexcept { return weight > 1.0 ? m2 / (weight - 1.0) : 0.0; }

double GaussianSummary::weight_at_or_below(double value) const {
  if (weight == 0.0 || value < min) return 0.0;
  if (value >= max) return weight;
  const double sd = std::sqrt(variance());
  if (sd <= 0.0) return value >= mean ? weight : 0.0;
  return weight * 0.5 * std::erfc(-(value - mean) / (sd * std::sqrt(2.0)));
}

double HtNode::weight() const noexcept { return std::accumulate(class_counts.begin(), class_counts.end(), 0.0); }

double entropy(std::span<const double> counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts)
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log2(p);
    }
  return h;
}

double information_gain(std::span<const double> parent, std::span<const double> left, std::span<const double> right) {
  const double wl = std::accumulate(left.begin(), left.end(), 0.0);
  const double wr = std::accumulate(right.begin(), right.end(), 0.0);
  const double total = wl + wr;
  if (total <= 0.0) return 0.0;
  return entropy(parent) - (wl / total) * entropy(left) - (wr / total) * entropy(right);
}

std::vector<double> candidate_thresholds(const HtNode& leaf, std::size_t feature) {
  bool seen = false;
  double lo = 0.0, hi = 0.0;
  for (const GaussianSummary& g : leaf.stats[feature]) {
    if (g.weight == 0.0) continue;
    lo = seen ? std::min(lo, g.min) : g.min;
    hi = seen ? std::max(hi, g.max) : g.max;
    seen = true;
  }
  std::vector<double> out;
  if (!seen || !(hi > lo)) return out;
  constexpr int kCandidates = 10;
  for (int i = 1; i <= kCandidates; ++i) out.push_back(lo + (hi - lo) * i / (kCandidates + 1));
  return out;
}

std::vector<SplitCandidate> best_split_per_feature(const HtNode& leaf) {
  std::vector<SplitCandidate> out;
  const std::size_t n_classes = leaf.class_counts.size();
  std::vector<double> left(n_classes), right(n_classes);
  for (std::size_t f = 0; f < leaf.stats.size(); ++f) {
    std::optional<SplitCandidate> best;
    for (double v : candidate_thresholds(leaf, f)) {
      for (std::size_t c = 0; c < n_classes; ++c) {
        const GaussianSummary& g = leaf.stats[f][c];
        left[c] = std::clamp(g.weight_at_or_below(v), 0.0, g.weight);
        right[c] = g.weight - left[c];
      }
      const double gain = information_gain(leaf.class_counts, left, right);
      if (!best || gain > best->gain) best = SplitCandidate{f, v, gain};
    }
    if (best) out.push_back(*best);
  }
  return out;
}

SplitDecision ht_try_split(const HtNode& leaf, const HtConfig& config, const StreamSchema& schema) {
  SplitDecision d;
  const double n = leaf.weight();
  if (n <= 0.0) return d;
  const double range = std::log2(static_cast<double>(std::max<std::size_t>(schema.n_classes(), 2)));
  d.epsilon = hoeffding_bound(range, config.delta, static_cast<std::size_t>(n));

  // The second-best merit is taken across features; a single candidate
  // competes with the null split (gain 0).
  for (const SplitCandidate& c : best_split_per_feature(leaf)) {
    if (!d.best || c.gain > d.best->gain) {
      if (d.best) d.second_gain = d.best->gain;
      d.best = c;
    } else if (c.gain > d.second_gain) {
      d.second_gain = c.gain;
    }
  }
  if (!d.best) return d;
  d.best_gain = d.best->gain;
  if (d.best_gain <= 0.0) return d;
  d.split = (d.best_gain - d.second_gain > d.epsilon) || (d.epsilon < config.tie_threshold);
  return d;
}

HoeffdingTree::HoeffdingTree(StreamSchema schema, HtConfig config) : Learner(std::move(schema)), config_(config) {
  if (regression()) fail(ErrorCode::Unsupported, "HoeffdingTree is classification-only");
  if (!(config_.delta > 0.0 && config_.delta < 1.0)) fail(ErrorCode::InvalidArgument, "HoeffdingTree delta must lie in (0, 1)");
  if (!(config_.tie_threshold > 0.0)) fail(ErrorCode::InvalidArgument, "HoeffdingTree tie_threshold must be positive");
  if (config_.grace_period == 0) fail(ErrorCode::InvalidArgument, "HoeffdingTree grace_period must be positive");
  if (config_.max_depth && *config_.max_depth == 0) fail(ErrorCode::InvalidArgument, "HoeffdingTree max_depth must be positive");
  nodes_.push_back(make_leaf(0));
}

LearnerPtr HoeffdingTree::fresh(std::uint64_t) const { return std::make_unique<HoeffdingTree>(schema(), config_); }

HtNode HoeffdingTree::make_leaf(std::size_t depth) const {
  HtNode leaf;
  leaf.depth = depth;
  leaf.class_counts.assign(schema().n_classes(), 0.0);
  leaf.stats.assign(schema().n_features, std::vector<GaussianSummary>(schema().n_classes()));
  return leaf;
}

std::size_t HoeffdingTree::n_leaves() const noexcept {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const HtNode& n) { return n.is_leaf(); }));
}

std::size_t HoeffdingTree::route(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const HtNode& n = nodes_[i];
    i = x[*n.split_feature] <= *n.split_value ? (*n.children)[0] : (*n.children)[1];
  }
  return i;
}

void HoeffdingTree::do_update(const Instance& x) {
  const std::size_t index = route(x.features);
  const auto y = static_cast<std::size_t>(*x.label);
  {
    HtNode& leaf = nodes_[index];
    leaf.class_counts[y] += 1.0;
    for (std::size_t f = 0; f < x.features.size(); ++f) leaf.stats[f][y].add(x.features[f]);
    if (++leaf.n_since_eval < config_.grace_period) return;
    leaf.n_since_eval = 0;
    if (config_.max_depth && leaf.depth >= *config_.max_depth) return;
  }
  const SplitDecision d = ht_try_split(nodes_[index], config_, schema());
  if (d.split) split_leaf(index, *d.best);
}

void HoeffdingTree::split_leaf(std::size_t index, const SplitCandidate& split) {
  const std::size_t depth = nodes_[index].depth + 1;
  const std::size_t left = nodes_.size();
  nodes_.push_back(make_leaf(depth));
  nodes_.push_back(make_leaf(depth));
  HtNode& node = nodes_[index];
  node.split_feature = split.feature;
  node.split_value = split.threshold;
  node.children = std::array<std::size_t, 2>{left, left + 1};
  node.stats.clear();
  node.stats.shrink_to_fit();
}

std::vector<double> HoeffdingTree::do_proba(std::span<const double> features) const {
  // Leaf frequencies; a leaf that has not seen data yet borrows the counts of
  // its nearest ancestor (frozen at the moment that ancestor split).
  std::size_t i = 0;
  const std::vector<double>* best = &nodes_[0].class_counts;
  while (true) {
    const HtNode& n = nodes_[i];
    if (n.weight() > 0.0) best = &n.class_counts;
    if (n.is_leaf()) break;
    i = features[*n.split_feature] <= *n.split_value ? (*n.children)[0] : (*n.children)[1];
  }
  return *best;
}

}  // namespace aol
