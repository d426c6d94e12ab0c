#include <algorithm>
#include <numeric>

#include "aol/error.hpp"
#include "aol/learners.hpp"

namespace aol {

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

KnnLearner::KnnLearner(StreamSchema schema, KnnConfig config) : Learner(std::move(schema)), config_(config) {
  if (config_.k == 0 || config_.capacity == 0) fail(ErrorCode::InvalidArgument, "KNN k and capacity must be positive");
}

LearnerPtr KnnLearner::fresh(std::uint64_t) const { return std::make_unique<KnnLearner>(schema(), config_); }

void KnnLearner::do_update(const Instance& x) {
  const double label = regression() ? *x.target : static_cast<double>(*x.label);
  window_.push_back({x.features, label, next_order_++});
  while (window_.size() > config_.capacity) window_.pop_front();
}

std::vector<std::size_t> KnnLearner::neighbours(std::span<const double> x) const {
  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(window_.size());
  // The window is ordered oldest first, so ranking by (distance, position)
  // breaks ties toward older points.
  for (std::size_t i = 0; i < window_.size(); ++i) ranked.emplace_back(squared_distance(x, window_[i].features), i);
  const std::size_t k = std::min(config_.k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = ranked[i].second;
  return out;
}

void KnnLearner::require_data() const {
  if (window_.empty()) fail(ErrorCode::NotFitted, "KNN window is empty");
}

std::vector<double> KnnLearner::do_proba(std::span<const double> features) const {
  require_data();
  std::vector<double> votes(schema().n_classes(), 0.0);
  for (std::size_t i : neighbours(features)) votes[static_cast<std::size_t>(window_[i].label)] += 1.0;
  return votes;
}

double KnnLearner::do_regress(std::span<const double> features) const {
  require_data();
  const auto idx = neighbours(features);
  double sum = 0.0;
  for (std::size_t i : idx) sum += window_[i].label;
  return sum / static_cast<double>(idx.size());
}

}  // namespace aol
