#include "aol/drift.hpp"

#include <algorithm>
#include <cmath>

#include "aol/error.hpp"

namespace aol {

std::string_view to_string(DriftLevel level) noexcept {
  switch (level) {
    case DriftLevel::Stable: return "stable";
    case DriftLevel::Warning: return "warning";
    case DriftLevel::Drift: return "drift";
  }
  return "unknown";
}

Ddm::Ddm(DdmConfig config) : config_(config) {
  if (config_.min_n == 0) fail(ErrorCode::InvalidArgument, "DDM min_n must be positive");
  if (!(config_.warning_sigmas > 0.0) || !(config_.drift_sigmas >= config_.warning_sigmas))
    fail(ErrorCode::InvalidArgument, "DDM needs 0 < warning_sigmas <= drift_sigmas");
}

void Ddm::reset() { *this = Ddm(config_); }

DriftLevel Ddm::update_error(bool error) {
  ++n_;
  p_ += ((error ? 1.0 : 0.0) - p_) / static_cast<double>(n_);
  s_ = std::sqrt(p_ * (1.0 - p_) / static_cast<double>(n_));
  level_ = DriftLevel::Stable;
  if (n_ < config_.min_n) return level_;

  if (p_ + s_ < p_min_ + s_min_) {
    p_min_ = p_;
    s_min_ = s_;
  }
  // Strict comparisons: with s_min = 0 (an error-free warm-up) a non-strict
  // test would fire on every step.
  if (p_ + s_ > p_min_ + config_.drift_sigmas * s_min_)
    level_ = DriftLevel::Drift;
  else if (p_ + s_ > p_min_ + config_.warning_sigmas * s_min_)
    level_ = DriftLevel::Warning;
  return level_;
}

PageHinkley::PageHinkley(PageHinkleyConfig config) : config_(config) {
  if (!(config_.delta >= 0.0)) fail(ErrorCode::InvalidArgument, "PageHinkley delta must be non-negative");
  if (!(config_.lambda > 0.0)) fail(ErrorCode::InvalidArgument, "PageHinkley lambda must be positive");
  if (!(config_.alpha > 0.0 && config_.alpha <= 1.0)) fail(ErrorCode::InvalidArgument, "PageHinkley alpha must lie in (0, 1]");
}

void PageHinkley::reset() { *this = PageHinkley(config_); }

DriftLevel PageHinkley::update(double value) {
  if (!std::isfinite(value)) fail(ErrorCode::InvalidArgument, "PageHinkley input is not finite");
  ++n_;
  weight_ = config_.alpha * weight_ + 1.0;
  mean_ += (value - mean_) / weight_;
  m_ += value - mean_ - config_.delta;
  min_m_ = n_ == 1 ? m_ : std::min(min_m_, m_);
  level_ = m_ - min_m_ > config_.lambda ? DriftLevel::Drift : DriftLevel::Stable;
  return level_;
}

}  // namespace aol
