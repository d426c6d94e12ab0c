#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <string_view>

namespace aol {

enum class DriftLevel { Stable = 0, Warning = 1, Drift = 2 };

std::string_view to_string(DriftLevel level) noexcept;

/// Common face of the detectors; resetting after a drift is the caller's job.
class DriftDetector {
 public:
  virtual ~DriftDetector() = default;
  virtual std::string_view name() const = 0;
  virtual DriftLevel update(double value) = 0;
  virtual void reset() = 0;
  virtual DriftLevel level() const = 0;
  virtual std::unique_ptr<DriftDetector> clone() const = 0;
};

struct DdmConfig {
  std::size_t min_n = 30;
  double warning_sigmas = 2.0;
  double drift_sigmas = 3.0;
};

/// Drift detection method over a binary error stream.
class Ddm final : public DriftDetector {
 public:
  explicit Ddm(DdmConfig config = {});

  std::string_view name() const override { return "DDM"; }
  /// Non-zero values count as errors.
  DriftLevel update(double value) override { return update_error(value != 0.0); }
  DriftLevel update_error(bool error);
  void reset() override;
  DriftLevel level() const override { return level_; }
  std::unique_ptr<DriftDetector> clone() const override { return std::make_unique<Ddm>(*this); }

  std::size_t n() const noexcept { return n_; }
  double p() const noexcept { return p_; }
  double s() const noexcept { return s_; }
  double p_min() const noexcept { return p_min_; }
  double s_min() const noexcept { return s_min_; }
  const DdmConfig& config() const noexcept { return config_; }

 private:
  DdmConfig config_;
  std::size_t n_ = 0;
  double p_ = 0.0;
  double s_ = 0.0;
  double p_min_ = std::numeric_limits<double>::infinity();
  double s_min_ = std::numeric_limits<double>::infinity();
  DriftLevel level_ = DriftLevel::Stable;
};

struct PageHinkleyConfig {
  double delta = 0.005;
  double lambda = 50.0;
  double alpha = 1.0;  // forgetting factor of the running mean; 1 = plain mean
};

/// Page-Hinkley test for an increase in the mean. No warning level.
class PageHinkley final : public DriftDetector {
 public:
  explicit PageHinkley(PageHinkleyConfig config = {});

  std::string_view name() const override { return "PageHinkley"; }
  DriftLevel update(double value) override;
  void reset() override;
  DriftLevel level() const override { return level_; }
  std::unique_ptr<DriftDetector> clone() const override { return std::make_unique<PageHinkley>(*this); }

  std::size_t n() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double cumulative() const noexcept { return m_; }
  double minimum() const noexcept { return min_m_; }
  const PageHinkleyConfig& config() const noexcept { return config_; }

 private:
  PageHinkleyConfig config_;
  std::size_t n_ = 0;
  double weight_ = 0.0;
  double mean_ = 0.0;
  double m_ = 0.0;
  double min_m_ = 0.0;
  DriftLevel level_ = DriftLevel::Stable;
};

}  // namespace aol
