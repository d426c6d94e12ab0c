#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>

#include "aol/rng.hpp"

namespace aol {

/// Lifetime label budget: spend = queried / seen.
struct BudgetState {
  double budget = 1.0;
  std::size_t seen = 0;
  std::size_t queried = 0;

  double spend() const noexcept { return seen > 0 ? static_cast<double>(queried) / static_cast<double>(seen) : 0.0; }
  /// True when querying the current instance keeps spend <= budget.
  bool affordable() const noexcept;
  void record(bool queried_now) noexcept;
};

/// Queries with probability b.
bool should_query_random(Rng& rng, BudgetState& budget);

/// Queries iff max(proba) <= theta and the budget gate allows it.
bool should_query_fixed(std::span<const double> proba, double theta, BudgetState& budget);

struct VarUncertaintyState {
  double theta = 1.0;
  double step = 0.01;
  BudgetState budget;
};

/// Variable-uncertainty rule: outside the budget nothing changes; an
/// uncertain instance is queried and tightens theta by (1 - s); a confident
/// one relaxes theta by (1 + s), capped at 1.
bool should_query_variable(VarUncertaintyState& state, std::span<const double> proba);

/// Per-instance labeling decision used by the prequential runner.
class QueryStrategy {
 public:
  virtual ~QueryStrategy() = default;
  virtual std::string_view name() const = 0;
  /// Whether decide() reads the probability vector.
  virtual bool needs_proba() const = 0;
  virtual bool decide(std::span<const double> proba) = 0;
  virtual const BudgetState& budget() const = 0;
};

using StrategyPtr = std::unique_ptr<QueryStrategy>;

class SupervisedStrategy final : public QueryStrategy {
 public:
  std::string_view name() const override { return "supervised"; }
  bool needs_proba() const override { return false; }
  bool decide(std::span<const double>) override {
    budget_.record(true);
    return true;
  }
  const BudgetState& budget() const override { return budget_; }

 private:
  BudgetState budget_{1.0, 0, 0};
};

class RandomStrategy final : public QueryStrategy {
 public:
  RandomStrategy(double budget, std::uint64_t seed);
  std::string_view name() const override { return "Random"; }
  bool needs_proba() const override { return false; }
  bool decide(std::span<const double>) override { return should_query_random(rng_, budget_); }
  const BudgetState& budget() const override { return budget_; }

 private:
  BudgetState budget_;
  Rng rng_;
};

class FixedUncertaintyStrategy final : public QueryStrategy {
 public:
  FixedUncertaintyStrategy(double budget, double theta);
  std::string_view name() const override { return "FixedUncertainty"; }
  bool needs_proba() const override { return true; }
  bool decide(std::span<const double> proba) override { return should_query_fixed(proba, theta_, budget_); }
  const BudgetState& budget() const override { return budget_; }

 private:
  BudgetState budget_;
  double theta_;
};

class VariableUncertaintyStrategy final : public QueryStrategy {
 public:
  VariableUncertaintyStrategy(double budget, double theta, double step);
  std::string_view name() const override { return "VariableUncertainty"; }
  bool needs_proba() const override { return true; }
  bool decide(std::span<const double> proba) override { return should_query_variable(state_, proba); }
  const BudgetState& budget() const override { return state_.budget; }
  double theta() const noexcept { return state_.theta; }

 private:
  VarUncertaintyState state_;
};

}  // namespace aol
