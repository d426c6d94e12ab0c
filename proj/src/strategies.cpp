#include "aol/strategies.hpp"

#include <algorithm>
#include <cmath>

#include "aol/error.hpp"

namespace aol {

namespace {

constexpr double kBudgetSlack = 1e-12;

double max_proba(std::span<const double> proba) {
  if (proba.empty()) fail(ErrorCode::InvalidArgument, "query strategy needs a probability vector");
  return *std::max_element(proba.begin(), proba.end());
}

void check_budget(double b) {
  if (!(b >= 0.0 && b <= 1.0)) fail(ErrorCode::InvalidArgument, "budget must lie in [0, 1]");
}

}  // namespace

bool BudgetState::affordable() const noexcept {
  return static_cast<double>(queried + 1) <= budget * static_cast<double>(seen + 1) + kBudgetSlack;
}

void BudgetState::record(bool queried_now) noexcept {
  ++seen;
  if (queried_now) ++queried;
}

bool should_query_random(Rng& rng, BudgetState& budget) {
  const bool q = rng.uniform() < budget.budget;
  budget.record(q);
  return q;
}

bool should_query_fixed(std::span<const double> proba, double theta, BudgetState& budget) {
  const bool q = max_proba(proba) <= theta && budget.affordable();
  budget.record(q);
  return q;
}

bool should_query_variable(VarUncertaintyState& state, std::span<const double> proba) {
  const double top = max_proba(proba);
  bool q = false;
  if (state.budget.affordable()) {
    if (top <= state.theta) {
      q = true;
      state.theta *= 1.0 - state.step;
    } else {
      state.theta = std::min(1.0, state.theta * (1.0 + state.step));
    }
  }
  state.budget.record(q);
  return q;
}

RandomStrategy::RandomStrategy(double budget, std::uint64_t seed) : budget_{budget, 0, 0}, rng_(seed) { check_budget(budget); }

FixedUncertaintyStrategy::FixedUncertaintyStrategy(double budget, double theta) : budget_{budget, 0, 0}, theta_(theta) {
  check_budget(budget);
  if (!(theta > 0.0 && theta <= 1.0)) fail(ErrorCode::InvalidArgument, "FixedUncertainty theta must lie in (0, 1]");
}

VariableUncertaintyStrategy::VariableUncertaintyStrategy(double budget, double theta, double step)
    : state_{theta, step, BudgetState{budget, 0, 0}} {
  check_budget(budget);
  if (!(theta > 0.0 && theta <= 1.0)) fail(ErrorCode::InvalidArgument, "VariableUncertainty theta must lie in (0, 1]");
  if (!(step > 0.0 && step < 1.0)) fail(ErrorCode::InvalidArgument, "VariableUncertainty step must lie in (0, 1)");
}

}  // namespace aol
