#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace aol {

/// Stable 64-bit mix (SplitMix64 finalizer).
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Sub-seed for a named component: hash of (base seed, name, replica index).
/// Stable across platforms and runs.
std::uint64_t derive_seed(std::uint64_t base, std::string_view component, std::uint64_t replica = 0) noexcept;

/// Portable random source. The engine is mt19937_64 whose output sequence is
/// fixed by the standard; all distributions are implemented here because the
/// <random> distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }
  /// Standard normal via Box-Muller (no cached second value).
  double normal();
  /// Poisson(lambda) via Knuth multiplication; large lambdas are split into
  /// chunks of at most 30 and summed.
  int poisson(double lambda);

  /// Child generator for a named sub-stream.
  Rng split(std::string_view component, std::uint64_t replica = 0) const {
    return Rng(derive_seed(seed_, component, replica));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace aol
