#include <cmath>

#include <gtest/gtest.h>

#include "aol/drift.hpp"
#include "aol/error.hpp"
#include "aol/rng.hpp"

using namespace aol;

namespace {

// Textbook recurrences, written separately from the library.
struct RefDdm {
  double n = 0, p = 0, s = 0, pmin = 1e300, smin = 1e300;
  int update(bool err) {
    n += 1;
    p += ((err ? 1 : 0) - p) / n;
    s = std::sqrt(p * (1 - p) / n);
    if (n < 30) return 0;
    if (p + s < pmin + smin) pmin = p, smin = s;
    if (p + s > pmin + 3 * smin) return 2;
    if (p + s > pmin + 2 * smin) return 1;
    return 0;
  }
};

struct RefPh {
  double n = 0, mean = 0, m = 0, M = 0;
  int update(double x) {
    n += 1;
    mean += (x - mean) / n;
    m += x - mean - 0.005;
    M = n == 1 ? m : std::min(M, m);
    return m - M > 50 ? 2 : 0;
  }
};

}  // namespace

TEST(Ddm, WarmUpStaysStable) {
  Ddm d;
  for (int i = 0; i < 29; ++i) EXPECT_EQ(d.update_error(i % 2 == 0 || i > 20), DriftLevel::Stable);
}

TEST(Ddm, PeriodicTenPercentErrorsNeverLeaveStable) {
  for (int phase = 0; phase < 10; ++phase) {
    Ddm d;
    for (int i = 0; i < 10000; ++i) ASSERT_EQ(d.update_error((i + phase) % 10 == 0), DriftLevel::Stable) << phase << " " << i;
  }
}

TEST(Ddm, DetectsStepWithin500) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    Ddm d;
    std::optional<int> fired;
    for (int i = 0; i < 5000; ++i) {
      if (d.update_error(rng.bernoulli(0.1)) == DriftLevel::Drift) d.reset();
    }
    for (int i = 0; i < 500 && !fired; ++i)
      if (d.update_error(rng.bernoulli(0.5)) == DriftLevel::Drift) fired = i;
    EXPECT_TRUE(fired.has_value()) << "seed " << seed;
  }
}

TEST(Ddm, MatchesReferenceRecurrence) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    Ddm d;
    RefDdm r;
    for (int i = 0; i < 4000; ++i) {
      const bool e = rng.bernoulli(i < 2000 ? 0.15 : 0.35);
      const int want = r.update(e);
      const auto got = d.update_error(e);
      ASSERT_EQ(static_cast<int>(got), want) << i;
      EXPECT_NEAR(d.p(), r.p, 1e-12);
      if (got == DriftLevel::Drift) {
        d.reset();
        r = RefDdm{};
      }
    }
  }
}

TEST(Ddm, MinimaOnlyDecreaseAndLevelsNest) {
  Rng rng(4);
  Ddm d;
  double last = 1e300;
  for (int i = 0; i < 5000; ++i) {
    const auto level = d.update_error(rng.bernoulli(0.25));
    if (d.n() >= 30) {
      ASSERT_LE(d.p_min() + d.s_min(), last);
      last = d.p_min() + d.s_min();
    }
    EXPECT_GE(d.p(), 0.0);
    EXPECT_LE(d.p(), 1.0);
    if (level == DriftLevel::Drift) EXPECT_GT(d.p() + d.s(), d.p_min() + 2 * d.s_min());
  }
}

TEST(Ddm, FalseDriftsOnStationaryErrorsAreRare) {
  double total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(1000 + seed);
    Ddm d;
    for (int i = 0; i < 10000; ++i)
      if (d.update_error(rng.bernoulli(0.2)) == DriftLevel::Drift) {
        ++total;
        d.reset();
      }
  }
  EXPECT_LE(total / 20.0, 1.0);
}

TEST(Ddm, RejectsBadConfig) {
  EXPECT_THROW(Ddm({0, 2, 3}), Error);
  EXPECT_THROW(Ddm({30, 3, 2}), Error);
}

TEST(PageHinkleyTest, FirstObservationIsStable) {
  PageHinkley ph;
  EXPECT_EQ(ph.update(1e6), DriftLevel::Stable);
  EXPECT_EQ(ph.minimum(), ph.cumulative());
}

TEST(PageHinkleyTest, ConstantInputNeverDrifts) {
  PageHinkley ph;
  for (int i = 0; i < 100000; ++i) {
    ASSERT_EQ(ph.update(3.25), DriftLevel::Stable);
    ASSERT_LE(ph.cumulative() - ph.minimum(), 0.005 + 1e-12);
  }
}

TEST(PageHinkleyTest, MeanShiftDetectedWithin200) {
  Rng rng(2);
  PageHinkley ph;
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(ph.update(rng.normal() * 0.1), DriftLevel::Stable);
  int at = -1;
  for (int i = 0; i < 200 && at < 0; ++i)
    if (ph.update(1.0 + rng.normal() * 0.1) == DriftLevel::Drift) at = i;
  EXPECT_GE(at, 0);
}

TEST(PageHinkleyTest, MatchesReferenceAndInvariants) {
  Rng rng(6);
  PageHinkley ph;
  RefPh r;
  double last_min = 1e300;
  for (int i = 0; i < 3000; ++i) {
    const double x = (i < 1500 ? 0.0 : 0.2) + rng.normal();
    ASSERT_EQ(static_cast<int>(ph.update(x)), r.update(x));
    EXPECT_NEAR(ph.cumulative(), r.m, 1e-9);
    EXPECT_GE(ph.cumulative() - ph.minimum(), 0.0);
    EXPECT_LE(ph.minimum(), last_min);
    last_min = ph.minimum();
  }
}

TEST(PageHinkleyTest, ResetReplaysLikeNew) {
  Rng rng(8);
  std::vector<double> xs;
  for (int i = 0; i < 500; ++i) xs.push_back(rng.normal() + (i > 250 ? 2.0 : 0.0));
  PageHinkley used, fresh;
  for (double x : xs) used.update(x * 3);
  used.reset();
  for (double x : xs) EXPECT_EQ(used.update(x), fresh.update(x));
  EXPECT_EQ(used.cumulative(), fresh.cumulative());
}

TEST(PageHinkleyTest, ForgettingFactorTracksRecentMean) {
  PageHinkley ph({0.005, 50, 0.9});
  for (int i = 0; i < 200; ++i) ph.update(i < 100 ? 0.0 : 5.0);
  EXPECT_NEAR(ph.mean(), 5.0, 1e-3);
}

TEST(PageHinkleyTest, RejectsNonFinite) {
  PageHinkley ph;
  EXPECT_THROW(ph.update(std::nan("")), Error);
  EXPECT_THROW(PageHinkley({0.0, 0.0, 1.0}), Error);
  EXPECT_THROW(PageHinkley({0.0, 1.0, 0.0}), Error);
}
