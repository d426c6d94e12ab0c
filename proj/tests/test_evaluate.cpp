#include <cmath>

#include <gtest/gtest.h>

#include "aol/error.hpp"
#include "aol/evaluate.hpp"
#include "aol/learners.hpp"
#include "aol/streams.hpp"
#include "test_util.hpp"

using namespace aol;
using aol::test::labeled;

namespace {

ComponentSpec spec(const std::string& name, Params params = Params::object()) {
  ComponentSpec c;
  c.name = name;
  c.params = std::move(params);
  return c;
}

ExperimentConfig basic(std::vector<std::string> models, std::vector<std::string> streams, std::size_t n = 1000,
                       std::size_t pre = 100) {
  ExperimentConfig c;
  c.n_samples = n;
  c.n_pretrain = pre;
  for (auto& m : models) c.models.push_back(spec(m));
  for (auto& s : streams) c.streams.push_back(spec(s));
  return c;
}

PrequentialRecord rec(std::size_t step, double truth, double pred, bool q = true) {
  PrequentialRecord r;
  r.step = step;
  r.truth = truth;
  r.prediction = pred;
  r.queried = q;
  r.model = "m";
  r.stream = "s";
  return r;
}

ResolvedJob manual_job(LearnerPtr learner, StreamPtr stream, StrategyPtr strategy = std::make_unique<SupervisedStrategy>()) {
  ResolvedJob j;
  j.model_name = std::string(learner->name());
  j.stream_name = std::string(stream->name());
  j.learner = std::move(learner);
  j.stream = std::move(stream);
  j.strategy = std::move(strategy);
  return j;
}

// Fails with NumericError on its fifth update.
class Fragile final : public Learner {
 public:
  explicit Fragile(StreamSchema s) : Learner(std::move(s)) {}
  std::string_view name() const override { return "Fragile"; }
  LearnerCaps caps() const override { return {}; }
  LearnerPtr fresh(std::uint64_t) const override { return std::make_unique<Fragile>(schema()); }
  LearnerPtr clone() const override { return std::make_unique<Fragile>(*this); }

 protected:
  void do_update(const Instance&) override {
    if (++updates_ == 5) fail(ErrorCode::NumericError, "diverged");
  }
  std::vector<double> do_proba(std::span<const double>) const override { return {1.0, 0.0}; }

 private:
  int updates_ = 0;
};

double reference_macro_f1(const std::vector<std::vector<std::size_t>>& m) {
  const std::size_t C = m.size();
  double total = 0;
  for (std::size_t c = 0; c < C; ++c) {
    double tp = m[c][c], fp = 0, fn = 0;
    for (std::size_t k = 0; k < C; ++k)
      if (k != c) fp += m[k][c], fn += m[c][k];
    // F1 = 2TP / (2TP + FP + FN), zero when nothing was predicted or present.
    const double denom = 2 * tp + fp + fn;
    total += denom > 0 ? 2 * tp / denom : 0.0;
  }
  return total / C;
}

}  // namespace

TEST(Plan, JobMatrixOrderAndSeeds) {
  auto c = basic({"MajorityClass", "KNN", "HoeffdingTree"}, {"sea", "hyperplane"});
  c.n_rounds = 2;
  const auto jobs = plan_jobs(c);
  ASSERT_EQ(jobs.size(), 12u);
  EXPECT_EQ(jobs[0].model, 0u);
  EXPECT_EQ(jobs[1].round, 1u);
  EXPECT_EQ(jobs[2].stream, 1u);
  EXPECT_EQ(jobs[4].model, 1u);
  // Same (stream, round): same stream seed for every model.
  EXPECT_EQ(jobs[0].stream_seed, jobs[4].stream_seed);
  EXPECT_NE(jobs[0].stream_seed, jobs[1].stream_seed);
  EXPECT_NE(jobs[0].learner_seed, jobs[4].learner_seed);
  for (std::size_t i = 0; i < jobs.size(); ++i) EXPECT_EQ(jobs[i].index, i);
}

TEST(Resolve, SingleCell) {
  const auto jobs = resolve(basic({"HoeffdingTree"}, {"sea"}));
  ASSERT_EQ(jobs.size(), 1u);
  EXPECT_EQ(jobs[0].learner->name(), "HoeffdingTree");
}

TEST(Resolve, UnknownModelListsChoices) {
  try {
    resolve(basic({"QRBLS"}, {"sea"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RegistryError);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("QRBLS"), std::string::npos);
    EXPECT_NE(msg.find("HoeffdingTree"), std::string::npos);
    EXPECT_NE(msg.find("ARF"), std::string::npos);
  }
}

TEST(Resolve, ConfigConstraints) {
  auto c = basic({"KNN"}, {"sea"}, 1000, 1000);
  try {
    c.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    EXPECT_NE(std::string(e.what()).find("n_pretrain < n_samples"), std::string::npos);
  }
  auto dup = basic({"KNN", "KNN"}, {"sea"});
  EXPECT_THROW(dup.validate(), Error);
  dup.models[1].label = "KNN-b";
  EXPECT_NO_THROW(dup.validate());
  auto reg = basic({"HoeffdingTree"}, {"friedman"});
  EXPECT_THROW(resolve(reg), Error);
  auto strat = basic({"KNN"}, {"friedman"});
  strat.strategy = spec("VariableUncertainty");
  EXPECT_THROW(resolve(strat), Error);
}

TEST(Prequential, RecordCountAndSteps) {
  auto jobs = resolve(basic({"HoeffdingTree"}, {"sea"}));
  const auto r = run_prequential(jobs[0], {1000, 100});
  ASSERT_EQ(r.status, JobStatus::Ok);
  ASSERT_EQ(r.records.size(), 900u);
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    EXPECT_EQ(r.records[i].step, 100 + i);
    EXPECT_TRUE(r.records[i].queried);
  }
  EXPECT_EQ(r.spend, 1.0);
}

TEST(Prequential, ConstantLabelsWithMajority) {
  std::vector<Instance> xs;
  for (int i = 0; i < 300; ++i) xs.push_back(labeled({double(i)}, 1));
  auto job = manual_job(std::make_unique<MajorityClass>(StreamSchema::classification(1, 2)),
                        std::make_unique<VectorStream>(StreamSchema::classification(1, 2), xs));
  const auto r = run_prequential(job, {300, 10});
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.records.size(), 290u);
}

TEST(Prequential, ShortStreamIsInvalidPretrain) {
  std::vector<Instance> xs(50, labeled({0.0}, 0));
  auto job = manual_job(std::make_unique<MajorityClass>(StreamSchema::classification(1, 2)),
                        std::make_unique<VectorStream>(StreamSchema::classification(1, 2), xs));
  try {
    run_prequential(job, {200, 100});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidPretrain);
  }
}

TEST(Prequential, LearnerFailureKeepsPartialLog) {
  std::vector<Instance> xs;
  for (int i = 0; i < 100; ++i) xs.push_back(labeled({0.0}, i % 2));
  auto job = manual_job(std::make_unique<Fragile>(StreamSchema::classification(1, 2)),
                        std::make_unique<VectorStream>(StreamSchema::classification(1, 2), xs));
  const auto r = run_prequential(job, {100, 2});
  EXPECT_EQ(r.status, JobStatus::Failed);
  EXPECT_NE(r.error.find("diverged"), std::string::npos);
  // Pretraining replays two updates; the third online update throws.
  EXPECT_EQ(r.records.size(), 3u);
}

TEST(Prequential, DeterministicAcrossRuns) {
  auto c = basic({"ARF", "KNN"}, {"sea"}, 2000, 200);
  auto a = run_experiment(c, resolve(c), 1);
  auto b = run_experiment(c, resolve(c), 2);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].records, b[i].records);
}

TEST(Prequential, PredictionIgnoresItsOwnLabel) {
  // Flipping the label at step t can only affect predictions after t.
  SeaStream sea({{8.0, 0.0}, std::nullopt, {}}, 3);
  const auto xs = take(sea, 800);
  for (std::size_t t : {150u, 400u, 799u}) {
    auto flipped = xs;
    *flipped[t].label = 1 - *flipped[t].label;
    auto run = [](const std::vector<Instance>& data) {
      auto job = manual_job(std::make_unique<KnnLearner>(StreamSchema::classification(3, 2), KnnConfig{1, 1000}),
                            std::make_unique<VectorStream>(StreamSchema::classification(3, 2), data));
      return run_prequential(job, {800, 100}).records;
    };
    const auto a = run(xs), b = run(flipped);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].step <= t) EXPECT_EQ(a[i].prediction, b[i].prediction) << "step " << a[i].step;
  }
}

TEST(Prequential, FrozenModelNeverUpdates) {
  auto c = basic({"HoeffdingTree"}, {"sea"}, 1500, 300);
  c.models[0].online = false;
  auto jobs = resolve(c);
  const auto r = run_prequential(jobs[0], {1500, 300});
  EXPECT_EQ(jobs[0].learner->n_seen(), 300u);
  EXPECT_EQ(r.records.size(), 1200u);
}

TEST(Prequential, SupervisedEqualsFullBudgetFixedUncertainty) {
  auto c = basic({"HoeffdingTree", "OGD"}, {"sea"}, 3000, 200);
  const auto sup = run_experiment(c, resolve(c), 1);
  c.strategy = spec("FixedUncertainty", {{"budget", 1.0}, {"theta", 1.0}});
  const auto fixed = run_experiment(c, resolve(c), 1);
  for (std::size_t i = 0; i < sup.size(); ++i) EXPECT_EQ(sup[i].records, fixed[i].records);
}

TEST(Prequential, BudgetedStrategySkipsUpdates) {
  auto c = basic({"KNN"}, {"sea"}, 5000, 100);
  c.strategy = spec("VariableUncertainty", {{"budget", 0.1}});
  auto jobs = resolve(c);
  const auto r = run_prequential(jobs[0], {5000, 100});
  EXPECT_LE(r.spend, 0.1 + 1e-12);
  EXPECT_GE(r.spend, 0.08);
  std::size_t queried = 0;
  for (const auto& x : r.records) queried += x.queried;
  EXPECT_EQ(jobs[0].learner->n_seen(), 100 + queried);
}

TEST(Experiment, FailedJobDoesNotStopSiblings) {
  auto c = basic({"MajorityClass", "OGD"}, {"sea"}, 500, 50);
  c.models[1].params = {{"learning_rate", 1e308}};
  auto results = run_experiment(c, resolve(c), 2);
  ASSERT_EQ(results.size(), 2u);
  EXPECT_EQ(results[0].status, JobStatus::Ok);
  EXPECT_EQ(results[1].status, JobStatus::Failed);
  EXPECT_EQ(results[0].records.size(), 450u);
}

TEST(Metrics, WindowedAccuracyExamples) {
  const std::vector<PrequentialRecord> alt{rec(0, 1, 1), rec(1, 1, 0), rec(2, 0, 0), rec(3, 0, 1)};
  const auto s = windowed_accuracy(alt, 2);
  EXPECT_EQ(s.values, (std::vector<double>{1.0, 0.5, 0.5, 0.5}));
  EXPECT_EQ(s.steps, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(windowed_accuracy(alt, 100).values.back(), accuracy(alt));
  const std::vector<PrequentialRecord> good{rec(5, 1, 1), rec(6, 0, 0)};
  for (double v : windowed_accuracy(good, 3).values) EXPECT_EQ(v, 1.0);
  EXPECT_THROW(windowed_accuracy({}, 3), Error);
}

TEST(Metrics, WindowedMaeAndSpend) {
  const std::vector<PrequentialRecord> r{rec(0, 1.0, 2.0, true), rec(1, 0.0, 3.0, false), rec(2, 5.0, 5.0, true)};
  EXPECT_EQ(windowed_mae(r, 2).values, (std::vector<double>{1.0, 2.0, 1.5}));
  const auto sp = cumulative_spend(r);
  EXPECT_DOUBLE_EQ(sp.values[1], 0.5);
  EXPECT_DOUBLE_EQ(sp.values[2], 2.0 / 3.0);
}

TEST(Metrics, MacroF1Examples) {
  ConfusionMatrix diag(3);
  diag.at(0, 0) = 4;
  diag.at(1, 1) = 2;
  diag.at(2, 2) = 9;
  EXPECT_EQ(macro_f1(diag), 1.0);
  ConfusionMatrix anti(2);
  anti.at(0, 1) = 3;
  anti.at(1, 0) = 5;
  EXPECT_EQ(macro_f1(anti), 0.0);
  ConfusionMatrix m(2);
  m.at(0, 0) = 2;
  m.at(0, 1) = 1;
  m.at(1, 0) = 1;
  m.at(1, 1) = 2;
  EXPECT_EQ(macro_f1(m), 2.0 / 3.0);
  EXPECT_THROW(macro_f1(ConfusionMatrix(2)), Error);
}

TEST(Metrics, MacroF1MatchesIndependentDefinition) {
  Rng rng(77);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t C = 2 + rng.below(4);
    ConfusionMatrix cm(C);
    std::vector<std::vector<std::size_t>> raw(C, std::vector<std::size_t>(C));
    for (std::size_t i = 0; i < C; ++i)
      for (std::size_t j = 0; j < C; ++j) raw[i][j] = cm.at(i, j) = rng.bernoulli(0.3) ? 0 : rng.below(20);
    if (cm.total() == 0) raw[0][0] = cm.at(0, 0) = 1;
    EXPECT_NEAR(macro_f1(cm), reference_macro_f1(raw), 1e-12);
  }
}

TEST(Metrics, ConfusionTotalsAndPooling) {
  auto c = basic({"HoeffdingTree"}, {"sea"}, 1200, 200);
  auto a = run_experiment(c, resolve(c), 1);
  auto b = run_experiment(c, resolve(c), 1);
  const auto cm = confusion_matrix(a[0].records, 2);
  EXPECT_EQ(cm.total(), a[0].records.size());
  auto pooled = a[0].records;
  pooled.insert(pooled.end(), b[0].records.begin(), b[0].records.end());
  EXPECT_NEAR(macro_f1(confusion_matrix(pooled, 2)), (a[0].macro_f1 + b[0].macro_f1) / 2, 1e-12);
}
