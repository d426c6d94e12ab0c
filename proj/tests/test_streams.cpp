#include <cmath>
#include <fstream>

#include <gtest/gtest.h>

#include "aol/error.hpp"
#include "aol/streams.hpp"
#include "test_util.hpp"

using namespace aol;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST(SeaLabel, BoundaryInclusive) {
  EXPECT_EQ(sea_label(3, 4, 8), 1);
  EXPECT_EQ(sea_label(6, 5, 8), 0);
  EXPECT_EQ(sea_label(4, 4, 8), 1);
}

TEST(HyperplaneLabel, SignRule) {
  const std::vector<double> w{1, 0};
  EXPECT_EQ(hyperplane_label(std::vector<double>{1, 0}, w, 0), 1);
  EXPECT_EQ(hyperplane_label(std::vector<double>{-1, 0}, w, 0), 0);
  EXPECT_EQ(hyperplane_label(std::vector<double>{0, 5}, w, 0), 1);
  EXPECT_EQ(hyperplane_label(std::vector<double>{0.5, 0.5}, std::vector<double>{1, 1}, -1), 1);
  EXPECT_EQ(code_of([&] { hyperplane_label(std::vector<double>{1, 0, 0}, w, 0); }), ErrorCode::SchemaError);
}

TEST(ConceptMix, AbruptAndGradual) {
  EXPECT_DOUBLE_EQ(concept_mix(1000, {1000, 1000}), 0.5);
  EXPECT_EQ(concept_mix(99, {100, 0}), 0.0);
  EXPECT_EQ(concept_mix(100, {100, 0}), 1.0);
  EXPECT_NEAR(concept_mix(2000, {1000, 1000}), 1.0 / (1.0 + std::exp(-4.0)), 1e-15);
  EXPECT_NEAR(concept_mix(2000, {1000, 1000}), 0.98201, 1e-5);
  EXPECT_NEAR(concept_mix(0, {1000, 1000}), 1.0 / (1.0 + std::exp(4.0)), 1e-15);
}

TEST(Sea, SameSeedSameSequence) {
  SeaConfig cfg;
  cfg.before.noise_rate = 0.1;
  SeaStream a(cfg, 7), b(cfg, 7), c(cfg, 8);
  const auto xa = take(a, 500), xb = take(b, 500), xc = take(c, 500);
  EXPECT_EQ(xa, xb);
  EXPECT_NE(xa, xc);
  for (std::size_t i = 0; i < xa.size(); ++i) EXPECT_EQ(xa[i].index, i);
}

TEST(Sea, ShapeAndRanges) {
  SeaStream s({}, 1);
  EXPECT_EQ(s.schema().n_features, 3u);
  EXPECT_EQ(s.schema().n_classes(), 2u);
  for (const auto& x : take(s, 2000))
    for (double v : x.features) {
      EXPECT_GE(v, 0.0);
      EXPECT_LT(v, 10.0);
    }
}

TEST(Sea, NoiseFreeAbruptDriftFollowsConcepts) {
  SeaConfig cfg;
  cfg.before = {8.0, 0.0};
  cfg.after = SeaConcept{9.5, 0.0};
  cfg.schedule = {500, 0};
  SeaStream s(cfg, 3);
  for (const auto& x : take(s, 1000)) {
    const double theta = x.index < 500 ? 8.0 : 9.5;
    EXPECT_EQ(*x.label, sea_label(x.features[0], x.features[1], theta)) << x.index;
  }
}

TEST(Sea, NoiseFlipsAtTheConfiguredRate) {
  SeaStream s({{8.0, 0.2}, std::nullopt, {}}, 5);
  int flipped = 0;
  const int n = 20000;
  for (const auto& x : take(s, n)) flipped += *x.label != sea_label(x.features[0], x.features[1], 8.0);
  EXPECT_NEAR(flipped / double(n), 0.2, 0.015);
}

TEST(Sea, RejectsBadConcepts) {
  EXPECT_EQ(code_of([] { SeaStream({{0.0, 0.0}, std::nullopt, {}}, 1); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { SeaStream({{8.0, 0.5}, std::nullopt, {}}, 1); }), ErrorCode::InvalidArgument);
}

TEST(Sea, EmpiricalMixMatchesSigmoid) {
  // Extreme concepts make the label reveal which concept produced it.
  const DriftSchedule sched{100, 80};
  const std::size_t t = 120;
  SeaConfig cfg{{0.001, 0.0}, SeaConcept{19.999, 0.0}, sched};
  int after = 0;
  const int n = 10000;
  for (int seed = 0; seed < n; ++seed) {
    SeaStream s(cfg, static_cast<std::uint64_t>(seed));
    std::optional<Instance> x;
    for (std::size_t i = 0; i <= t; ++i) x = s.next();
    after += *x->label;
  }
  EXPECT_NEAR(after / double(n), concept_mix(t, sched), 0.02);
}

TEST(Hyperplane, FixedConceptsAndDrift) {
  HyperplaneConfig cfg;
  cfg.n_features = 2;
  cfg.before = HyperplaneConcept{{1, -1}, 0};
  cfg.after = HyperplaneConcept{{-1, 1}, 0};
  cfg.drift = true;
  cfg.schedule = {200, 0};
  HyperplaneStream s(cfg, 4);
  for (const auto& x : take(s, 400)) {
    const auto& c = x.index < 200 ? cfg.before : cfg.after;
    EXPECT_EQ(*x.label, hyperplane_label(x.features, c->weights, c->bias));
  }
}

TEST(Hyperplane, RandomConceptIsRoughlyBalanced) {
  HyperplaneConfig cfg;
  cfg.n_features = 10;
  HyperplaneStream s(cfg, 9);
  double ones = 0;
  for (const auto& x : take(s, 5000)) ones += *x.label;
  EXPECT_NEAR(ones / 5000, 0.5, 0.1);
  HyperplaneStream again(cfg, 9);
  EXPECT_EQ(again.concept_before().weights, s.concept_before().weights);
}

TEST(Hyperplane, RejectsZeroWeights) {
  HyperplaneConfig cfg;
  cfg.n_features = 2;
  cfg.before = HyperplaneConcept{{0, 0}, 1};
  EXPECT_EQ(code_of([&] { HyperplaneStream(cfg, 1); }), ErrorCode::InvalidArgument);
  cfg.before = HyperplaneConcept{{1, 0, 0}, 1};
  EXPECT_EQ(code_of([&] { HyperplaneStream(cfg, 1); }), ErrorCode::SchemaError);
}

TEST(Friedman, NoiseFreeTargetsFollowFormula) {
  FriedmanStream s({0.0}, 2);
  EXPECT_FALSE(s.schema().is_classification());
  EXPECT_EQ(s.schema().n_features, 10u);
  for (const auto& x : take(s, 200)) {
    const auto& f = x.features;
    const double y = 10 * std::sin(M_PI * f[0] * f[1]) + 20 * (f[2] - 0.5) * (f[2] - 0.5) + 10 * f[3] + 5 * f[4];
    EXPECT_NEAR(*x.target, y, 1e-12);
  }
}

TEST(Csv, CountsRowsThenEnds) {
  aol::test::TempDir dir("csv");
  std::string text = "a,b,label\n";
  for (int i = 0; i < 100; ++i) text += std::to_string(i) + ".5," + std::to_string(-i) + "," + std::to_string(i % 3) + "\n";
  write_file(dir / "d.csv", text);
  CsvStreamConfig cfg;
  cfg.path = dir / "d.csv";
  CsvStream s(cfg);
  EXPECT_EQ(s.schema().n_features, 2u);
  EXPECT_EQ(s.schema().n_classes(), 3u);
  EXPECT_EQ(s.schema().feature_names, (std::vector<std::string>{"a", "b"}));
  int n = 0;
  while (auto x = s.next()) {
    EXPECT_EQ(x->index, static_cast<std::size_t>(n));
    ++n;
  }
  EXPECT_EQ(n, 100);
  EXPECT_FALSE(s.next());
}

TEST(Csv, MalformedFieldNamesRow) {
  aol::test::TempDir dir("csv");
  write_file(dir / "bad.csv", "x,y,label\n1.0,abc,0\n");
  CsvStreamConfig cfg;
  cfg.path = dir / "bad.csv";
  try {
    CsvStream s(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos) << e.what();
  }
  write_file(dir / "short.csv", "x,y,label\n1,2,0\n1,0\n");
  cfg.path = dir / "short.csv";
  try {
    CsvStream s(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
}

TEST(Csv, LabelColumnByIndexWithoutHeader) {
  aol::test::TempDir dir("csv");
  write_file(dir / "n.csv", "1,0.5,2\n0,1.5,3\n");
  CsvStreamConfig cfg;
  cfg.path = dir / "n.csv";
  cfg.has_header = false;
  cfg.label_column = std::size_t{0};
  CsvStream s(cfg);
  const auto x = s.next();
  EXPECT_EQ(*x->label, 1);
  EXPECT_EQ(x->features, (std::vector<double>{0.5, 2}));
}

TEST(Csv, MissingFileAndMissingColumn) {
  aol::test::TempDir dir("csv");
  CsvStreamConfig cfg;
  cfg.path = dir / "none.csv";
  EXPECT_EQ(code_of([&] { CsvStream s(cfg); }), ErrorCode::IoError);
  write_file(dir / "h.csv", "a,b\n1,0\n");
  cfg.path = dir / "h.csv";
  EXPECT_EQ(code_of([&] { CsvStream s(cfg); }), ErrorCode::SchemaError);
}

TEST(Csv, ShuffleIsSeededPermutation) {
  aol::test::TempDir dir("csv");
  std::string text = "a,label\n";
  for (int i = 0; i < 50; ++i) text += std::to_string(i) + ",0\n";
  write_file(dir / "s.csv", text);
  CsvStreamConfig cfg;
  cfg.path = dir / "s.csv";
  cfg.shuffle_seed = 3;
  CsvStream a(cfg), b(cfg);
  const auto xa = take(a, 100), xb = take(b, 100);
  EXPECT_EQ(xa, xb);
  std::vector<double> seen;
  for (const auto& x : xa) seen.push_back(x.features[0]);
  std::vector<double> sorted = seen;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_NE(seen, sorted);
}

TEST(Csv, RoundTripsSyntheticStreams) {
  aol::test::TempDir dir("csv");
  SeaStream sea({{8.0, 0.1}, std::nullopt, {}}, 11);
  const auto original = take(sea, 300);
  write_stream_csv(original, sea.schema(), dir / "sea.csv");
  CsvStreamConfig cfg;
  cfg.path = dir / "sea.csv";
  CsvStream back(cfg);
  EXPECT_EQ(take(back, 1000), original);

  FriedmanStream fr({1.0}, 4);
  const auto reg = take(fr, 100);
  write_stream_csv(reg, fr.schema(), dir / "fr.csv");
  cfg.path = dir / "fr.csv";
  cfg.task = TaskKind::Regression;
  CsvStream rback(cfg);
  EXPECT_EQ(take(rback, 1000), reg);
}

TEST(VectorStreamTest, ReindexesFromZero) {
  std::vector<Instance> xs{aol::test::labeled({1}, 0, 7), aol::test::labeled({2}, 1, 9)};
  VectorStream s(StreamSchema::classification(1, 2), xs);
  EXPECT_EQ(s.next()->index, 0u);
  EXPECT_EQ(s.next()->index, 1u);
  EXPECT_FALSE(s.next());
}
