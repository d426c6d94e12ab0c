#include "aol/streams.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "aol/error.hpp"

namespace aol {

// VectorStream ----------------------------------------------------------------

VectorStream::VectorStream(StreamSchema schema, std::vector<Instance> instances, std::string name)
    : schema_(std::move(schema)), instances_(std::move(instances)), name_(std::move(name)) {
  schema_.validate();
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    instances_[i].index = i;
    check_instance(schema_, instances_[i], false);
  }
}

std::optional<Instance> VectorStream::next() {
  if (pos_ >= instances_.size()) return std::nullopt;
  return instances_[pos_++];
}

std::vector<Instance> take(Stream& stream, std::size_t n) {
  std::vector<Instance> out;
  out.reserve(n);
  while (out.size() < n) {
    auto x = stream.next();
    if (!x) break;
    out.push_back(std::move(*x));
  }
  return out;
}

// Drift mixing -------------------------------------------------------------------

double concept_mix(std::size_t t, const DriftSchedule& schedule) {
  if (schedule.width == 0) return t < schedule.position ? 0.0 : 1.0;
  const double z = -4.0 * (static_cast<double>(t) - static_cast<double>(schedule.position)) / static_cast<double>(schedule.width);
  return 1.0 / (1.0 + std::exp(z));
}

// SEA -----------------------------------------------------------------------------

ClassId sea_label(double f1, double f2, double threshold) noexcept { return f1 + f2 <= threshold ? 1 : 0; }

namespace {

void check_sea(const SeaConcept& c) {
  if (!(c.threshold > 0.0 && c.threshold < 20.0)) fail(ErrorCode::InvalidArgument, "SEA threshold must lie in (0, 20)");
  if (!(c.noise_rate >= 0.0 && c.noise_rate < 0.5)) fail(ErrorCode::InvalidArgument, "SEA noise_rate must lie in [0, 0.5)");
}

}  // namespace

SeaStream::SeaStream(SeaConfig config, std::uint64_t seed)
    : config_(config), schema_(StreamSchema::classification(3, 2)), rng_(seed) {
  check_sea(config_.before);
  if (config_.after) check_sea(*config_.after);
}

std::optional<Instance> SeaStream::next() {
  Instance x;
  x.index = t_;
  x.features = {rng_.uniform(0.0, 10.0), rng_.uniform(0.0, 10.0), rng_.uniform(0.0, 10.0)};
  // Fixed draw count per instance keeps the sequence independent of the schedule.
  const double mix_draw = rng_.uniform();
  const double noise_draw = rng_.uniform();
  const SeaConcept& active = (config_.after && mix_draw < concept_mix(t_, config_.schedule)) ? *config_.after : config_.before;
  ClassId y = sea_label(x.features[0], x.features[1], active.threshold);
  if (noise_draw < active.noise_rate) y = 1 - y;
  x.label = y;
  ++t_;
  return x;
}

// Hyperplane ------------------------------------------------------------------------

ClassId hyperplane_label(std::span<const double> x, std::span<const double> w, double b) {
  if (x.size() != w.size())
    fail(ErrorCode::SchemaError, fmt::format("hyperplane has {} weights but instance has {} features", w.size(), x.size()));
  double s = b;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i];
  return s >= 0.0 ? 1 : 0;
}

namespace {

HyperplaneConcept random_hyperplane(std::size_t d, Rng& rng) {
  HyperplaneConcept c;
  double sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    c.weights.push_back(rng.uniform());
    sum += c.weights.back();
  }
  c.bias = -0.5 * sum;
  return c;
}

void check_hyperplane(const HyperplaneConcept& c, std::size_t d) {
  if (c.weights.size() != d) fail(ErrorCode::SchemaError, "hyperplane weights length differs from n_features");
  if (std::all_of(c.weights.begin(), c.weights.end(), [](double w) { return w == 0.0; }))
    fail(ErrorCode::InvalidArgument, "hyperplane weights are all zero");
}

}  // namespace

HyperplaneStream::HyperplaneStream(HyperplaneConfig config, std::uint64_t seed)
    : config_(std::move(config)), schema_(StreamSchema::classification(config_.n_features, 2)), rng_(seed) {
  if (config_.n_features == 0) fail(ErrorCode::InvalidArgument, "hyperplane needs n_features >= 1");
  if (!(config_.noise_rate >= 0.0 && config_.noise_rate < 0.5))
    fail(ErrorCode::InvalidArgument, "hyperplane noise_rate must lie in [0, 0.5)");
  Rng concept_rng = rng_.split("hyperplane.concepts");
  before_ = config_.before ? *config_.before : random_hyperplane(config_.n_features, concept_rng);
  after_ = config_.after ? *config_.after : random_hyperplane(config_.n_features, concept_rng);
  check_hyperplane(before_, config_.n_features);
  check_hyperplane(after_, config_.n_features);
}

std::optional<Instance> HyperplaneStream::next() {
  Instance x;
  x.index = t_;
  x.features.resize(config_.n_features);
  for (double& f : x.features) f = rng_.uniform();
  const double mix_draw = rng_.uniform();
  const double noise_draw = rng_.uniform();
  const HyperplaneConcept& active = (config_.drift && mix_draw < concept_mix(t_, config_.schedule)) ? after_ : before_;
  ClassId y = hyperplane_label(x.features, active.weights, active.bias);
  if (noise_draw < config_.noise_rate) y = 1 - y;
  x.label = y;
  ++t_;
  return x;
}

// Friedman ----------------------------------------------------------------------------

FriedmanStream::FriedmanStream(FriedmanConfig config, std::uint64_t seed)
    : config_(config), schema_(StreamSchema::regression(10)), rng_(seed) {
  if (!(config_.noise_sd >= 0.0)) fail(ErrorCode::InvalidArgument, "friedman noise_sd must be non-negative");
}

std::optional<Instance> FriedmanStream::next() {
  Instance x;
  x.index = t_++;
  x.features.resize(10);
  for (double& f : x.features) f = rng_.uniform();
  const auto& f = x.features;
  const double noise = rng_.normal() * config_.noise_sd;
  x.target = 10.0 * std::sin(std::numbers::pi * f[0] * f[1]) + 20.0 * (f[2] - 0.5) * (f[2] - 0.5) + 10.0 * f[3] +
             5.0 * f[4] + noise;
  return x;
}

// CSV -----------------------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_real(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

CsvStream::CsvStream(CsvStreamConfig config) {
  std::ifstream in(config.path);
  if (!in) fail(ErrorCode::IoError, "cannot open CSV " + config.path.string());

  std::string line;
  std::vector<std::string> header;
  std::size_t n_columns = 0;
  if (config.has_header) {
    if (!std::getline(in, line)) fail(ErrorCode::ParseError, "CSV " + config.path.string() + " is empty");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    for (auto cell : split_commas(line)) header.emplace_back(cell);
    n_columns = header.size();
  }

  std::size_t label_col = 0;
  bool label_resolved = false;
  auto resolve_label = [&](std::size_t columns) {
    if (auto* idx = std::get_if<std::size_t>(&config.label_column)) {
      label_col = *idx;
    } else {
      const std::string& wanted = std::get<std::string>(config.label_column);
      if (header.empty()) {
        // Headerless files name the label column "label" implicitly as the last one.
        if (wanted != "label") fail(ErrorCode::SchemaError, "label column '" + wanted + "' needs a header row");
        label_col = columns - 1;
      } else {
        auto it = std::find(header.begin(), header.end(), wanted);
        if (it == header.end()) fail(ErrorCode::SchemaError, "CSV has no label column '" + wanted + "'");
        label_col = static_cast<std::size_t>(it - header.begin());
      }
    }
    if (label_col >= columns) fail(ErrorCode::SchemaError, fmt::format("label column {} out of range", label_col));
    label_resolved = true;
  };
  if (!header.empty()) resolve_label(n_columns);

  std::vector<std::vector<double>> features;
  std::vector<double> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split_commas(line);
    if (n_columns == 0) n_columns = cells.size();
    if (!label_resolved) resolve_label(n_columns);
    if (cells.size() != n_columns)
      fail(ErrorCode::ParseError, fmt::format("CSV row {}: expected {} fields, found {}", row, n_columns, cells.size()));
    std::vector<double> f;
    f.reserve(n_columns - 1);
    double label = 0.0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_real(cells[c]);
      if (!v) fail(ErrorCode::ParseError, fmt::format("CSV row {}: field {} ('{}') is not a finite real", row, c + 1, cells[c]));
      if (c == label_col)
        label = *v;
      else
        f.push_back(*v);
    }
    if (config.task == TaskKind::Classification && (label < 0.0 || label != std::floor(label) || label > 1e6))
      fail(ErrorCode::ParseError, fmt::format("CSV row {}: class label {} is not a non-negative integer", row, label));
    features.push_back(std::move(f));
    labels.push_back(label);
  }
  if (n_columns < 2) fail(ErrorCode::SchemaError, "CSV needs at least one feature column and a label column");

  if (config.task == TaskKind::Classification) {
    double top = 0.0;
    for (double l : labels) top = std::max(top, l);
    const std::size_t inferred = static_cast<std::size_t>(top) + 1;
    std::size_t n_classes = config.n_classes.value_or(std::max<std::size_t>(inferred, 2));
    if (inferred > n_classes) fail(ErrorCode::SchemaError, fmt::format("CSV label {} exceeds n_classes {}", top, n_classes));
    schema_ = StreamSchema::classification(n_columns - 1, n_classes);
  } else {
    schema_ = StreamSchema::regression(n_columns - 1);
  }
  if (!header.empty()) {
    schema_.feature_names.clear();
    for (std::size_t c = 0; c < header.size(); ++c)
      if (c != label_col) schema_.feature_names.push_back(header[c]);
  }

  std::vector<std::size_t> order(features.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (config.shuffle_seed) {
    Rng rng(*config.shuffle_seed);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  }
  rows_.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    Instance x;
    x.index = i;
    x.features = std::move(features[order[i]]);
    if (config.task == TaskKind::Classification)
      x.label = static_cast<ClassId>(labels[order[i]]);
    else
      x.target = labels[order[i]];
    rows_.push_back(std::move(x));
  }
}

std::optional<Instance> CsvStream::next() {
  if (pos_ >= rows_.size()) return std::nullopt;
  return rows_[pos_++];
}

void write_stream_csv(std::span<const Instance> instances, const StreamSchema& schema, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  for (std::size_t j = 0; j < schema.n_features; ++j) out << 'f' << j << ',';
  out << "label\n";
  for (const Instance& x : instances) {
    for (double v : x.features) out << fmt::format("{},", v);
    if (x.label)
      out << *x.label;
    else if (x.target)
      out << fmt::format("{}", *x.target);
    out << '\n';
  }
  if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace aol
