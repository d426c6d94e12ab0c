#include "aol/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "aol/config.hpp"
#include "aol/error.hpp"

namespace aol {

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
}

// Records -----------------------------------------------------------------------------

std::string format_records_csv(std::vector<PrequentialRecord> records) {
  if (records.empty()) fail(ErrorCode::EmptySeries, "no records to write");
  std::stable_sort(records.begin(), records.end(), [](const PrequentialRecord& a, const PrequentialRecord& b) {
    return std::tie(a.model, a.stream, a.round, a.step) < std::tie(b.model, b.stream, b.round, b.step);
  });
  std::string out = kRecordsHeader;
  out += '\n';
  for (const auto& r : records)
    out += fmt::format("{},{},{},{},{},{},{}\n", r.step, r.truth, r.prediction, r.queried ? 1 : 0, r.model, r.stream, r.round);
  return out;
}

void write_records_csv(const std::vector<PrequentialRecord>& records, const std::filesystem::path& path) {
  write_text_file(path, format_records_csv(records));
}

namespace {

template <typename T>
T parse_field(std::string_view s, std::size_t line, const char* what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    fail(ErrorCode::ParseError, fmt::format("records line {}: bad {} '{}'", line, what, s));
  return v;
}

}  // namespace

std::vector<PrequentialRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kRecordsHeader)
    fail(ErrorCode::ParseError, path.string() + ": missing records header");
  std::vector<PrequentialRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    for (std::size_t comma; (comma = rest.find(',')) != std::string_view::npos; rest.remove_prefix(comma + 1))
      cells.push_back(rest.substr(0, comma));
    cells.push_back(rest);
    if (cells.size() != 7) fail(ErrorCode::ParseError, fmt::format("records line {}: expected 7 fields", line_no));
    PrequentialRecord r;
    r.step = parse_field<std::size_t>(cells[0], line_no, "step");
    r.truth = parse_field<double>(cells[1], line_no, "true value");
    r.prediction = parse_field<double>(cells[2], line_no, "prediction");
    const int q = parse_field<int>(cells[3], line_no, "queried flag");
    if (q != 0 && q != 1) fail(ErrorCode::ParseError, fmt::format("records line {}: queried must be 0 or 1", line_no));
    r.queried = q == 1;
    r.model = std::string(cells[4]);
    r.stream = std::string(cells[5]);
    r.round = parse_field<std::size_t>(cells[6], line_no, "round");
    out.push_back(std::move(r));
  }
  return out;
}

// SVG ------------------------------------------------------------------------------------

const char* palette_color(std::size_t index) noexcept {
  static constexpr const char* kPalette[kPaletteSize] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                         "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return kPalette[index % kPaletteSize];
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

// Plot geometry in user units.
constexpr double kWidth = 820, kHeight = 480;
constexpr double kLeft = 70, kRight = 610, kTop = 50, kBottom = 410;
constexpr int kXTicks = 5, kYTicks = 5, kMarkers = 8;

}  // namespace

std::string render_comparison_svg(const ComparisonSpec& spec) {
  if (spec.series.empty()) fail(ErrorCode::EmptySeries, "comparison plot needs at least one series");
  for (const auto& s : spec.series)
    if (s.series.size() < 1 || s.series.steps.size() != s.series.values.size())
      fail(ErrorCode::EmptySeries, "series '" + s.label + "' has no points");
  auto [y_lo, y_hi] = spec.y_range;
  if (!(y_hi > y_lo)) fail(ErrorCode::InvalidArgument, "y_range must be increasing");

  double x_lo = static_cast<double>(spec.series[0].series.steps.front());
  double x_hi = x_lo;
  for (const auto& s : spec.series)
    for (std::size_t step : s.series.steps) {
      x_lo = std::min(x_lo, static_cast<double>(step));
      x_hi = std::max(x_hi, static_cast<double>(step));
    }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * (kRight - kLeft); };
  auto py = [&](double y) { return kBottom - (y - y_lo) / (y_hi - y_lo) * (kBottom - kTop); };

  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  o += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      kWidth, kHeight);
  o += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n", kWidth, kHeight);
  o += fmt::format("<text x=\"{:.2f}\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
                   (kLeft + kRight) / 2, xml_escape(spec.title));

  // Grid and ticks.
  o += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
  for (int i = 0; i <= kYTicks; ++i) {
    const double v = y_lo + (y_hi - y_lo) * i / kYTicks;
    const double y = py(v);
    o += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
                     kLeft, y, kRight, y);
    o += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.2f}</text>\n", kLeft - 6, y + 4, v);
  }
  for (int i = 0; i <= kXTicks; ++i) {
    const double v = x_lo + (x_hi - x_lo) * i / kXTicks;
    const double x = px(v);
    o += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
                     x, kBottom, x, kBottom + 5);
    o += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.0f}</text>\n", x, kBottom + 18, v);
  }
  o += "</g>\n";
  o += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
                   kLeft, kBottom, kRight);
  o += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
                   kLeft, kTop, kBottom);
  o += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
      (kLeft + kRight) / 2, kBottom + 40, xml_escape(spec.x_label));
  o += fmt::format(
      "<text x=\"18\" y=\"{0:.2f}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 18 {0:.2f})\">{1}</text>\n",
      (kTop + kBottom) / 2, xml_escape(spec.y_label));

  // Curves, each with a few markers so lines stay distinguishable in print.
  for (const auto& s : spec.series) {
    const char* color = palette_color(s.color);
    o += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"", color);
    for (std::size_t i = 0; i < s.series.size(); ++i) {
      if (i) o += ' ';
      o += fmt::format("{:.2f},{:.2f}", px(static_cast<double>(s.series.steps[i])), py(s.series.values[i]));
    }
    o += "\"/>\n";
    const std::size_t n = s.series.size();
    for (int m = 0; m < kMarkers && n > 0; ++m) {
      const std::size_t i = n == 1 ? 0 : (n - 1) * static_cast<std::size_t>(m) / (kMarkers - 1);
      o += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n",
                       px(static_cast<double>(s.series.steps[i])), py(s.series.values[i]), color);
      if (n == 1) break;
    }
  }

  // Legend.
  o += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const double y = kTop + 10 + 20.0 * static_cast<double>(k);
    const char* color = palette_color(spec.series[k].color);
    o += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                     kRight + 20, y, kRight + 44, y, color);
    o += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", kRight + 32, y, color);
    o += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", kRight + 50, y + 4, xml_escape(spec.series[k].label));
  }
  o += "</g>\n</svg>\n";
  return o;
}

void write_comparison_svg(const ComparisonSpec& spec, const std::filesystem::path& path) {
  write_text_file(path, render_comparison_svg(spec));
}

// Summaries --------------------------------------------------------------------------------

std::vector<SummaryRow> summarize(const std::vector<JobResult>& jobs) {
  std::vector<SummaryRow> rows;
  std::vector<std::pair<std::size_t, std::size_t>> keys;
  for (const auto& j : jobs) {
    const auto key = std::make_pair(j.spec.model, j.spec.stream);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  for (const auto& key : keys) {
    std::vector<const JobResult*> done;
    for (const auto& j : jobs)
      if (j.spec.model == key.first && j.spec.stream == key.second && j.status == JobStatus::Ok && !j.records.empty())
        done.push_back(&j);
    if (done.empty()) continue;
    SummaryRow r;
    r.model = done.front()->model;
    r.stream = done.front()->stream;
    r.task = done.front()->task;
    r.rounds = done.size();
    const auto n = static_cast<double>(done.size());
    auto mean_of = [&](auto field) {
      double s = 0.0;
      for (const JobResult* j : done) s += field(*j);
      return s / n;
    };
    auto pstd_of = [&](auto field, double mean) {
      double s = 0.0;
      for (const JobResult* j : done) s += (field(*j) - mean) * (field(*j) - mean);
      return std::sqrt(s / n);
    };
    const auto acc = [](const JobResult& j) { return j.accuracy; };
    const auto mae = [](const JobResult& j) { return j.mae; };
    r.mean_acc = mean_of(acc);
    r.std_acc = pstd_of(acc, r.mean_acc);
    r.mean_macro_f1 = mean_of([](const JobResult& j) { return j.macro_f1; });
    r.spend = mean_of([](const JobResult& j) { return j.spend; });
    r.mean_mae = mean_of(mae);
    r.std_mae = pstd_of(mae, r.mean_mae);
    r.mean_mse = mean_of([](const JobResult& j) { return j.mse; });
    rows.push_back(r);
  }
  return rows;
}

std::string format_summary_csv(const std::vector<JobResult>& jobs) {
  const auto rows = summarize(jobs);
  if (rows.empty()) fail(ErrorCode::EmptySeries, "no completed job to summarize");
  std::string out = "# std_acc is the population standard deviation over completed rounds\n";
  out += kSummaryHeader;
  out += '\n';
  for (const auto& r : rows) {
    if (r.task != TaskKind::Classification) continue;
    out += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.model, r.stream, r.rounds, r.mean_acc, r.std_acc,
                       r.mean_macro_f1, r.spend);
  }
  return out;
}

void write_summary(const std::vector<JobResult>& jobs, const std::filesystem::path& path) {
  write_text_file(path, format_summary_csv(jobs));
}

std::string format_regression_summary_csv(const std::vector<JobResult>& jobs) {
  std::string body;
  for (const auto& r : summarize(jobs))
    if (r.task == TaskKind::Regression)
      body += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.model, r.stream, r.rounds, r.mean_mae, r.std_mae,
                          r.mean_mse, r.spend);
  if (body.empty()) return {};
  return "# std_mae is the population standard deviation over completed rounds\n" + std::string(kRegressionSummaryHeader) +
         "\n" + body;
}

std::string format_summary_table(const std::vector<JobResult>& jobs) {
  std::string out = fmt::format("{:<20} {:<16} {:>6} {:>10} {:>10} {:>10} {:>8}\n", "model", "stream", "rounds",
                                "acc/mae", "std", "f1/mse", "spend");
  for (const auto& r : summarize(jobs)) {
    const bool cls = r.task == TaskKind::Classification;
    out += fmt::format("{:<20} {:<16} {:>6} {:>10.4f} {:>10.4f} {:>10.4f} {:>8.4f}\n", r.model, r.stream, r.rounds,
                       cls ? r.mean_acc : r.mean_mae, cls ? r.std_acc : r.std_mae, cls ? r.mean_macro_f1 : r.mean_mse,
                       r.spend);
  }
  for (const auto& j : jobs)
    if (j.status == JobStatus::Failed)
      out += fmt::format("FAILED {} / {} / round {}: {}\n", j.model, j.stream, j.spec.round, j.error);
  return out;
}

// Manifest -----------------------------------------------------------------------------------

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorCode::IoError, "sha256 failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

namespace {

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

}  // namespace

std::string format_manifest(const ExperimentConfig& config, const std::vector<JobResult>& jobs,
                            const std::vector<ManifestFile>& files) {
  std::string o = "format=awesome-ol-manifest/1\n";
  // out_dir stays out so runs into different directories compare equal.
  const auto echoed = config_to_json(config, false);
  for (const auto& [key, value] : echoed.items()) o += "config." + key + "=" + value.dump() + "\n";
  std::size_t failed = 0;
  for (const auto& j : jobs) {
    const std::string key = fmt::format("job.{}", j.spec.index);
    o += fmt::format("{}.model={}\n{}.stream={}\n{}.round={}\n", key, j.model, key, j.stream, key, j.spec.round);
    o += fmt::format("{}.records={}\n", key, j.records.size());
    o += fmt::format("{}.status={}\n", key, j.status == JobStatus::Ok ? "ok" : "failed");
    if (j.status == JobStatus::Failed) {
      o += fmt::format("{}.error={}\n", key, one_line(j.error));
      ++failed;
    }
  }
  o += fmt::format("jobs.total={}\njobs.failed={}\n", jobs.size(), failed);
  std::vector<ManifestFile> sorted = files;
  std::sort(sorted.begin(), sorted.end(), [](const ManifestFile& a, const ManifestFile& b) { return a.name < b.name; });
  for (const auto& f : sorted) {
    o += fmt::format("file.{}.sha256={}\n", f.name, f.sha256);
    o += fmt::format("file.{}.bytes={}\n", f.name, f.bytes);
  }
  return o;
}

std::string file_token(const std::string& label) {
  std::string out;
  for (char c : label) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '.';
    out += keep ? c : '_';
  }
  return out.empty() ? "_" : out;
}

}  // namespace aol
