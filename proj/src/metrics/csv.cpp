#include "tutor_rl/metrics/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace tutor_rl::metrics {

const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> columns{
      "environment", "algorithm",     "tutor",         "reuse",          "seed",
      "convergence_score", "fresh_queries", "reuses", "saved_minutes", "wall_clock_seconds",
      "mean_latency_seconds"};
  return columns;
}

std::string format_number(double value) {
  // Shortest text that round-trips, so reruns are byte-comparable.
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double to_double(const std::string& text, const std::string& column) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::runtime_error("summary column " + column + ": '" + text + "' is not a number");
  }
  return value;
}

std::uint64_t to_unsigned(const std::string& text, const std::string& column) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::runtime_error("summary column " + column + ": '" + text + "' is not a count");
  }
  return value;
}

}  // namespace

void write_summary_header(std::ostream& out) {
  const auto& columns = summary_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
}

std::string summary_line(const SummaryRow& row) {
  std::ostringstream out;
  out << row.environment << ',' << row.algorithm << ',' << row.tutor << ',' << row.reuse << ',' << row.seed << ','
      << format_number(row.convergence_score) << ',' << row.fresh_queries << ',' << row.reuses << ','
      << format_number(row.saved_minutes) << ',' << format_number(row.wall_clock_seconds) << ','
      << format_number(row.mean_latency_seconds);
  return out.str();
}

void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  write_summary_header(out);
  for (const auto& row : rows) out << summary_line(row) << '\n';
}

std::vector<SummaryRow> read_summary(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw MissingColumns("summary is empty (no header row)");
  const std::vector<std::string> header = split(line);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index[header[i]] = i;

  // The latency column is optional so hand-written summaries stay valid.
  std::string missing;
  for (const auto& column : summary_columns()) {
    if (column != "mean_latency_seconds" && !index.contains(column)) missing += (missing.empty() ? "" : ", ") + column;
  }
  if (!missing.empty()) throw MissingColumns("summary lacks column(s): " + missing);

  std::vector<SummaryRow> rows;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error("summary line " + std::to_string(line_number) + " has " +
                               std::to_string(fields.size()) + " fields, header has " +
                               std::to_string(header.size()));
    }
    auto get = [&](const char* column) -> const std::string& { return fields[index.at(column)]; };
    SummaryRow row;
    row.environment = get("environment");
    row.algorithm = get("algorithm");
    row.tutor = get("tutor");
    row.reuse = get("reuse");
    row.seed = to_unsigned(get("seed"), "seed");
    row.convergence_score = to_double(get("convergence_score"), "convergence_score");
    row.fresh_queries = to_unsigned(get("fresh_queries"), "fresh_queries");
    row.reuses = to_unsigned(get("reuses"), "reuses");
    row.saved_minutes = to_double(get("saved_minutes"), "saved_minutes");
    row.wall_clock_seconds = to_double(get("wall_clock_seconds"), "wall_clock_seconds");
    if (index.contains("mean_latency_seconds")) {
      row.mean_latency_seconds = to_double(get("mean_latency_seconds"), "mean_latency_seconds");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SummaryRow> read_summary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open summary " + path.string());
  return read_summary(in);
}

void write_run_csv(std::ostream& out, const PerformanceCurve& raw, const PerformanceCurve& smoothed,
                   const NormalizedCurve& normalized) {
  const std::size_t n = raw.values.size();
  if (smoothed.values.size() != n || normalized.p_hat.size() != n) {
    throw std::invalid_argument("plot series lengths differ");
  }
  out << "episode_index,raw_return,smoothed_return,t_normalized,p_hat\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << i << ',' << format_number(raw.values[i]) << ',' << format_number(smoothed.values[i]) << ','
        << format_number(normalized.t[i]) << ',' << format_number(normalized.p_hat[i]) << '\n';
  }
}

}  // namespace tutor_rl::metrics
