#include "tutor_rl/runner/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace tutor_rl::runner {

namespace {

std::string column_label(const std::string& tutor, const std::string& reuse) {
  if (reuse == "n/a") return tutor;
  return tutor + (reuse == "on" ? " +reuse" : " -reuse");
}

std::optional<double> size_of(const std::string& tutor, const std::map<std::string, double>& sizes) {
  if (const auto it = sizes.find(tutor); it != sizes.end()) return it->second;
  const auto colon = tutor.find(':');
  if (colon != std::string::npos) {
    if (const auto it = sizes.find(tutor.substr(colon + 1)); it != sizes.end()) return it->second;
  }
  return std::nullopt;
}

std::string fixed(double value, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << value;
  return out.str();
}

void print_table(std::ostringstream& out, const std::vector<std::vector<std::string>>& table) {
  std::vector<std::size_t> width;
  for (const auto& row : table) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (std::size_t r = 0; r < table.size(); ++r) {
    for (std::size_t c = 0; c < table[r].size(); ++c) {
      out << (c ? " | " : "") << std::left << std::setw(static_cast<int>(width[c])) << table[r][c];
    }
    out << '\n';
    if (r == 0) {
      for (std::size_t c = 0; c < width.size(); ++c) out << (c ? "-+-" : "") << std::string(width[c], '-');
      out << '\n';
    }
  }
}

}  // namespace

Report build_report(const std::vector<metrics::SummaryRow>& rows, const std::map<std::string, double>& tutor_sizes) {
  Report report;
  std::map<std::string, std::size_t> cell_index;
  std::map<std::string, std::size_t> ledger_index;
  std::map<std::string, std::size_t> ledger_count;
  for (const auto& row : rows) {
    const std::string key = row.environment + "\x1f" + row.algorithm + "\x1f" + row.tutor + "\x1f" + row.reuse;
    auto [it, inserted] = cell_index.emplace(key, report.scores.size());
    if (inserted) report.scores.push_back({row.environment, row.algorithm, row.tutor, row.reuse, 0.0, 0});
    auto& cell = report.scores[it->second];
    cell.mean_score += row.convergence_score;
    cell.seeds += 1;

    if (row.reuse == "on") {
      auto [lt, fresh] = ledger_index.emplace(key, report.ledger.size());
      if (fresh) report.ledger.push_back({row.environment, row.algorithm, row.tutor, 0.0, 0.0, 0.0});
      auto& entry = report.ledger[lt->second];
      entry.reuses += static_cast<double>(row.reuses);
      entry.mean_latency_seconds += row.mean_latency_seconds;
      entry.saved_minutes += row.saved_minutes;
      ledger_count[key] += 1;
    }
  }
  for (auto& cell : report.scores) cell.mean_score /= static_cast<double>(cell.seeds);
  for (const auto& [key, index] : ledger_index) {
    const double n = static_cast<double>(ledger_count[key]);
    auto& entry = report.ledger[index];
    entry.reuses /= n;
    entry.mean_latency_seconds /= n;
    entry.saved_minutes /= n;
  }

  if (!tutor_sizes.empty()) {
    for (const auto& cell : report.scores) {
      if (const auto size = size_of(cell.tutor, tutor_sizes)) report.size_score_points.emplace_back(*size, cell.mean_score);
    }
    if (report.size_score_points.size() < 2) {
      report.correlation_note = "fewer than two cells have a configured tutor size";
    } else {
      std::vector<double> xs, ys;
      for (const auto& [x, y] : report.size_score_points) {
        xs.push_back(x);
        ys.push_back(y);
      }
      try {
        report.correlation = metrics::pearson(xs, ys);
        report.correlation_note = report.correlation->note;
      } catch (const metrics::ZeroVariance& e) {
        report.correlation_note = e.what();
      }
    }
  }
  return report;
}

Report build_report(const std::filesystem::path& summary_path, const std::map<std::string, double>& tutor_sizes) {
  return build_report(metrics::read_summary(summary_path), tutor_sizes);
}

std::string format_report(const Report& report) {
  std::ostringstream out;

  // Convergence scores: one row per environment/algorithm, one column per tutor setting.
  std::vector<std::string> columns;
  std::vector<std::pair<std::string, std::string>> row_keys;
  for (const auto& cell : report.scores) {
    const std::string column = column_label(cell.tutor, cell.reuse);
    if (std::find(columns.begin(), columns.end(), column) == columns.end()) columns.push_back(column);
    const auto row = std::make_pair(cell.environment, cell.algorithm);
    if (std::find(row_keys.begin(), row_keys.end(), row) == row_keys.end()) row_keys.push_back(row);
  }
  out << "Convergence score (mean over seeds)\n\n";
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header{"environment", "algorithm"};
  header.insert(header.end(), columns.begin(), columns.end());
  table.push_back(header);
  for (const auto& [environment, algorithm] : row_keys) {
    std::vector<std::string> line{environment, algorithm};
    for (const auto& column : columns) {
      std::string value = "-";
      for (const auto& cell : report.scores) {
        if (cell.environment == environment && cell.algorithm == algorithm &&
            column_label(cell.tutor, cell.reuse) == column) {
          value = fixed(cell.mean_score, 4);
        }
      }
      line.push_back(value);
    }
    table.push_back(line);
  }
  print_table(out, table);

  out << "\nTime saved by advice reuse (mean over seeds)\n\n";
  if (report.ledger.empty()) {
    out << "(no tutored cells with reuse enabled)\n";
  } else {
    std::vector<std::vector<std::string>> ledger{
        {"environment", "algorithm", "tutor", "reuses", "mean latency (s)", "saved (min)"}};
    for (const auto& row : report.ledger) {
      ledger.push_back({row.environment, row.algorithm, row.tutor, fixed(row.reuses, 1),
                        fixed(row.mean_latency_seconds, 3), fixed(row.saved_minutes, 2)});
    }
    print_table(out, ledger);
  }

  if (report.correlation) {
    const auto& c = *report.correlation;
    out << "\nPearson correlation of tutor size and score over " << c.n << " cells: r = " << fixed(c.r, 4);
    out << ", p = " << (std::isnan(c.p_value) ? std::string("n/a") : fixed(c.p_value, 4)) << '\n';
    if (!c.note.empty()) out << "note: " << c.note << '\n';
  } else if (!report.correlation_note.empty()) {
    out << "\nPearson correlation not computed: " << report.correlation_note << '\n';
  }
  return out.str();
}

}  // namespace tutor_rl::runner
