// Command-line front end: train, matrix, report, plot-data, stub-llm, modelfile.
#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "tutor_rl/envs/environment.hpp"
#include "tutor_rl/runner/config.hpp"
#include "tutor_rl/runner/experiment.hpp"
#include "tutor_rl/runner/report.hpp"
#include "tutor_rl/tutor/prompts.hpp"
#include "tutor_rl/tutor/stub_server.hpp"

namespace {

using namespace tutor_rl;

void print_rows(const std::vector<metrics::SummaryRow>& rows) {
  metrics::write_summary(std::cout, rows);
}

int run_cells(const std::vector<runner::ExperimentConfig>& cells, const std::string& out, unsigned parallel,
              bool resume, const std::vector<std::uint64_t>& seeds) {
  runner::MatrixOptions options;
  options.out_dir = out;
  options.parallelism = parallel;
  options.resume = resume;
  options.seeds = seeds;
  options.log = [](const std::string& line) { std::cerr << line << '\n'; };
  const auto result = runner::run_matrix(cells, options);
  print_rows(result.summary);
  std::cerr << result.executed << " run(s) executed, " << result.resumed << " resumed, " << result.failed
            << " failed; results in " << out << '\n';
  return result.failed == 0 ? 0 : 2;
}

std::map<std::string, double> parse_sizes(const std::vector<std::string>& items) {
  std::map<std::string, double> sizes;
  for (const auto& item : items) {
    const auto eq = item.rfind('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--tutor-size", "expected NAME=SIZE, got " + item);
    try {
      sizes[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--tutor-size", "size in '" + item + "' is not a number");
    }
  }
  return sizes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reinforcement learning with a tutor that advises actions"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "results";
  std::vector<std::uint64_t> seeds;
  unsigned parallel = 1;
  bool resume = false;

  auto* train = app.add_subcommand("train", "Run one experiment cell (every configured seed, or --seed)");
  train->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
  train->add_option("--seed", seeds, "Seed to run (repeatable); default: the config's seeds");
  train->add_option("--out", out_dir, "Output directory")->capture_default_str();
  train->add_flag("--resume", resume, "Skip runs already completed with the same config");

  auto* matrix = app.add_subcommand("matrix", "Run every cell of a matrix config");
  matrix->add_option("--config", config_path, "Matrix config file")->required()->check(CLI::ExistingFile);
  matrix->add_option("--parallel", parallel, "Cells run concurrently")->capture_default_str()->check(CLI::PositiveNumber);
  matrix->add_option("--seed", seeds, "Restrict every cell to this seed (repeatable)");
  matrix->add_option("--out", out_dir, "Output directory")->capture_default_str();
  matrix->add_flag("--resume", resume, "Skip runs already completed with the same config");

  std::string summary_path;
  std::vector<std::string> sizes;
  auto* report = app.add_subcommand("report", "Print score and time-saved tables from a summary");
  report->add_option("--summary", summary_path, "summary.csv (default: OUT/summary.csv)");
  report->add_option("--out", out_dir, "Results directory")->capture_default_str();
  report->add_option("--tutor-size", sizes, "Tutor model size, NAME=SIZE (repeatable), enables the correlation");

  int window = 7;
  auto* plot = app.add_subcommand("plot-data", "Rewrite per-run plot CSVs from the run records in OUT/runs");
  plot->add_option("--out", out_dir, "Results directory")->capture_default_str();
  plot->add_option("--window", window, "Moving-average window (odd)")->capture_default_str();

  tutor::StubOptions stub;
  std::string host = "127.0.0.1";
  int port = 11434;
  auto* stub_cmd = app.add_subcommand("stub-llm", "Serve canned replies on the /api/generate protocol");
  stub_cmd->add_option("--host", host)->capture_default_str();
  stub_cmd->add_option("--port", port)->capture_default_str();
  stub_cmd->add_option("--reply", stub.reply, "Reply text")->capture_default_str();
  stub_cmd->add_option("--malformed-reply", stub.malformed_reply, "Reply used for malformed answers");
  stub_cmd->add_option("--malformed-rate", stub.malformed_rate, "Fraction of malformed answers")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  stub_cmd->add_option("--seed", stub.seed, "Seed for the malformed-answer draw")->capture_default_str();
  stub_cmd->add_option("--delay-ms", stub.delay_ms, "Artificial response delay")->capture_default_str();

  std::string env_name;
  std::string base_model = "llama3.1:8b";
  auto* modelfile = app.add_subcommand("modelfile", "Print a model file carrying the tutor system prompt");
  modelfile->add_option("--env", env_name, "blackjack, connect_four or snake")->required();
  modelfile->add_option("--base", base_model, "Base model for the FROM line")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      const auto loaded = runner::load_config(config_path);
      if (loaded.cells.size() != 1) {
        std::cerr << "error: " << config_path << " describes " << loaded.cells.size()
                  << " cells; use the matrix subcommand\n";
        return 1;
      }
      return run_cells(loaded.cells, out_dir, 1, resume, seeds);
    }
    if (*matrix) {
      const auto loaded = runner::load_config(config_path);
      std::cerr << loaded.cells.size() << " cell(s) (" << loaded.raw_cell_count << " before de-duplication)\n";
      return run_cells(loaded.cells, out_dir, parallel, resume, seeds);
    }
    if (*report) {
      const std::filesystem::path path = summary_path.empty() ? std::filesystem::path(out_dir) / "summary.csv"
                                                               : std::filesystem::path(summary_path);
      std::cout << runner::format_report(runner::build_report(path, parse_sizes(sizes)));
      return 0;
    }
    if (*plot) {
      const auto written = runner::write_plot_data(out_dir, window);
      std::cerr << written << " plot file(s) written to " << out_dir << "/curves\n";
      return 0;
    }
    if (*stub_cmd) {
      tutor::StubLlmServer server(stub);
      std::cerr << "serving on http://" << host << ":" << port << '\n';
      server.run_blocking(host, port);
      return 0;
    }
    if (*modelfile) {
      const auto env = envs::make_environment(envs::env_kind_from_string(env_name));
      std::cout << tutor::make_modelfile(base_model, tutor::build_system_prompt(*env));
      return 0;
    }
  } catch (const runner::ValidationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
