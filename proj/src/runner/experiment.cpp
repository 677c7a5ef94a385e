#include "tutor_rl/runner/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tutor_rl/metrics/metrics.hpp"
#include "tutor_rl/nn/optim.hpp"

namespace tutor_rl::runner {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> RunRecord::performance_curve() const {
  if (curve_index == "step") {
    agents::TrainingLog log;
    log.episode_returns = episode_returns;
    log.episode_end_steps = episode_end_steps;
    log.steps = steps;
    return log.step_curve();
  }
  return episode_returns;
}

std::string run_id(const ExperimentConfig& config, std::uint64_t seed) {
  return config.cell_name() + "-seed" + std::to_string(seed);
}

std::string to_json(const RunRecord& r) {
  const auto& s = r.tutor_stats;
  json j{
      {"format", "tutor-rl-run/1"},
      {"run_id", r.run_id},
      {"config_hash", r.config_hash},
      {"seed", r.seed},
      {"config", r.config},
      {"environment", r.environment},
      {"algorithm", r.algorithm},
      {"tutor", r.tutor},
      {"reuse", r.reuse},
      {"curve_index", r.curve_index},
      {"status", r.ok ? "ok" : "failed"},
      {"error", r.error},
      {"steps", r.steps},
      {"updates", r.updates},
      {"episode_returns", r.episode_returns},
      {"episode_end_steps", r.episode_end_steps},
      {"decisions",
       {{"policy", r.decisions.policy},
        {"tutor_fresh", r.decisions.tutor_fresh},
        {"tutor_reused", r.decisions.tutor_reused},
        {"random_fallback", r.decisions.random_fallback},
        {"inapplicable", r.decisions.inapplicable}}},
      {"tutor_stats",
       {{"backend_queries", s.backend_queries},
        {"fresh_queries", s.fresh_queries},
        {"reuses", s.reuses},
        {"parse_failures", s.parse_failures},
        {"inapplicable", s.inapplicable},
        {"transport_failures", s.transport_failures},
        {"random_fallbacks", s.random_fallbacks},
        {"latencies", s.latencies},
        {"reuse_latencies", s.reuse_latencies}}},
      {"elapsed_seconds", r.elapsed_seconds},
      {"checkpoint", r.checkpoint},
  };
  return j.dump(1) + "\n";
}

RunRecord record_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.value("format", "") != "tutor-rl-run/1") throw std::runtime_error("not a run record");
  RunRecord r;
  r.run_id = j.at("run_id").get<std::string>();
  r.config_hash = j.at("config_hash").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.config = j.at("config").get<std::map<std::string, std::string>>();
  r.environment = j.at("environment").get<std::string>();
  r.algorithm = j.at("algorithm").get<std::string>();
  r.tutor = j.at("tutor").get<std::string>();
  r.reuse = j.at("reuse").get<std::string>();
  r.curve_index = j.at("curve_index").get<std::string>();
  r.ok = j.at("status").get<std::string>() == "ok";
  r.error = j.at("error").get<std::string>();
  r.steps = j.at("steps").get<std::int64_t>();
  r.updates = j.at("updates").get<std::uint64_t>();
  r.episode_returns = j.at("episode_returns").get<std::vector<double>>();
  r.episode_end_steps = j.at("episode_end_steps").get<std::vector<std::int64_t>>();
  const auto& d = j.at("decisions");
  r.decisions.policy = d.at("policy").get<std::uint64_t>();
  r.decisions.tutor_fresh = d.at("tutor_fresh").get<std::uint64_t>();
  r.decisions.tutor_reused = d.at("tutor_reused").get<std::uint64_t>();
  r.decisions.random_fallback = d.at("random_fallback").get<std::uint64_t>();
  r.decisions.inapplicable = d.at("inapplicable").get<std::uint64_t>();
  const auto& s = j.at("tutor_stats");
  r.tutor_stats.backend_queries = s.at("backend_queries").get<std::uint64_t>();
  r.tutor_stats.fresh_queries = s.at("fresh_queries").get<std::uint64_t>();
  r.tutor_stats.reuses = s.at("reuses").get<std::uint64_t>();
  r.tutor_stats.parse_failures = s.at("parse_failures").get<std::uint64_t>();
  r.tutor_stats.inapplicable = s.at("inapplicable").get<std::uint64_t>();
  r.tutor_stats.transport_failures = s.at("transport_failures").get<std::uint64_t>();
  r.tutor_stats.random_fallbacks = s.at("random_fallbacks").get<std::uint64_t>();
  r.tutor_stats.latencies = s.at("latencies").get<std::vector<double>>();
  r.tutor_stats.reuse_latencies = s.at("reuse_latencies").get<std::vector<double>>();
  r.elapsed_seconds = j.at("elapsed_seconds").get<double>();
  r.checkpoint = j.at("checkpoint").get<std::string>();
  return r;
}

RunRecord read_record(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open run record " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return record_from_json(text.str());
}

std::unique_ptr<tutor::TutorBackend> make_backend(const ExperimentConfig& config, std::uint64_t seed) {
  switch (config.tutor.kind) {
    case TutorSpec::Kind::none: return nullptr;
    case TutorSpec::Kind::scripted:
      return std::make_unique<tutor::ScriptedBackend>(config.tutor.policy, tutor::mix_seed(seed, "tutor"),
                                                      config.tutor_settings.scripted_latency_seconds);
    case TutorSpec::Kind::http:
      return std::make_unique<tutor::HttpLlmBackend>(tutor::resolve_llm_url(config.tutor_settings.url),
                                                     config.tutor.model, config.tutor_settings.timeout_seconds);
  }
  return nullptr;
}

std::unique_ptr<tutor::TutorGate> make_gate(const ExperimentConfig& config, std::uint64_t seed) {
  auto backend = make_backend(config, seed);
  if (!backend) return nullptr;
  const auto& t = config.tutor_settings;
  tutor::GateOptions options{t.budget, t.reuse, t.retry_cap, true};
  return std::make_unique<tutor::TutorGate>(tutor::TutorSchedule(t.p_initial, t.p_final, config.decay_steps),
                                            std::move(backend), options, tutor::mix_seed(seed, "gate"));
}

CellRun run_cell(const ExperimentConfig& config, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  auto env = envs::make_environment(config.environment, config.env);
  auto agent = agents::make_agent(config.agent, env->observation_size(), env->action_count(), config.decay_steps,
                                  seed);
  auto gate = make_gate(config, seed);
  const agents::TrainingLog log = agents::train(*agent, *env, gate.get(), config.total_steps, seed);

  RunRecord r;
  r.run_id = run_id(config, seed);
  r.config_hash = config_hash(config);
  r.seed = seed;
  r.config = canonical_fields(config);
  r.environment = envs::to_string(config.environment);
  r.algorithm = agents::to_string(config.agent.algorithm);
  r.tutor = config.tutor.label();
  r.reuse = config.reuse_label();
  r.curve_index = config.output.curve_index == CurveIndex::step ? "step" : "episode";
  r.episode_returns = log.episode_returns;
  r.episode_end_steps = log.episode_end_steps;
  r.steps = log.steps;
  r.updates = agent->update_count();
  r.decisions = log.decisions;
  if (gate) r.tutor_stats = gate->stats();
  r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return CellRun{std::move(r), std::move(agent)};
}

namespace {

// Normalized curve per record (nullopt for failed or empty runs), with one
// global min-max per environment.
std::vector<std::optional<metrics::NormalizedCurve>> normalize_by_environment(const std::vector<RunRecord>& records) {
  std::vector<std::optional<metrics::NormalizedCurve>> out(records.size());
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].ok && !records[i].performance_curve().empty()) groups[records[i].environment].push_back(i);
  }
  for (const auto& [environment, members] : groups) {
    std::vector<metrics::PerformanceCurve> curves;
    for (auto i : members) curves.push_back({records[i].performance_curve(), records[i].run_id});
    try {
      auto normalized = metrics::normalize_set(curves);
      for (std::size_t k = 0; k < members.size(); ++k) out[members[k]] = std::move(normalized[k]);
    } catch (const metrics::DegenerateRange&) {
      // Every value identical: nothing was learned relative to anything else.
      for (std::size_t k = 0; k < members.size(); ++k) {
        const std::size_t n = curves[k].values.size();
        metrics::NormalizedCurve flat{std::vector<double>(n), std::vector<double>(n, 0.0), curves[k].run_id};
        for (std::size_t i = 0; i < n; ++i) flat.t[i] = static_cast<double>(i) / static_cast<double>(n);
        out[members[k]] = std::move(flat);
      }
    }
  }
  return out;
}

void write_atomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

std::string plot_csv(const RunRecord& record, const metrics::NormalizedCurve& normalized, int window) {
  const metrics::PerformanceCurve raw{record.performance_curve(), record.run_id};
  std::ostringstream out;
  metrics::write_run_csv(out, raw, metrics::smooth_for_plot(raw, window), normalized);
  return out.str();
}

std::string mean_summary(const std::vector<metrics::SummaryRow>& rows) {
  // One line per cell: the per-seed mean of every numeric column.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const metrics::SummaryRow*>> cells;
  for (const auto& row : rows) {
    const std::string key = row.environment + "," + row.algorithm + "," + row.tutor + "," + row.reuse;
    if (!cells.contains(key)) order.push_back(key);
    cells[key].push_back(&row);
  }
  std::ostringstream out;
  out << "environment,algorithm,tutor,reuse,seeds,convergence_score,fresh_queries,reuses,saved_minutes,"
         "wall_clock_seconds,mean_latency_seconds\n";
  for (const auto& key : order) {
    const auto& members = cells[key];
    double score = 0, fresh = 0, reuses = 0, saved = 0, wall = 0, latency = 0;
    for (const auto* r : members) {
      score += r->convergence_score;
      fresh += static_cast<double>(r->fresh_queries);
      reuses += static_cast<double>(r->reuses);
      saved += r->saved_minutes;
      wall += r->wall_clock_seconds;
      latency += r->mean_latency_seconds;
    }
    const double n = static_cast<double>(members.size());
    using metrics::format_number;
    out << key << ',' << members.size() << ',' << format_number(score / n) << ',' << format_number(fresh / n) << ','
        << format_number(reuses / n) << ',' << format_number(saved / n) << ',' << format_number(wall / n) << ','
        << format_number(latency / n) << '\n';
  }
  return out.str();
}

}  // namespace

metrics::SummaryRow summary_row(const RunRecord& record, double convergence_score) {
  const auto& s = record.tutor_stats;
  metrics::TimeLedger ledger{s.reuses, s.latencies, s.fresh_queries, s.reuse_latencies};
  metrics::SummaryRow row;
  row.environment = record.environment;
  row.algorithm = record.algorithm;
  row.tutor = record.tutor;
  row.reuse = record.reuse;
  row.seed = record.seed;
  row.convergence_score = convergence_score;
  row.fresh_queries = s.fresh_queries;
  row.reuses = s.reuses;
  row.saved_minutes = s.latencies.empty() ? 0.0 : metrics::saved_time_minutes(ledger);
  row.wall_clock_seconds = s.total_latency_seconds();
  row.mean_latency_seconds = s.latencies.empty() ? 0.0 : metrics::mean_latency_seconds(ledger);
  return row;
}

std::vector<metrics::SummaryRow> summarize(const std::vector<RunRecord>& records) {
  const auto normalized = normalize_by_environment(records);
  std::vector<metrics::SummaryRow> rows;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].ok) continue;
    const double score = normalized[i] ? metrics::convergence_score(*normalized[i]) : 0.0;
    rows.push_back(summary_row(records[i], score));
  }
  return rows;
}

MatrixResult run_matrix(const std::vector<ExperimentConfig>& cells, const MatrixOptions& options) {
  const fs::path runs_dir = options.out_dir / "runs";
  const fs::path curves_dir = options.out_dir / "curves";
  const fs::path checkpoints_dir = options.out_dir / "checkpoints";
  fs::create_directories(runs_dir);
  fs::create_directories(curves_dir);

  struct Task {
    const ExperimentConfig* config;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const auto& cell : cells) {
    for (auto seed : options.seeds.empty() ? cell.seeds : options.seeds) tasks.push_back({&cell, seed});
  }

  MatrixResult result;
  result.records.resize(tasks.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const fs::path path = runs_dir / (run_id(*tasks[i].config, tasks[i].seed) + ".json");
    if (options.resume && fs::exists(path)) {
      try {
        RunRecord existing = read_record(path);
        if (existing.ok && existing.config_hash == config_hash(*tasks[i].config) && existing.seed == tasks[i].seed) {
          result.records[i] = std::move(existing);
          ++result.resumed;
          if (options.log) options.log("skip " + result.records[i].run_id + " (already complete)");
          continue;
        }
      } catch (const std::exception&) {
        // Unreadable leftovers are simply re-run.
      }
    }
    pending.push_back(i);
  }

  std::mutex sink;  // serializes every write into out_dir and the log callback
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < pending.size(); k = next++) {
      const std::size_t i = pending[k];
      const Task& task = tasks[i];
      RunRecord record;
      try {
        CellRun run = run_cell(*task.config, task.seed);
        record = std::move(run.record);
        if (task.config->output.checkpoints) {
          const std::string name = record.run_id + ".ckpt";
          std::lock_guard lock(sink);
          fs::create_directories(checkpoints_dir);
          const auto nets = run.agent->networks();
          nn::save_checkpoint(checkpoints_dir / name, nets);
          record.checkpoint = "checkpoints/" + name;
        }
      } catch (const std::exception& e) {
        record.run_id = run_id(*task.config, task.seed);
        record.config_hash = config_hash(*task.config);
        record.seed = task.seed;
        record.config = canonical_fields(*task.config);
        record.environment = envs::to_string(task.config->environment);
        record.algorithm = agents::to_string(task.config->agent.algorithm);
        record.tutor = task.config->tutor.label();
        record.reuse = task.config->reuse_label();
        record.ok = false;
        record.error = e.what();
      }
      std::lock_guard lock(sink);
      write_atomically(runs_dir / (record.run_id + ".json"), to_json(record));
      if (options.log) {
        options.log((record.ok ? "done " : "FAILED ") + record.run_id +
                    (record.ok ? "" : ": " + record.error));
      }
      result.records[i] = std::move(record);
    }
  };
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, options.parallelism), std::max<std::size_t>(1, pending.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  result.executed = pending.size();
  for (const auto& r : result.records) result.failed += r.ok ? 0 : 1;

  result.summary = summarize(result.records);
  std::ostringstream summary;
  metrics::write_summary(summary, result.summary);
  write_atomically(options.out_dir / "summary.csv", summary.str());
  write_atomically(options.out_dir / "summary_mean.csv", mean_summary(result.summary));

  const auto normalized = normalize_by_environment(result.records);
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    if (!normalized[i]) continue;
    const int window = tasks[i].config->output.smoothing_window;
    write_atomically(curves_dir / (result.records[i].run_id + ".csv"),
                     plot_csv(result.records[i], *normalized[i], window));
  }
  return result;
}

std::size_t write_plot_data(const fs::path& out_dir, int smoothing_window) {
  std::vector<RunRecord> records;
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(out_dir / "runs")) {
    if (entry.path().extension() == ".json") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) records.push_back(read_record(p));
  fs::create_directories(out_dir / "curves");
  const auto normalized = normalize_by_environment(records);
  std::size_t written = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!normalized[i]) continue;
    write_atomically(out_dir / "curves" / (records[i].run_id + ".csv"),
                     plot_csv(records[i], *normalized[i], smoothing_window));
    ++written;
  }
  return written;
}

}  // namespace tutor_rl::runner
