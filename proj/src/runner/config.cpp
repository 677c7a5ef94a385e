#include "tutor_rl/runner/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "tutor_rl/metrics/csv.hpp"

namespace tutor_rl::runner {

namespace pt = boost::property_tree;

std::string TutorSpec::label() const {
  switch (kind) {
    case Kind::none: return "none";
    case Kind::scripted: return "scripted:" + tutor::to_string(policy);
    case Kind::http: return "http:" + model;
  }
  return "none";
}

TutorSpec TutorSpec::parse(const std::string& label) {
  TutorSpec spec;
  if (label == "none") return spec;
  const auto colon = label.find(':');
  const std::string kind = label.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : label.substr(colon + 1);
  if (kind == "scripted") {
    spec.kind = Kind::scripted;
    spec.policy = tutor::scripted_policy_from_string(rest.empty() ? "optimal" : rest);
  } else if (kind == "http") {
    if (rest.empty()) throw std::invalid_argument("http tutor needs a model name, e.g. http:llama3.1:8b");
    spec.kind = Kind::http;
    spec.model = rest;
  } else {
    throw std::invalid_argument("unknown tutor '" + label + "' (expected none, scripted:<policy> or http:<model>)");
  }
  return spec;
}

std::string ExperimentConfig::reuse_label() const {
  if (!has_tutor()) return "n/a";
  return tutor_settings.reuse ? "on" : "off";
}

std::string ExperimentConfig::cell_name() const {
  std::string tutor_part = tutor.label();
  for (char& c : tutor_part) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '_') c = '_';
  }
  std::string name = envs::to_string(environment) + "-" + agents::to_string(agent.algorithm) + "-" + tutor_part;
  if (has_tutor()) name += tutor_settings.reuse ? "-reuse" : "-noreuse";
  return name;
}

StepDefaults step_defaults(envs::EnvKind kind) {
  switch (kind) {
    case envs::EnvKind::blackjack: return {15000, 3000};
    case envs::EnvKind::connect_four: return {10000, 1000};
    case envs::EnvKind::snake: return {8000, 1000};
  }
  return {10000, 1000};
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream stream(text);
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <typename T>
T parse_number(const std::string& raw, const std::string& path) {
  const std::string text = trim(raw);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError(path, "'" + text + "' is not a valid number");
  }
  return value;
}

std::int64_t parse_int(const std::string& raw, const std::string& path, std::int64_t min) {
  const auto value = parse_number<std::int64_t>(raw, path);
  if (value < min) throw ValidationError(path, "must be at least " + std::to_string(min) + ", got " + trim(raw));
  return value;
}

std::size_t parse_size(const std::string& raw, const std::string& path, std::int64_t min = 1) {
  return static_cast<std::size_t>(parse_int(raw, path, min));
}

double parse_real(const std::string& raw, const std::string& path, double lo, double hi, bool open_low = false) {
  const auto value = parse_number<double>(raw, path);
  if (!(value >= lo && value <= hi) || (open_low && value == lo)) {
    std::ostringstream range;
    range << (open_low ? "(" : "[") << lo << ", " << hi << "]";
    throw ValidationError(path, "must lie in " + range.str() + ", got " + trim(raw));
  }
  return value;
}

bool parse_bool(const std::string& raw, const std::string& path) {
  std::string text = trim(raw);
  std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
  if (text == "true" || text == "on" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "off" || text == "no" || text == "0") return false;
  throw ValidationError(path, "'" + trim(raw) + "' is not a boolean (true/false, on/off)");
}

template <typename F>
auto parse_with(const std::string& raw, const std::string& path, F&& parse) {
  try {
    return parse(trim(raw));
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError(path, e.what());
  }
}

constexpr double kHuge = 1e300;

// Returns false when `key` is not a setting of `algorithm`.
bool apply_agent_key(agents::AgentConfig& agent, const std::string& key, const std::string& value,
                     const std::string& path) {
  using agents::Algorithm;
  if (agent.algorithm == Algorithm::dqn) {
    auto& c = agent.dqn;
    if (key == "learning_rate") c.learning_rate = parse_real(value, path, 0.0, 1.0, true);
    else if (key == "buffer_size") c.buffer_size = parse_size(value, path);
    else if (key == "batch_size") c.batch_size = parse_size(value, path);
    else if (key == "gamma") c.gamma = parse_real(value, path, 0.0, 1.0);
    else if (key == "train_freq") c.train_freq = parse_size(value, path);
    else if (key == "learning_starts") c.learning_starts = parse_size(value, path, 0);
    else if (key == "target_sync_interval") c.target_sync_interval = parse_size(value, path);
    else if (key == "max_grad_norm") c.max_grad_norm = parse_real(value, path, 0.0, kHuge);
    else if (key == "epsilon_start") c.epsilon_start = parse_real(value, path, 0.0, 1.0);
    else if (key == "epsilon_end") c.epsilon_end = parse_real(value, path, 0.0, 1.0);
    else if (key == "epsilon_decay_steps") c.epsilon_decay_steps = parse_int(value, path, 0);
    else if (key == "epsilon_with_tutor") c.epsilon_with_tutor = parse_bool(value, path);
    else return false;
    return true;
  }
  if (agent.algorithm == Algorithm::ppo) {
    auto& c = agent.ppo;
    if (key == "learning_rate") c.learning_rate = parse_real(value, path, 0.0, 1.0, true);
    else if (key == "clip_range") c.clip_range = parse_real(value, path, 0.0, 1.0, true);
    else if (key == "batch_size") c.batch_size = parse_size(value, path);
    else if (key == "gamma") c.gamma = parse_real(value, path, 0.0, 1.0);
    else if (key == "gae_lambda") c.gae_lambda = parse_real(value, path, 0.0, 1.0);
    else if (key == "rollout_steps") c.rollout_steps = parse_size(value, path);
    else if (key == "epochs") c.epochs = parse_size(value, path);
    else if (key == "value_coef") c.value_coef = parse_real(value, path, 0.0, kHuge);
    else if (key == "entropy_coef") c.entropy_coef = parse_real(value, path, 0.0, kHuge);
    else if (key == "max_grad_norm") c.max_grad_norm = parse_real(value, path, 0.0, kHuge);
    else if (key == "normalize_advantage") c.normalize_advantage = parse_bool(value, path);
    else return false;
    return true;
  }
  auto& c = agent.a2c;
  if (key == "learning_rate") c.learning_rate = parse_real(value, path, 0.0, 1.0, true);
  else if (key == "n_steps" || key == "batch_size") c.n_steps = parse_size(value, path);
  else if (key == "gamma") c.gamma = parse_real(value, path, 0.0, 1.0);
  else if (key == "value_coef") c.value_coef = parse_real(value, path, 0.0, kHuge);
  else if (key == "entropy_coef") c.entropy_coef = parse_real(value, path, 0.0, kHuge);
  else if (key == "max_grad_norm") c.max_grad_norm = parse_real(value, path, 0.0, kHuge);
  else return false;
  return true;
}

// Ordered key/value pairs of one INI section.
using Section = std::vector<std::pair<std::string, std::string>>;

struct Document {
  std::map<std::string, Section> sections;
  std::vector<std::string> cell_order;  // [cell.*] names in file order

  const Section* find(const std::string& name) const {
    const auto it = sections.find(name);
    return it == sections.end() ? nullptr : &it->second;
  }
};

const std::set<std::string> kSections{"experiment", "tutor", "agent", "network", "dqn", "ppo",
                                      "a2c",        "env",   "output", "matrix"};

const std::map<std::string, std::set<std::string>> kFixedKeys{
    {"experiment", {"name", "environment", "algorithm", "total_steps", "decay_steps", "seeds"}},
    {"tutor",
     {"backend", "policy", "model", "url", "timeout_seconds", "latency_seconds", "reuse", "budget", "retry_cap",
      "p_initial", "p_final"}},
    {"network", {"hidden_layers", "activation"}},
    {"env", {"connect_four_opponent", "snake_starvation_limit"}},
    {"output", {"curve_index", "smoothing_window", "checkpoints"}},
    {"matrix", {"environments", "algorithms", "tutors", "reuse"}},
};

const std::set<std::string> kCellKeys{"environment", "algorithm", "tutor", "reuse", "total_steps", "decay_steps"};

Document read_document(std::istream& in) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  Document doc;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      // Keys before the first section header belong to [experiment].
      if (!kFixedKeys.at("experiment").contains(name)) throw ValidationError(name, "unknown key");
      doc.sections["experiment"].emplace_back(name, node.data());
      continue;
    }
    const bool is_cell = name.rfind("cell.", 0) == 0 && name.size() > 5;
    if (!is_cell && !kSections.contains(name)) throw ValidationError(name, "unknown section");
    if (is_cell) doc.cell_order.push_back(name);
    auto& section = doc.sections[name];
    for (const auto& [key, value] : node) {
      if (is_cell) {
        if (!kCellKeys.contains(key)) throw ValidationError(name + "." + key, "unknown key");
      } else if (const auto fixed = kFixedKeys.find(name); fixed != kFixedKeys.end()) {
        if (!fixed->second.contains(key)) throw ValidationError(name + "." + key, "unknown key");
      }
      section.emplace_back(key, value.data());
    }
  }
  return doc;
}

// Everything a single cell may vary.
struct CellSpec {
  envs::EnvKind environment = envs::EnvKind::snake;
  agents::Algorithm algorithm = agents::Algorithm::dqn;
  TutorSpec tutor;
  bool reuse = true;
  std::optional<std::int64_t> total_steps;
  std::optional<std::int64_t> decay_steps;
};

envs::EnvKind parse_env(const std::string& v, const std::string& path) {
  return parse_with(v, path, [](const std::string& t) { return envs::env_kind_from_string(t); });
}

agents::Algorithm parse_algorithm(const std::string& v, const std::string& path) {
  return parse_with(v, path, [](const std::string& t) { return agents::algorithm_from_string(t); });
}

TutorSpec parse_tutor(const std::string& v, const std::string& path) {
  return parse_with(v, path, [](const std::string& t) { return TutorSpec::parse(t); });
}

void apply_common(const Document& doc, ExperimentConfig& cfg, const CellSpec& cell) {
  cfg.environment = cell.environment;
  cfg.agent.algorithm = cell.algorithm;
  cfg.tutor = cell.tutor;
  cfg.tutor_settings.reuse = cell.reuse;

  if (const auto* s = doc.find("experiment")) {
    for (const auto& [key, value] : *s) {
      const std::string path = "experiment." + key;
      if (key == "name") cfg.name = trim(value);
      if (key == "seeds") {
        cfg.seeds.clear();
        for (const auto& item : split_list(value)) {
          cfg.seeds.push_back(static_cast<std::uint64_t>(parse_int(item, path, 0)));
        }
        if (cfg.seeds.empty()) throw ValidationError(path, "needs at least one seed");
      }
    }
  }

  if (const auto* s = doc.find("tutor")) {
    auto& t = cfg.tutor_settings;
    for (const auto& [key, value] : *s) {
      const std::string path = "tutor." + key;
      if (key == "url") t.url = trim(value);
      else if (key == "timeout_seconds") t.timeout_seconds = parse_real(value, path, 0.0, kHuge, true);
      else if (key == "latency_seconds") t.scripted_latency_seconds = parse_real(value, path, 0.0, kHuge);
      else if (key == "budget") t.budget = static_cast<int>(parse_int(value, path, 0));
      else if (key == "retry_cap") t.retry_cap = static_cast<int>(parse_int(value, path, 1));
      else if (key == "p_initial") t.p_initial = parse_real(value, path, 0.0, 1.0);
      else if (key == "p_final") t.p_final = parse_real(value, path, 0.0, 1.0);
    }
    if (t.p_final > t.p_initial) throw ValidationError("tutor.p_final", "must not exceed tutor.p_initial");
  }

  if (const auto* s = doc.find("network")) {
    for (const auto& [key, value] : *s) {
      const std::string path = "network." + key;
      if (key == "hidden_layers") {
        cfg.agent.network.hidden.clear();
        for (const auto& item : split_list(value)) cfg.agent.network.hidden.push_back(parse_size(item, path));
      } else if (key == "activation") {
        cfg.agent.network.activation =
            parse_with(value, path, [](const std::string& t) { return nn::activation_from_string(t); });
      }
    }
  }

  if (const auto* s = doc.find("agent")) {
    for (const auto& [key, value] : *s) {
      if (!apply_agent_key(cfg.agent, key, value, "agent." + key)) {
        throw ValidationError("agent." + key, "unknown key for algorithm " + agents::to_string(cell.algorithm));
      }
    }
  }
  for (const char* algo : {"dqn", "ppo", "a2c"}) {
    const auto* s = doc.find(algo);
    if (!s) continue;
    agents::AgentConfig scratch = cfg.agent;
    scratch.algorithm = agents::algorithm_from_string(algo);
    for (const auto& [key, value] : *s) {
      if (!apply_agent_key(scratch, key, value, std::string(algo) + "." + key)) {
        throw ValidationError(std::string(algo) + "." + key, "unknown key");
      }
    }
    // Sections for other algorithms are validated but leave this cell alone.
    if (scratch.algorithm == cfg.agent.algorithm) cfg.agent = scratch;
  }

  if (const auto* s = doc.find("env")) {
    for (const auto& [key, value] : *s) {
      const std::string path = "env." + key;
      if (key == "connect_four_opponent") {
        cfg.env.connect_four_opponent =
            parse_with(value, path, [](const std::string& t) { return envs::opponent_policy_from_string(t); });
      } else if (key == "snake_starvation_limit") {
        cfg.env.snake_starvation_limit = static_cast<int>(parse_int(value, path, 1));
      }
    }
  }

  if (const auto* s = doc.find("output")) {
    for (const auto& [key, value] : *s) {
      const std::string path = "output." + key;
      if (key == "curve_index") {
        const std::string v = trim(value);
        if (v == "episode") cfg.output.curve_index = CurveIndex::episode;
        else if (v == "step") cfg.output.curve_index = CurveIndex::step;
        else throw ValidationError(path, "expected episode or step, got '" + v + "'");
      } else if (key == "smoothing_window") {
        const auto w = parse_int(value, path, 1);
        if (w % 2 == 0) throw ValidationError(path, "must be odd");
        cfg.output.smoothing_window = static_cast<int>(w);
      } else if (key == "checkpoints") {
        cfg.output.checkpoints = parse_bool(value, path);
      }
    }
  }

  const StepDefaults defaults = step_defaults(cfg.environment);
  cfg.total_steps = cell.total_steps.value_or(defaults.total_steps);
  cfg.decay_steps = cell.decay_steps.value_or(defaults.decay_steps);
  if (cfg.decay_steps < 1) throw ValidationError("experiment.decay_steps", "must be at least 1");

  if (cfg.agent.algorithm == agents::Algorithm::dqn && cfg.agent.dqn.buffer_size < cfg.agent.dqn.batch_size) {
    throw ValidationError("dqn.buffer_size", "must hold at least one batch");
  }
}

// Fills the step overrides shared by [experiment] and [cell.*].
void read_steps(const Section& section, const std::string& prefix, CellSpec& cell) {
  for (const auto& [key, value] : section) {
    if (key == "total_steps") cell.total_steps = parse_int(value, prefix + key, 0);
    if (key == "decay_steps") cell.decay_steps = parse_int(value, prefix + key, 1);
  }
}

LoadedConfig resolve(const Document& doc) {
  CellSpec base;
  bool environment_named = false;
  if (const auto* s = doc.find("experiment")) {
    for (const auto& [key, value] : *s) {
      if (key == "environment") {
        base.environment = parse_env(value, "experiment.environment");
        environment_named = true;
      }
      if (key == "algorithm") base.algorithm = parse_algorithm(value, "experiment.algorithm");
    }
    read_steps(*s, "experiment.", base);
  }
  if (const auto* s = doc.find("tutor")) {
    std::string backend = "none";
    std::string policy = "optimal";
    std::string model;
    for (const auto& [key, value] : *s) {
      if (key == "backend") backend = trim(value);
      if (key == "policy") policy = trim(value);
      if (key == "model") model = trim(value);
      if (key == "reuse") base.reuse = parse_bool(value, "tutor.reuse");
    }
    if (backend == "none") base.tutor = TutorSpec{};
    else if (backend == "scripted") base.tutor = parse_tutor("scripted:" + policy, "tutor.policy");
    else if (backend == "http") base.tutor = parse_tutor("http:" + model, "tutor.model");
    else throw ValidationError("tutor.backend", "expected none, scripted or http, got '" + backend + "'");
  }

  LoadedConfig loaded;
  const Section* matrix = doc.find("matrix");
  loaded.is_matrix = matrix != nullptr || !doc.cell_order.empty();
  if (!loaded.is_matrix && !environment_named) {
    throw ValidationError("experiment.environment", "required (blackjack, connect_four or snake)");
  }
  apply_common(doc, loaded.base, base);

  std::vector<CellSpec> specs;
  if (matrix) {
    std::vector<envs::EnvKind> environments{base.environment};
    std::vector<agents::Algorithm> algorithms{base.algorithm};
    std::vector<TutorSpec> tutors{base.tutor};
    std::vector<bool> reuse{base.reuse};
    for (const auto& [key, value] : *matrix) {
      const std::string path = "matrix." + key;
      const auto items = split_list(value);
      if (items.empty()) throw ValidationError(path, "needs at least one entry");
      if (key == "environments") {
        environments.clear();
        for (const auto& i : items) environments.push_back(parse_env(i, path));
      } else if (key == "algorithms") {
        algorithms.clear();
        for (const auto& i : items) algorithms.push_back(parse_algorithm(i, path));
      } else if (key == "tutors") {
        tutors.clear();
        for (const auto& i : items) tutors.push_back(parse_tutor(i, path));
      } else if (key == "reuse") {
        reuse.clear();
        for (const auto& i : items) reuse.push_back(parse_bool(i, path));
      }
    }
    for (auto e : environments) {
      for (auto a : algorithms) {
        for (const auto& t : tutors) {
          for (bool r : reuse) {
            CellSpec spec = base;
            spec.environment = e;
            spec.algorithm = a;
            spec.tutor = t;
            spec.reuse = r;
            // Per-environment step defaults unless the file pins them.
            specs.push_back(spec);
          }
        }
      }
    }
  }
  for (const auto& name : doc.cell_order) {
    const Section& section = doc.sections.at(name);
    CellSpec spec = base;
    for (const auto& [key, value] : section) {
      const std::string path = name + "." + key;
      if (key == "environment") spec.environment = parse_env(value, path);
      else if (key == "algorithm") spec.algorithm = parse_algorithm(value, path);
      else if (key == "tutor") spec.tutor = parse_tutor(value, path);
      else if (key == "reuse") spec.reuse = parse_bool(value, path);
    }
    read_steps(section, name + ".", spec);
    specs.push_back(spec);
  }
  if (!loaded.is_matrix) specs.push_back(base);

  loaded.raw_cell_count = specs.size();
  std::set<std::string> seen;
  for (const auto& spec : specs) {
    ExperimentConfig cfg;
    apply_common(doc, cfg, spec);
    // A run without a tutor is the same experiment whatever the reuse flag says.
    if (!cfg.has_tutor()) cfg.tutor_settings.reuse = false;
    if (seen.insert(config_hash(cfg)).second) loaded.cells.push_back(std::move(cfg));
  }
  return loaded;
}

}  // namespace

LoadedConfig load_config_text(const std::string& text) {
  std::istringstream in(text);
  return resolve(read_document(in));
}

LoadedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path.string());
  return resolve(read_document(in));
}

std::map<std::string, std::string> canonical_fields(const ExperimentConfig& c) {
  using metrics::format_number;
  std::map<std::string, std::string> f;
  f["experiment.environment"] = envs::to_string(c.environment);
  f["experiment.algorithm"] = agents::to_string(c.agent.algorithm);
  f["experiment.total_steps"] = std::to_string(c.total_steps);
  f["experiment.decay_steps"] = std::to_string(c.decay_steps);
  f["tutor.label"] = c.tutor.label();
  f["tutor.reuse"] = c.reuse_label();
  if (c.has_tutor()) {
    const auto& t = c.tutor_settings;
    f["tutor.budget"] = std::to_string(t.budget);
    f["tutor.retry_cap"] = std::to_string(t.retry_cap);
    f["tutor.p_initial"] = format_number(t.p_initial);
    f["tutor.p_final"] = format_number(t.p_final);
    if (c.tutor.kind == TutorSpec::Kind::scripted) f["tutor.latency_seconds"] = format_number(t.scripted_latency_seconds);
    if (c.tutor.kind == TutorSpec::Kind::http) {
      f["tutor.url"] = t.url;
      f["tutor.timeout_seconds"] = format_number(t.timeout_seconds);
    }
  }
  std::string hidden;
  for (auto h : c.agent.network.hidden) hidden += (hidden.empty() ? "" : ",") + std::to_string(h);
  f["network.hidden_layers"] = hidden;
  f["network.activation"] = nn::to_string(c.agent.network.activation);
  switch (c.agent.algorithm) {
    case agents::Algorithm::dqn: {
      const auto& a = c.agent.dqn;
      f["dqn.learning_rate"] = format_number(a.learning_rate);
      f["dqn.buffer_size"] = std::to_string(a.buffer_size);
      f["dqn.batch_size"] = std::to_string(a.batch_size);
      f["dqn.gamma"] = format_number(a.gamma);
      f["dqn.train_freq"] = std::to_string(a.train_freq);
      f["dqn.learning_starts"] = std::to_string(a.learning_starts);
      f["dqn.target_sync_interval"] = std::to_string(a.target_sync_interval);
      f["dqn.max_grad_norm"] = format_number(a.max_grad_norm);
      f["dqn.epsilon_start"] = format_number(a.epsilon_start);
      f["dqn.epsilon_end"] = format_number(a.epsilon_end);
      f["dqn.epsilon_decay_steps"] = std::to_string(a.epsilon_decay_steps);
      f["dqn.epsilon_with_tutor"] = a.epsilon_with_tutor ? "true" : "false";
      break;
    }
    case agents::Algorithm::ppo: {
      const auto& a = c.agent.ppo;
      f["ppo.learning_rate"] = format_number(a.learning_rate);
      f["ppo.clip_range"] = format_number(a.clip_range);
      f["ppo.batch_size"] = std::to_string(a.batch_size);
      f["ppo.gamma"] = format_number(a.gamma);
      f["ppo.gae_lambda"] = format_number(a.gae_lambda);
      f["ppo.rollout_steps"] = std::to_string(a.rollout_steps);
      f["ppo.epochs"] = std::to_string(a.epochs);
      f["ppo.value_coef"] = format_number(a.value_coef);
      f["ppo.entropy_coef"] = format_number(a.entropy_coef);
      f["ppo.max_grad_norm"] = format_number(a.max_grad_norm);
      f["ppo.normalize_advantage"] = a.normalize_advantage ? "true" : "false";
      break;
    }
    case agents::Algorithm::a2c: {
      const auto& a = c.agent.a2c;
      f["a2c.learning_rate"] = format_number(a.learning_rate);
      f["a2c.n_steps"] = std::to_string(a.n_steps);
      f["a2c.gamma"] = format_number(a.gamma);
      f["a2c.value_coef"] = format_number(a.value_coef);
      f["a2c.entropy_coef"] = format_number(a.entropy_coef);
      f["a2c.max_grad_norm"] = format_number(a.max_grad_norm);
      break;
    }
  }
  if (c.environment == envs::EnvKind::connect_four) {
    f["env.connect_four_opponent"] = envs::to_string(c.env.connect_four_opponent);
  }
  if (c.environment == envs::EnvKind::snake) {
    f["env.snake_starvation_limit"] = std::to_string(c.env.snake_starvation_limit);
  }
  f["output.curve_index"] = c.output.curve_index == CurveIndex::episode ? "episode" : "step";
  return f;
}

std::string canonical_text(const ExperimentConfig& config) {
  std::string text;
  for (const auto& [key, value] : canonical_fields(config)) text += key + "=" + value + "\n";
  return text;
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text(config)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

}  // namespace tutor_rl::runner
