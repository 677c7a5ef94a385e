#include "tutor_rl/tutor/backend.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <climits>
#include <cstdlib>
#include <string_view>

#include <httplib.h>
#include <json.hpp>

#include "tutor_rl/envs/games.hpp"

namespace tutor_rl::tutor {

namespace {

using envs::ActionId;
using envs::GridPos;
using envs::SnakeObservation;

constexpr int kSnakeSize = SnakeObservation::kSize;

bool snake_cell_free(const SnakeObservation& obs, GridPos p) {
  return p.row >= 0 && p.row < kSnakeSize && p.col >= 0 && p.col < kSnakeSize &&
         obs.at(p.row, p.col) != SnakeObservation::kSnake;
}

int manhattan(GridPos a, GridPos b) { return std::abs(a.row - b.row) + std::abs(a.col - b.col); }

GridPos moved(GridPos p, std::size_t action) {
  const GridPos d = envs::snake_move_delta(ActionId{action});
  return {p.row + d.row, p.col + d.col};
}

ActionId snake_first_reducing_move(const SnakeObservation& obs) {
  const int current = manhattan(obs.head, obs.food);
  for (std::size_t a = 0; a < 4; ++a) {
    if (manhattan(moved(obs.head, a), obs.food) < current) return ActionId{a};
  }
  return ActionId{0};
}

ActionId snake_adversarial_move(const SnakeObservation& obs) {
  for (std::size_t a = 0; a < 4; ++a) {
    if (!snake_cell_free(obs, moved(obs.head, a))) return ActionId{a};
  }
  std::size_t worst = 0;
  int worst_distance = -1;
  for (std::size_t a = 0; a < 4; ++a) {
    const int d = manhattan(moved(obs.head, a), obs.food);
    if (d > worst_distance) {
      worst = a;
      worst_distance = d;
    }
  }
  return ActionId{worst};
}

int immediate_win_column(const envs::ConnectFourObservation& board, envs::Mark mark) {
  for (int c = 0; c < envs::ConnectFourObservation::kCols; ++c) {
    envs::ConnectFourObservation trial = board;
    const int row = envs::drop_token(trial, c, mark);
    if (row >= 0 && envs::wins_through(trial, row, c)) return c;
  }
  return -1;
}

ActionId connect_four_in_order(const envs::ConnectFourObservation& board, std::array<int, 7> order,
                               int avoid = -1) {
  for (int c : order) {
    if (c != avoid && !envs::column_full(board, c)) return ActionId{static_cast<std::size_t>(c)};
  }
  for (int c : order) {
    if (!envs::column_full(board, c)) return ActionId{static_cast<std::size_t>(c)};
  }
  return ActionId{0};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(seed) ^ h);
}

std::string to_string(ScriptedPolicy policy) {
  switch (policy) {
    case ScriptedPolicy::optimal: return "optimal";
    case ScriptedPolicy::heuristic: return "heuristic";
    case ScriptedPolicy::random: return "random";
    case ScriptedPolicy::adversarial: return "adversarial";
    case ScriptedPolicy::malformed: return "malformed";
  }
  return "unknown";
}

ScriptedPolicy scripted_policy_from_string(const std::string& name) {
  if (name == "optimal") return ScriptedPolicy::optimal;
  if (name == "heuristic") return ScriptedPolicy::heuristic;
  if (name == "random") return ScriptedPolicy::random;
  if (name == "adversarial") return ScriptedPolicy::adversarial;
  if (name == "malformed") return ScriptedPolicy::malformed;
  throw std::invalid_argument("unknown scripted tutor policy '" + name + "'");
}

ActionId snake_greedy_move(const SnakeObservation& obs) {
  std::size_t best = 4;
  int best_distance = INT_MAX;
  for (std::size_t a = 0; a < 4; ++a) {
    const GridPos next = moved(obs.head, a);
    if (!snake_cell_free(obs, next)) continue;
    const int d = manhattan(next, obs.food);
    if (d < best_distance) {
      best = a;
      best_distance = d;
    }
  }
  return ActionId{best == 4 ? 0 : best};
}

ActionId blackjack_basic_strategy(const envs::BlackjackObservation& obs) {
  const int dealer = obs.dealer_card;
  bool stick = false;
  if (obs.usable_ace) {
    stick = obs.player_sum >= 19 || (obs.player_sum == 18 && dealer >= 2 && dealer <= 8);
  } else if (obs.player_sum >= 17) {
    stick = true;
  } else if (obs.player_sum >= 13) {
    stick = dealer >= 2 && dealer <= 6;
  } else if (obs.player_sum == 12) {
    stick = dealer >= 4 && dealer <= 6;
  }
  return ActionId{stick ? envs::BlackjackEnv::kStick : envs::BlackjackEnv::kHit};
}

ActionId connect_four_tactical_move(const envs::ConnectFourObservation& board) {
  if (int c = immediate_win_column(board, envs::Mark::agent); c >= 0) return ActionId{static_cast<std::size_t>(c)};
  if (int c = immediate_win_column(board, envs::Mark::opponent); c >= 0) {
    return ActionId{static_cast<std::size_t>(c)};
  }
  return connect_four_in_order(board, {3, 2, 4, 1, 5, 0, 6});
}

ActionId scripted_choice(ScriptedPolicy policy, const envs::Observation& obs, std::mt19937_64& rng) {
  const std::size_t n = std::visit(
      [](const auto& o) -> std::size_t {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, envs::BlackjackObservation>) return 2;
        if constexpr (std::is_same_v<T, envs::ConnectFourObservation>) return 7;
        return 4;
      },
      obs);

  if (policy == ScriptedPolicy::random || policy == ScriptedPolicy::malformed) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    return ActionId{pick(rng)};
  }

  if (const auto* bj = std::get_if<envs::BlackjackObservation>(&obs)) {
    const ActionId best = blackjack_basic_strategy(*bj);
    switch (policy) {
      case ScriptedPolicy::optimal: return best;
      case ScriptedPolicy::heuristic:
        return ActionId{bj->player_sum >= 17 ? envs::BlackjackEnv::kStick : envs::BlackjackEnv::kHit};
      default: return ActionId{1 - best.value};
    }
  }

  if (const auto* board = std::get_if<envs::ConnectFourObservation>(&obs)) {
    switch (policy) {
      case ScriptedPolicy::optimal: return connect_four_tactical_move(*board);
      case ScriptedPolicy::heuristic: {
        if (int c = immediate_win_column(*board, envs::Mark::agent); c >= 0) {
          return ActionId{static_cast<std::size_t>(c)};
        }
        if (int c = immediate_win_column(*board, envs::Mark::opponent); c >= 0) {
          return ActionId{static_cast<std::size_t>(c)};
        }
        std::vector<std::size_t> legal;
        for (int c = 0; c < envs::ConnectFourObservation::kCols; ++c) {
          if (!envs::column_full(*board, c)) legal.push_back(static_cast<std::size_t>(c));
        }
        if (legal.empty()) return ActionId{0};
        std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
        return ActionId{legal[pick(rng)]};
      }
      default: {
        // Skip the move that would block an opponent win.
        const int block = immediate_win_column(*board, envs::Mark::opponent);
        return connect_four_in_order(*board, {0, 6, 1, 5, 2, 4, 3}, block);
      }
    }
  }

  const auto& snake = std::get<SnakeObservation>(obs);
  switch (policy) {
    case ScriptedPolicy::optimal: return snake_greedy_move(snake);
    case ScriptedPolicy::heuristic: return snake_first_reducing_move(snake);
    default: return snake_adversarial_move(snake);
  }
}

ScriptedBackend::ScriptedBackend(ScriptedPolicy policy, std::uint64_t seed, double latency_seconds)
    : policy_(policy), seed_(seed), latency_seconds_(latency_seconds) {}

TutorReply ScriptedBackend::query(const TutorQuery& query) {
  if (query.observation == nullptr) throw TransportError("scripted tutor needs the observation");
  std::string key = envs::canonical_key(*query.observation);
  key += static_cast<char>(query.attempt & 0xff);
  std::mt19937_64 rng(mix_seed(seed_, key));
  if (policy_ == ScriptedPolicy::malformed) {
    return {"The agent should probably move toward the goal.", latency_seconds_};
  }
  const ActionId action = scripted_choice(policy_, *query.observation, rng);
  return {"<action>" + std::to_string(action.value) + "</action>", latency_seconds_};
}

std::string ScriptedBackend::describe() const { return "scripted:" + to_string(policy_); }

HttpLlmBackend::HttpLlmBackend(std::string base_url, std::string model, double timeout_seconds)
    : base_url_(std::move(base_url)), model_(std::move(model)), timeout_seconds_(timeout_seconds) {
  if (model_.empty()) throw std::invalid_argument("HTTP tutor needs a model name");
  if (timeout_seconds_ <= 0.0) throw std::invalid_argument("HTTP tutor timeout must be positive");
}

std::string HttpLlmBackend::describe() const { return "http:" + model_; }

TutorReply HttpLlmBackend::query(const TutorQuery& query) {
  // Split "http://host:port/prefix" into the origin and an optional path prefix.
  std::string origin = base_url_;
  std::string prefix;
  if (const auto scheme = origin.find("://"); scheme != std::string::npos) {
    if (const auto slash = origin.find('/', scheme + 3); slash != std::string::npos) {
      prefix = origin.substr(slash);
      origin.resize(slash);
    }
  }
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  httplib::Client client(origin);
  if (!client.is_valid()) throw TransportError("invalid tutor URL '" + base_url_ + "'");
  const auto whole = static_cast<time_t>(timeout_seconds_);
  const auto micros = static_cast<time_t>((timeout_seconds_ - static_cast<double>(whole)) * 1e6);
  client.set_connection_timeout(whole, micros);
  client.set_read_timeout(whole, micros);
  client.set_write_timeout(whole, micros);

  const nlohmann::json body{
      {"model", model_},
      {"system", query.system},
      {"prompt", query.prompt},
      {"stream", false},
  };

  const auto start = std::chrono::steady_clock::now();
  auto response = client.Post(prefix + "/api/generate", body.dump(), "application/json");
  const double latency = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!response) {
    const auto error = response.error();
    const std::string what = httplib::to_string(error);
    if (error == httplib::Error::ConnectionTimeout ||
        (error == httplib::Error::Read && latency >= 0.9 * timeout_seconds_)) {
      throw TutorTimeout("tutor request timed out after " + std::to_string(latency) + " s");
    }
    throw TransportError("tutor request failed: " + what);
  }
  if (response->status < 200 || response->status >= 300) {
    throw TransportError("tutor returned HTTP " + std::to_string(response->status));
  }
  const auto parsed = nlohmann::json::parse(response->body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("response") ||
      !parsed["response"].is_string()) {
    throw TransportError("tutor reply is not a generate response");
  }
  return {parsed["response"].get<std::string>(), latency};
}

std::string resolve_llm_url(const std::string& configured) {
  if (const char* env = std::getenv(kLlmUrlVariable); env != nullptr && *env != '\0') return env;
  return configured.empty() ? kDefaultLlmUrl : configured;
}

}  // namespace tutor_rl::tutor
