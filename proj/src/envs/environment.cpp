#include "tutor_rl/envs/environment.hpp"

#include <sstream>

#include "tutor_rl/envs/games.hpp"

namespace tutor_rl::envs {

namespace {

// Instruction block shared by every transform, ends without a newline.
constexpr const char* kInstruction =
    "Please clarify the current state of the game and determine what\n"
    "the agent should do in this current state. \n"
    "Finally, please suggest the correct action and\n"
    "output its index in the <action></action> tags. \n"
    "Do not provide reasoning.";

// Renders one grid row with every entry right-aligned to the row's widest
// entry, e.g. "[ 0 -1  0]" or "[0 1 0]".
std::string render_row(const std::vector<int>& row) {
  std::size_t width = 1;
  for (int v : row) width = std::max(width, std::to_string(v).size());
  std::string out = "[";
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out += ' ';
    const std::string cell = std::to_string(row[i]);
    out.append(width - cell.size(), ' ');
    out += cell;
  }
  out += ']';
  return out;
}

std::string render_grid(const std::vector<std::vector<int>>& rows) {
  std::string out = "[";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r > 0) out += '\n';
    out += render_row(rows[r]);
  }
  out += "]\n";
  return out;
}

std::string prompt_for(const BlackjackObservation& obs) {
  std::ostringstream out;
  out << "This is the current state of the Blackjack game:\n"
      << "The player's current sum is " << obs.player_sum << ", the dealer is showing "
      << obs.dealer_card << (obs.dealer_card == 1 ? " (an ace)" : "") << ", and the player has "
      << (obs.usable_ace ? "a usable ace" : "no usable ace") << ".\n"
      << kInstruction;
  return out.str();
}

std::string prompt_for(const ConnectFourObservation& obs) {
  std::vector<std::vector<int>> rows;
  for (int r = 0; r < ConnectFourObservation::kRows; ++r) {
    std::vector<int> row;
    for (int c = 0; c < ConnectFourObservation::kCols; ++c) row.push_back(static_cast<int>(obs.at(r, c)));
    rows.push_back(std::move(row));
  }
  std::ostringstream out;
  out << "This is the current board of the Connect Four game (row 0 is the top row):\n"
      << render_grid(rows)
      << "Empty cells are 0, your tokens are 1 and the opponent's tokens are 2.\n"
      << "You play 1 and it is your turn. The columns that still accept a token are: ";
  bool first = true;
  for (int c = 0; c < ConnectFourObservation::kCols; ++c) {
    if (obs.at(0, c) != Mark::empty) continue;
    out << (first ? "" : ", ") << c;
    first = false;
  }
  out << ".\n" << kInstruction;
  return out.str();
}

std::string prompt_for(const SnakeObservation& obs) {
  std::vector<std::vector<int>> rows;
  for (int r = 0; r < SnakeObservation::kSize; ++r) {
    std::vector<int> row;
    for (int c = 0; c < SnakeObservation::kSize; ++c) row.push_back(obs.at(r, c));
    rows.push_back(std::move(row));
  }
  std::ostringstream out;
  out << "This is the current 2D grid of the snake game:\n"
      << render_grid(rows) << "The snake's head is located at row " << obs.head.row << ", column "
      << obs.head.col << ", and the food\nis located at row " << obs.food.row << ", column "
      << obs.food.col << ". The rest of the snake's body\nis represented by -1.\n"
      << kInstruction;
  return out.str();
}

}  // namespace

std::string to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::blackjack: return "blackjack";
    case EnvKind::connect_four: return "connect_four";
    case EnvKind::snake: return "snake";
  }
  return "unknown";
}

EnvKind env_kind_from_string(const std::string& name) {
  if (name == "blackjack") return EnvKind::blackjack;
  if (name == "connect_four") return EnvKind::connect_four;
  if (name == "snake") return EnvKind::snake;
  throw std::invalid_argument("unknown environment '" + name + "'");
}

std::string to_string(OpponentPolicy policy) {
  return policy == OpponentPolicy::heuristic ? "heuristic" : "random";
}

OpponentPolicy opponent_policy_from_string(const std::string& name) {
  if (name == "random") return OpponentPolicy::uniform_random;
  if (name == "heuristic") return OpponentPolicy::heuristic;
  throw std::invalid_argument("unknown opponent policy '" + name + "'");
}

std::string Environment::name() const {
  switch (kind()) {
    case EnvKind::blackjack: return "Blackjack";
    case EnvKind::connect_four: return "Connect Four";
    case EnvKind::snake: return "Snake";
  }
  return "unknown";
}

ActionMask Environment::legal_actions(const Observation& obs) const { return envs::legal_actions(obs); }

std::unique_ptr<Environment> make_environment(EnvKind kind, const EnvOptions& options) {
  switch (kind) {
    case EnvKind::blackjack: return std::make_unique<BlackjackEnv>();
    case EnvKind::connect_four: return std::make_unique<ConnectFourEnv>(options.connect_four_opponent);
    case EnvKind::snake: return std::make_unique<SnakeEnv>(options.snake_starvation_limit);
  }
  throw std::invalid_argument("unknown environment kind");
}

std::size_t action_count(EnvKind kind) {
  switch (kind) {
    case EnvKind::blackjack: return 2;
    case EnvKind::connect_four: return ConnectFourObservation::kCols;
    case EnvKind::snake: return 4;
  }
  return 0;
}

std::string canonical_key(const Observation& obs) {
  struct Visitor {
    std::string operator()(const BlackjackObservation& o) const {
      std::string key = "B";
      key += static_cast<char>(o.player_sum);
      key += static_cast<char>(o.dealer_card);
      key += static_cast<char>(o.usable_ace ? 1 : 0);
      return key;
    }
    std::string operator()(const ConnectFourObservation& o) const {
      std::string key = "C";
      for (Mark m : o.board) key += static_cast<char>(m);
      key += static_cast<char>(o.to_move);
      return key;
    }
    std::string operator()(const SnakeObservation& o) const {
      std::string key = "S";
      for (std::int8_t v : o.grid) key += static_cast<char>(v + 1);
      key += static_cast<char>(o.head.row);
      key += static_cast<char>(o.head.col);
      key += static_cast<char>(o.food.row);
      key += static_cast<char>(o.food.col);
      return key;
    }
  };
  return std::visit(Visitor{}, obs);
}

std::string to_prompt(const Observation& obs) {
  return std::visit([](const auto& o) { return prompt_for(o); }, obs);
}

ActionMask legal_actions(const Observation& obs) {
  if (const auto* board = std::get_if<ConnectFourObservation>(&obs)) {
    ActionMask mask(ConnectFourObservation::kCols, 0);
    for (int c = 0; c < ConnectFourObservation::kCols; ++c) mask[c] = board->at(0, c) == Mark::empty ? 1 : 0;
    return mask;
  }
  const std::size_t n = std::holds_alternative<BlackjackObservation>(obs) ? 2 : 4;
  return ActionMask(n, 1);
}

}  // namespace tutor_rl::envs
