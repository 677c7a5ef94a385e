#include <array>
#include <string>

#include "tutor_rl/envs/games.hpp"

namespace tutor_rl::envs {

namespace {
constexpr int kRows = ConnectFourObservation::kRows;
constexpr int kCols = ConnectFourObservation::kCols;

std::vector<int> legal_columns(const ConnectFourObservation& board) {
  std::vector<int> cols;
  for (int c = 0; c < kCols; ++c) {
    if (!column_full(board, c)) cols.push_back(c);
  }
  return cols;
}

// Column where `mark` completes four immediately, or -1.
int winning_column(const ConnectFourObservation& board, Mark mark) {
  for (int c = 0; c < kCols; ++c) {
    ConnectFourObservation trial = board;
    const int row = drop_token(trial, c, mark);
    if (row >= 0 && wins_through(trial, row, c)) return c;
  }
  return -1;
}
}  // namespace

int drop_token(ConnectFourObservation& board, int col, Mark mark) {
  if (col < 0 || col >= kCols) return -1;
  for (int r = kRows - 1; r >= 0; --r) {
    if (board.at(r, col) == Mark::empty) {
      board.at(r, col) = mark;
      return r;
    }
  }
  return -1;
}

bool column_full(const ConnectFourObservation& board, int col) { return board.at(0, col) != Mark::empty; }

bool board_full(const ConnectFourObservation& board) {
  for (int c = 0; c < kCols; ++c) {
    if (!column_full(board, c)) return false;
  }
  return true;
}

bool wins_through(const ConnectFourObservation& board, int row, int col) {
  const Mark mark = board.at(row, col);
  if (mark == Mark::empty) return false;
  constexpr std::array<std::array<int, 2>, 4> directions{{{0, 1}, {1, 0}, {1, 1}, {1, -1}}};
  for (const auto& [dr, dc] : directions) {
    int run = 1;
    for (int sign : {1, -1}) {
      int r = row + sign * dr;
      int c = col + sign * dc;
      while (r >= 0 && r < kRows && c >= 0 && c < kCols && board.at(r, c) == mark) {
        ++run;
        r += sign * dr;
        c += sign * dc;
      }
    }
    if (run >= 4) return true;
  }
  return false;
}

bool has_four(const ConnectFourObservation& board, Mark mark) {
  for (int r = 0; r < kRows; ++r) {
    for (int c = 0; c < kCols; ++c) {
      if (board.at(r, c) == mark && wins_through(board, r, c)) return true;
    }
  }
  return false;
}

ActionId opponent_move(const ConnectFourObservation& board, std::mt19937_64& rng, OpponentPolicy policy) {
  const std::vector<int> legal = legal_columns(board);
  if (legal.empty()) throw IllegalAction("opponent has no legal column");
  if (policy == OpponentPolicy::heuristic) {
    if (int c = winning_column(board, Mark::opponent); c >= 0) return ActionId{static_cast<std::size_t>(c)};
    if (int c = winning_column(board, Mark::agent); c >= 0) return ActionId{static_cast<std::size_t>(c)};
  }
  std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
  return ActionId{static_cast<std::size_t>(legal[pick(rng)])};
}

ConnectFourEnv::ConnectFourEnv(OpponentPolicy opponent) : opponent_(opponent) {}

std::vector<std::string> ConnectFourEnv::action_names() const {
  std::vector<std::string> names;
  for (int c = 0; c < kCols; ++c) names.push_back("drop a token in column " + std::to_string(c));
  return names;
}

std::string ConnectFourEnv::observation_description() const {
  return "6x7 board (row 0 is the top row) where 0 is an empty cell, 1 is the agent's token and 2 is "
         "the opponent's token";
}

Observation ConnectFourEnv::reset(std::uint64_t seed) {
  rng_.seed(seed);
  return reset();
}

Observation ConnectFourEnv::reset() {
  board_ = ConnectFourObservation{};
  board_.to_move = Mark::agent;
  done_ = false;
  return board_;
}

ActionMask ConnectFourEnv::legal_actions(const Observation& obs) const { return envs::legal_actions(obs); }

StepResult ConnectFourEnv::step(ActionId action) {
  if (done_) throw EpisodeFinished();
  const int col = static_cast<int>(action.value);
  if (action.value >= static_cast<std::size_t>(kCols)) throw IllegalAction("column out of range");
  if (column_full(board_, col)) throw IllegalAction("column " + std::to_string(col) + " is full");

  StepResult result;
  const int row = drop_token(board_, col, Mark::agent);
  if (wins_through(board_, row, col)) {
    result.reward = 1.0;
    result.terminated = true;
  } else if (board_full(board_)) {
    result.terminated = true;
  } else {
    const int reply = static_cast<int>(opponent_move(board_, rng_, opponent_).value);
    const int reply_row = drop_token(board_, reply, Mark::opponent);
    if (wins_through(board_, reply_row, reply)) {
      result.reward = -1.0;
      result.terminated = true;
    } else if (board_full(board_)) {
      result.terminated = true;
    }
  }
  done_ = result.terminated;
  board_.to_move = Mark::agent;
  result.observation = board_;
  return result;
}

std::vector<double> ConnectFourEnv::encode(const Observation& obs) const {
  const auto& board = std::get<ConnectFourObservation>(obs);
  std::vector<double> out(2 * board.board.size(), 0.0);
  for (std::size_t i = 0; i < board.board.size(); ++i) {
    if (board.board[i] == Mark::agent) out[i] = 1.0;
    if (board.board[i] == Mark::opponent) out[board.board.size() + i] = 1.0;
  }
  return out;
}

}  // namespace tutor_rl::envs
