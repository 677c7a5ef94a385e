#pragma once

#include <deque>
#include <random>

#include "tutor_rl/envs/environment.hpp"

namespace tutor_rl::envs {

// Infinite-deck blackjack: cards drawn with replacement, dealer stands on 17,
// win/lose/draw pays +1/-1/0, no natural bonus. Actions: 0 stick, 1 hit.
class BlackjackEnv final : public Environment {
 public:
  static constexpr std::size_t kStick = 0;
  static constexpr std::size_t kHit = 1;

  EnvKind kind() const override { return EnvKind::blackjack; }
  std::size_t action_count() const override { return 2; }
  std::vector<std::string> action_names() const override;
  std::string observation_description() const override;

  Observation reset(std::uint64_t seed) override;
  Observation reset() override;
  StepResult step(ActionId action) override;

  std::size_t observation_size() const override { return 3; }
  std::vector<double> encode(const Observation& obs) const override;

  // Test hook: replaces the current hands. Hard sums count aces as 1.
  void force_state(int player_hard_sum, bool player_has_ace, int dealer_showing, int dealer_hidden);

  BlackjackObservation observe() const;

 private:
  struct Hand {
    int hard_sum = 0;
    bool has_ace = false;
    void add(int card);
    bool usable_ace() const { return has_ace && hard_sum + 10 <= 21; }
    int value() const { return usable_ace() ? hard_sum + 10 : hard_sum; }
  };

  int draw_card();

  std::mt19937_64 rng_;
  Hand player_;
  Hand dealer_;
  int dealer_showing_ = 0;
  bool done_ = true;
};

// 6x7 Connect Four against a scripted opponent. The agent always moves first;
// +1 win, -1 loss, 0 draw or intermediate move.
class ConnectFourEnv final : public Environment {
 public:
  explicit ConnectFourEnv(OpponentPolicy opponent = OpponentPolicy::uniform_random);

  EnvKind kind() const override { return EnvKind::connect_four; }
  std::size_t action_count() const override { return ConnectFourObservation::kCols; }
  std::vector<std::string> action_names() const override;
  std::string observation_description() const override;

  Observation reset(std::uint64_t seed) override;
  Observation reset() override;
  StepResult step(ActionId action) override;
  ActionMask legal_actions(const Observation& obs) const override;

  std::size_t observation_size() const override { return 2 * 42; }
  std::vector<double> encode(const Observation& obs) const override;

  const ConnectFourObservation& board() const { return board_; }

 private:
  ConnectFourObservation board_;
  OpponentPolicy opponent_;
  std::mt19937_64 rng_;
  bool done_ = true;
};

// Drops `mark` into `col`; returns the row it landed in or -1 if full.
int drop_token(ConnectFourObservation& board, int col, Mark mark);
bool column_full(const ConnectFourObservation& board, int col);
bool board_full(const ConnectFourObservation& board);
// True when the token at (row, col) is part of a 4-in-line of its mark.
bool wins_through(const ConnectFourObservation& board, int row, int col);
bool has_four(const ConnectFourObservation& board, Mark mark);

// Opponent policy. Uniform: random legal column. Heuristic: win if possible,
// else block the agent's immediate win, else random legal column.
ActionId opponent_move(const ConnectFourObservation& board, std::mt19937_64& rng,
                       OpponentPolicy policy = OpponentPolicy::uniform_random);

// 10x10 snake. Actions: 0 up, 1 down, 2 left, 3 right. +1 per food, -1 on
// death, 0 otherwise; truncated after a run of steps without food.
class SnakeEnv final : public Environment {
 public:
  static constexpr int kInitialLength = 3;

  explicit SnakeEnv(int starvation_limit = 200);

  EnvKind kind() const override { return EnvKind::snake; }
  std::size_t action_count() const override { return 4; }
  std::vector<std::string> action_names() const override;
  std::string observation_description() const override;

  Observation reset(std::uint64_t seed) override;
  Observation reset() override;
  StepResult step(ActionId action) override;

  std::size_t observation_size() const override { return 100 + 4; }
  std::vector<double> encode(const Observation& obs) const override;

  std::size_t length() const { return body_.size(); }
  SnakeObservation observe() const;

  // Test hook: body.front() is the head. Starts a live episode.
  void force_state(std::deque<GridPos> body, GridPos food);

 private:
  void place_food();

  std::mt19937_64 rng_;
  std::deque<GridPos> body_;  // front is the head
  GridPos food_;
  int starvation_limit_;
  int steps_since_food_ = 0;
  bool done_ = true;
};

GridPos snake_move_delta(ActionId action);

}  // namespace tutor_rl::envs
