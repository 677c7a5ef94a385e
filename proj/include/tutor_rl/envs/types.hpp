#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tutor_rl::envs {

// Index into an environment's action dictionary.
struct ActionId {
  std::size_t value = 0;
  friend auto operator<=>(const ActionId&, const ActionId&) = default;
};

enum class EnvKind { blackjack, connect_four, snake };

std::string to_string(EnvKind kind);
EnvKind env_kind_from_string(const std::string& name);

struct BlackjackObservation {
  int player_sum = 0;    // 4..31
  int dealer_card = 0;   // 1..10, 1 is an ace
  bool usable_ace = false;
  friend bool operator==(const BlackjackObservation&, const BlackjackObservation&) = default;
};

enum class Mark : std::uint8_t { empty = 0, agent = 1, opponent = 2 };

struct ConnectFourObservation {
  static constexpr int kRows = 6;
  static constexpr int kCols = 7;
  // Row 0 is the top row.
  std::array<Mark, kRows * kCols> board{};
  Mark to_move = Mark::agent;

  Mark at(int row, int col) const { return board[static_cast<std::size_t>(row * kCols + col)]; }
  Mark& at(int row, int col) { return board[static_cast<std::size_t>(row * kCols + col)]; }
  friend bool operator==(const ConnectFourObservation&, const ConnectFourObservation&) = default;
};

struct GridPos {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const GridPos&, const GridPos&) = default;
};

struct SnakeObservation {
  static constexpr int kSize = 10;
  static constexpr std::int8_t kEmpty = 0;
  static constexpr std::int8_t kFood = 1;
  static constexpr std::int8_t kSnake = -1;
  std::array<std::int8_t, kSize * kSize> grid{};
  GridPos head;
  GridPos food;

  std::int8_t at(int row, int col) const { return grid[static_cast<std::size_t>(row * kSize + col)]; }
  std::int8_t& at(int row, int col) { return grid[static_cast<std::size_t>(row * kSize + col)]; }
  friend bool operator==(const SnakeObservation&, const SnakeObservation&) = default;
};

using Observation = std::variant<BlackjackObservation, ConnectFourObservation, SnakeObservation>;

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
};

// 1 = legal, 0 = not applicable in the current state.
using ActionMask = std::vector<std::uint8_t>;

class IllegalAction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EpisodeFinished : public std::logic_error {
 public:
  EpisodeFinished() : std::logic_error("step() after the episode ended; call reset() first") {}
};

}  // namespace tutor_rl::envs
