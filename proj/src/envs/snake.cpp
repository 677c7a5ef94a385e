#include <algorithm>

#include "tutor_rl/envs/games.hpp"

namespace tutor_rl::envs {

namespace {
constexpr int kSize = SnakeObservation::kSize;

bool inside(GridPos p) { return p.row >= 0 && p.row < kSize && p.col >= 0 && p.col < kSize; }
}  // namespace

GridPos snake_move_delta(ActionId action) {
  switch (action.value) {
    case 0: return {-1, 0};
    case 1: return {1, 0};
    case 2: return {0, -1};
    case 3: return {0, 1};
    default: throw IllegalAction("snake action out of range");
  }
}

SnakeEnv::SnakeEnv(int starvation_limit) : starvation_limit_(starvation_limit) {}

std::vector<std::string> SnakeEnv::action_names() const { return {"up", "down", "left", "right"}; }

std::string SnakeEnv::observation_description() const {
  return "10x10 grid where 0 is an empty cell, 1 is the food and -1 is a snake cell, together with the "
         "row and column of the snake's head and of the food";
}

Observation SnakeEnv::reset(std::uint64_t seed) {
  rng_.seed(seed);
  return reset();
}

Observation SnakeEnv::reset() {
  std::uniform_int_distribution<int> row(0, kSize - 1);
  std::uniform_int_distribution<int> col(kInitialLength - 1, kSize - 1);
  const GridPos head{row(rng_), col(rng_)};
  body_.clear();
  for (int i = 0; i < kInitialLength; ++i) body_.push_back({head.row, head.col - i});
  place_food();
  steps_since_food_ = 0;
  done_ = false;
  return observe();
}

void SnakeEnv::force_state(std::deque<GridPos> body, GridPos food) {
  body_ = std::move(body);
  food_ = food;
  steps_since_food_ = 0;
  done_ = false;
}

void SnakeEnv::place_food() {
  std::vector<GridPos> free;
  for (int r = 0; r < kSize; ++r) {
    for (int c = 0; c < kSize; ++c) {
      const GridPos p{r, c};
      if (std::find(body_.begin(), body_.end(), p) == body_.end()) free.push_back(p);
    }
  }
  if (free.empty()) return;
  std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
  food_ = free[pick(rng_)];
}

SnakeObservation SnakeEnv::observe() const {
  SnakeObservation obs;
  obs.at(food_.row, food_.col) = SnakeObservation::kFood;
  for (const GridPos& p : body_) obs.at(p.row, p.col) = SnakeObservation::kSnake;
  obs.head = body_.front();
  obs.food = food_;
  return obs;
}

StepResult SnakeEnv::step(ActionId action) {
  if (done_) throw EpisodeFinished();
  const GridPos delta = snake_move_delta(action);
  const GridPos head{body_.front().row + delta.row, body_.front().col + delta.col};

  StepResult result;
  const bool eating = head == food_;
  // The tail vacates its cell this step unless the snake grows.
  const auto body_end = eating ? body_.end() : std::prev(body_.end());
  const bool collided = !inside(head) || std::find(body_.begin(), body_end, head) != body_end;
  if (collided) {
    done_ = true;
    result.reward = -1.0;
    result.terminated = true;
    result.observation = observe();
    return result;
  }

  body_.push_front(head);
  if (eating) {
    result.reward = 1.0;
    steps_since_food_ = 0;
    if (body_.size() == static_cast<std::size_t>(kSize * kSize)) {
      // Board filled, nothing left to eat.
      done_ = true;
      result.terminated = true;
    } else {
      place_food();
    }
  } else {
    body_.pop_back();
    if (++steps_since_food_ >= starvation_limit_) {
      done_ = true;
      result.truncated = true;
    }
  }
  result.observation = observe();
  return result;
}

std::vector<double> SnakeEnv::encode(const Observation& obs) const {
  const auto& o = std::get<SnakeObservation>(obs);
  std::vector<double> out;
  out.reserve(observation_size());
  for (std::int8_t v : o.grid) out.push_back(static_cast<double>(v));
  constexpr double scale = kSize - 1;
  out.push_back(o.head.row / scale);
  out.push_back(o.head.col / scale);
  out.push_back(o.food.row / scale);
  out.push_back(o.food.col / scale);
  return out;
}

}  // namespace tutor_rl::envs
