#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "tutor_rl/envs/environment.hpp"
#include "tutor_rl/envs/games.hpp"

using namespace tutor_rl::envs;

namespace {

// Probability that a dealer starting from (hard, ace) finishes on exactly
// `target`, standing on 17 including soft 17. Infinite deck: ranks 10..K share
// the value 10.
double dealer_finishes_on(int hard, bool ace, int target) {
  const int value = ace && hard + 10 <= 21 ? hard + 10 : hard;
  if (value >= 17) return value == target ? 1.0 : 0.0;
  double p = 0.0;
  for (int card = 1; card <= 10; ++card) {
    const double w = card == 10 ? 4.0 / 13.0 : 1.0 / 13.0;
    p += w * dealer_finishes_on(hard + card, ace || card == 1, target);
  }
  return p;
}

// Independent four-in-a-row scan over every window.
bool brute_force_four(const ConnectFourObservation& b, Mark m) {
  const int R = ConnectFourObservation::kRows, C = ConnectFourObservation::kCols;
  const int dirs[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
  for (int r = 0; r < R; ++r) {
    for (int c = 0; c < C; ++c) {
      for (const auto& d : dirs) {
        int k = 0;
        for (; k < 4; ++k) {
          const int rr = r + k * d[0], cc = c + k * d[1];
          if (rr < 0 || rr >= R || cc < 0 || cc >= C || b.at(rr, cc) != m) break;
        }
        if (k == 4) return true;
      }
    }
  }
  return false;
}

}  // namespace

TEST_CASE("snake prompt renders the documented example byte for byte") {
  SnakeEnv env;
  env.reset(1);
  env.force_state({{4, 5}, {5, 5}, {5, 4}, {5, 3}}, {1, 4});
  const std::string expected =
      "This is the current 2D grid of the snake game:\n"
      "[[0 0 0 0 0 0 0 0 0 0]\n"
      "[0 0 0 0 1 0 0 0 0 0]\n"
      "[0 0 0 0 0 0 0 0 0 0]\n"
      "[0 0 0 0 0 0 0 0 0 0]\n"
      "[ 0  0  0  0  0 -1  0  0  0  0]\n"
      "[ 0  0  0 -1 -1 -1  0  0  0  0]\n"
      "[0 0 0 0 0 0 0 0 0 0]\n"
      "[0 0 0 0 0 0 0 0 0 0]\n"
      "[0 0 0 0 0 0 0 0 0 0]\n"
      "[0 0 0 0 0 0 0 0 0 0]]\n"
      "The snake's head is located at row 4, column 5, and the food\n"
      "is located at row 1, column 4. The rest of the snake's body\n"
      "is represented by -1.\n"
      "Please clarify the current state of the game and determine what\n"
      "the agent should do in this current state. \n"
      "Finally, please suggest the correct action and\n"
      "output its index in the <action></action> tags. \n"
      "Do not provide reasoning.";
  CHECK(to_prompt(env.observe()) == expected);
}

TEST_CASE("blackjack and connect four prompts carry the state") {
  const std::string bj = to_prompt(BlackjackObservation{14, 10, false});
  CHECK(bj.find("sum is 14") != std::string::npos);
  CHECK(bj.find("showing 10") != std::string::npos);
  CHECK(bj.find("no usable ace") != std::string::npos);
  CHECK(bj.find("<action></action>") != std::string::npos);

  const std::string c4 = to_prompt(ConnectFourObservation{});
  std::size_t rows = 0;
  for (std::size_t pos = 0; (pos = c4.find("0 0 0 0 0 0 0]", pos)) != std::string::npos; ++pos) ++rows;
  CHECK(rows == 6);
  CHECK(c4.find("0, 1, 2, 3, 4, 5, 6.") != std::string::npos);
}

TEST_CASE("action counts") {
  CHECK(action_count(EnvKind::blackjack) == 2);
  CHECK(action_count(EnvKind::connect_four) == 7);
  CHECK(action_count(EnvKind::snake) == 4);
  for (auto kind : {EnvKind::blackjack, EnvKind::connect_four, EnvKind::snake}) {
    auto env = make_environment(kind);
    CHECK(env->action_count() == action_count(kind));
    CHECK(env->action_names().size() == action_count(kind));
    CHECK(env_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(env_kind_from_string("pong"), std::invalid_argument);
}

TEST_CASE("blackjack standing on 21 matches the enumerated dealer distribution") {
  const double p_push = dealer_finishes_on(16, false, 21);
  BlackjackEnv env;
  const int trials = 20000;
  int pushes = 0;
  for (int i = 0; i < trials; ++i) {
    env.reset(static_cast<std::uint64_t>(i) + 1000);
    env.force_state(11, true, 6, 10);  // soft 21 against 6 + hidden 10
    const StepResult r = env.step({BlackjackEnv::kStick});
    REQUIRE(r.terminated);
    REQUIRE((r.reward == 1.0 || r.reward == 0.0));
    if (r.reward == 0.0) ++pushes;
  }
  const double freq = static_cast<double>(pushes) / trials;
  const double sigma = std::sqrt(p_push * (1 - p_push) / trials);
  CHECK(std::abs(freq - p_push) < 4 * sigma);
}

TEST_CASE("blackjack hit with a usable ace never busts") {
  BlackjackEnv env;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    env.reset(rng());
    const int hard = 2 + static_cast<int>(rng() % 10);  // 2..11 keeps the ace usable
    env.force_state(hard, true, 1 + static_cast<int>(rng() % 10), 1 + static_cast<int>(rng() % 10));
    REQUIRE(env.observe().usable_ace);
    const StepResult r = env.step({BlackjackEnv::kHit});
    CHECK_FALSE(r.terminated);
    CHECK(r.reward == 0.0);
  }
}

TEST_CASE("blackjack busting and stepping after the end") {
  BlackjackEnv env;
  env.reset(5);
  env.force_state(21, false, 10, 7);
  const StepResult r = env.step({BlackjackEnv::kHit});
  CHECK(r.terminated);
  CHECK(r.reward == -1.0);
  CHECK_THROWS_AS(env.step({BlackjackEnv::kStick}), EpisodeFinished);
}

TEST_CASE("environments are deterministic under a seed") {
  for (auto kind : {EnvKind::blackjack, EnvKind::connect_four, EnvKind::snake}) {
    auto a = make_environment(kind);
    auto b = make_environment(kind);
    for (std::uint64_t seed : {1u, 2u, 99u}) {
      Observation oa = a->reset(seed), ob = b->reset(seed);
      std::mt19937_64 actions(seed);
      for (int t = 0; t < 300; ++t) {
        REQUIRE(oa == ob);
        const ActionMask legal = a->legal_actions(oa);
        std::vector<std::size_t> choices;
        for (std::size_t i = 0; i < legal.size(); ++i) {
          if (legal[i]) choices.push_back(i);
        }
        const ActionId act{choices[actions() % choices.size()]};
        const StepResult ra = a->step(act), rb = b->step(act);
        REQUIRE(ra.reward == rb.reward);
        REQUIRE(ra.terminated == rb.terminated);
        REQUIRE(ra.truncated == rb.truncated);
        oa = ra.observation;
        ob = rb.observation;
        if (ra.terminated || ra.truncated) {
          oa = a->reset();
          ob = b->reset();
        }
      }
    }
  }
}

TEST_CASE("canonical keys are injective over all blackjack observations") {
  std::set<std::string> keys;
  std::size_t count = 0;
  for (int sum = 4; sum <= 31; ++sum) {
    for (int dealer = 1; dealer <= 10; ++dealer) {
      for (bool ace : {false, true}) {
        keys.insert(canonical_key(BlackjackObservation{sum, dealer, ace}));
        ++count;
      }
    }
  }
  CHECK(keys.size() == count);
}

TEST_CASE("canonical keys separate distinct sampled states") {
  for (auto kind : {EnvKind::connect_four, EnvKind::snake}) {
    auto env = make_environment(kind);
    std::map<std::string, Observation> seen;
    std::mt19937_64 rng(11);
    Observation obs = env->reset(11);
    for (int t = 0; t < 5000; ++t) {
      const std::string key = canonical_key(obs);
      auto [it, inserted] = seen.emplace(key, obs);
      if (!inserted) REQUIRE(it->second == obs);
      const ActionMask legal = env->legal_actions(obs);
      std::vector<std::size_t> choices;
      for (std::size_t i = 0; i < legal.size(); ++i) {
        if (legal[i]) choices.push_back(i);
      }
      const StepResult r = env->step({choices[rng() % choices.size()]});
      obs = (r.terminated || r.truncated) ? env->reset() : r.observation;
    }
    CHECK(seen.size() > 100);
  }
  // Keys also differ across games.
  CHECK(canonical_key(BlackjackObservation{}) != canonical_key(SnakeObservation{}));
}

TEST_CASE("connect four gravity and full columns") {
  ConnectFourEnv env;
  env.reset(7);
  for (int i = 0; i < 3; ++i) {
    const StepResult r = env.step({3});
    if (r.terminated) break;
  }
  const auto& b = env.board();
  // Every token sits on the floor or on another token.
  for (int c = 0; c < 7; ++c) {
    for (int r = 0; r + 1 < 6; ++r) {
      if (b.at(r, c) != Mark::empty) CHECK(b.at(r + 1, c) != Mark::empty);
    }
  }
  CHECK(b.at(5, 3) == Mark::agent);

  ConnectFourObservation board;
  for (int i = 0; i < 6; ++i) CHECK(drop_token(board, 0, i % 2 ? Mark::agent : Mark::opponent) == 5 - i);
  CHECK(column_full(board, 0));
  CHECK(drop_token(board, 0, Mark::agent) == -1);
  CHECK(legal_actions(Observation{board})[0] == 0);

  // Fill column 0 through the environment and try once more.
  ConnectFourEnv env2(OpponentPolicy::uniform_random);
  std::mt19937_64 rng(1);
  bool tested = false;
  for (std::uint64_t seed = 1; seed < 200 && !tested; ++seed) {
    env2.reset(seed);
    bool done = false;
    while (!done && !column_full(env2.board(), 0)) done = env2.step({0}).terminated;
    if (!done) {
      CHECK_THROWS_AS(env2.step({0}), IllegalAction);
      tested = true;
    }
  }
  CHECK(tested);
  CHECK_THROWS_AS(env2.step({7}), IllegalAction);
}

TEST_CASE("connect four win detection agrees with a window scan") {
  std::mt19937_64 rng(21);
  for (int game = 0; game < 400; ++game) {
    ConnectFourObservation b;
    Mark m = Mark::agent;
    while (!board_full(b)) {
      int col;
      do col = static_cast<int>(rng() % 7);
      while (column_full(b, col));
      drop_token(b, col, m);
      REQUIRE(has_four(b, Mark::agent) == brute_force_four(b, Mark::agent));
      REQUIRE(has_four(b, Mark::opponent) == brute_force_four(b, Mark::opponent));
      if (has_four(b, Mark::agent) || has_four(b, Mark::opponent)) break;
      m = m == Mark::agent ? Mark::opponent : Mark::agent;
    }
  }
}

TEST_CASE("heuristic opponent takes wins and blocks") {
  std::mt19937_64 rng(1);
  ConnectFourObservation win;
  for (int c = 0; c < 3; ++c) drop_token(win, c, Mark::opponent);
  drop_token(win, 6, Mark::agent);
  CHECK(opponent_move(win, rng, OpponentPolicy::heuristic).value == 3);

  ConnectFourObservation block;
  for (int c = 1; c < 4; ++c) drop_token(block, c, Mark::agent);
  drop_token(block, 6, Mark::opponent);
  const auto reply = opponent_move(block, rng, OpponentPolicy::heuristic).value;
  CHECK((reply == 0 || reply == 4));

  ConnectFourObservation full;
  for (int c = 0; c < 7; ++c) {
    for (int r = 0; r < 6; ++r) drop_token(full, c, (r + c / 2) % 2 ? Mark::agent : Mark::opponent);
  }
  CHECK_THROWS_AS(opponent_move(full, rng), IllegalAction);
}

TEST_CASE("connect four agent win ends the episode with +1") {
  ConnectFourEnv env(OpponentPolicy::uniform_random);
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    env.reset(seed);
    // Stack column 0 repeatedly; any +1 must come from a real four.
    for (int t = 0; t < 21; ++t) {
      const auto& b = env.board();
      int col = 0;
      while (column_full(b, col)) ++col;
      const StepResult r = env.step({static_cast<std::size_t>(col)});
      if (r.terminated) {
        const auto& board = std::get<ConnectFourObservation>(r.observation);
        if (r.reward == 1.0) {
          ++wins;
          CHECK(brute_force_four(board, Mark::agent));
        } else if (r.reward == -1.0) {
          CHECK(brute_force_four(board, Mark::opponent));
        } else {
          CHECK(board_full(board));
        }
        break;
      }
    }
  }
  CHECK(wins > 0);
}

TEST_CASE("snake eats, grows and respawns food") {
  SnakeEnv env;
  env.reset(3);
  env.force_state({{4, 5}, {4, 4}, {4, 3}}, {3, 5});
  const StepResult r = env.step({0});
  CHECK(r.reward == 1.0);
  CHECK_FALSE(r.terminated);
  CHECK(env.length() == 4);
  const auto& obs = std::get<SnakeObservation>(r.observation);
  CHECK(obs.head == GridPos{3, 5});
  CHECK(obs.at(obs.food.row, obs.food.col) == SnakeObservation::kFood);
}

TEST_CASE("snake wall and self collisions end the episode") {
  SnakeEnv env;
  env.reset(3);
  env.force_state({{0, 5}, {0, 4}, {0, 3}}, {9, 9});
  StepResult r = env.step({0});
  CHECK(r.terminated);
  CHECK(r.reward == -1.0);
  CHECK_THROWS_AS(env.step({0}), EpisodeFinished);

  env.reset(3);
  env.force_state({{4, 5}, {4, 4}, {4, 3}}, {9, 9});
  r = env.step({2});  // reverse into the neck
  CHECK(r.terminated);
  CHECK(r.reward == -1.0);

  // Chasing the tail is legal because the tail moves away.
  env.reset(3);
  env.force_state({{5, 5}, {5, 4}, {6, 4}, {6, 5}}, {0, 0});
  r = env.step({1});
  CHECK_FALSE(r.terminated);
}

TEST_CASE("snake starvation truncates") {
  SnakeEnv env(200);
  env.reset(4);
  env.force_state({{5, 5}, {5, 4}, {5, 3}}, {0, 0});
  const std::size_t loop[4] = {1, 2, 0, 3};  // down, left, up, right
  StepResult r;
  for (int t = 0; t < 200; ++t) {
    r = env.step({loop[t % 4]});
    REQUIRE_FALSE(r.terminated);
    if (t < 199) REQUIRE_FALSE(r.truncated);
  }
  CHECK(r.truncated);
  CHECK(r.reward == 0.0);
}

TEST_CASE("snake random rollouts keep the invariants") {
  SnakeEnv env;
  std::mt19937_64 rng(8);
  Observation obs = env.reset(8);
  for (int t = 0; t < 3000; ++t) {
    const auto& s = std::get<SnakeObservation>(obs);
    int snake_cells = 0, food_cells = 0;
    for (auto v : s.grid) {
      snake_cells += v == SnakeObservation::kSnake;
      food_cells += v == SnakeObservation::kFood;
    }
    REQUIRE(snake_cells == static_cast<int>(env.length()));
    REQUIRE(food_cells == 1);
    REQUIRE(s.at(s.head.row, s.head.col) == SnakeObservation::kSnake);
    const StepResult r = env.step({rng() % 4});
    obs = (r.terminated || r.truncated) ? env.reset() : r.observation;
  }
  CHECK_THROWS_AS(snake_move_delta({4}), IllegalAction);
}
