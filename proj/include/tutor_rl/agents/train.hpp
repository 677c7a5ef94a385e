#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tutor_rl/agents/agent.hpp"

namespace tutor_rl::agents {

struct DecisionCounts {
  std::uint64_t policy = 0;
  std::uint64_t tutor_fresh = 0;
  std::uint64_t tutor_reused = 0;
  std::uint64_t random_fallback = 0;
  std::uint64_t inapplicable = 0;  // advised actions the environment rejected
};

struct TrainingLog {
  std::vector<double> episode_returns;
  std::vector<std::int64_t> episode_end_steps;  // env steps completed when each episode ended
  std::int64_t steps = 0;
  DecisionCounts decisions;

  // Per-step performance series: at step s, the return of the latest episode
  // finished at or before s (0 before the first one).
  std::vector<double> step_curve() const;
};

struct TrainOptions {
  // Called after every executed action.
  std::function<void(std::int64_t step, const ActionDecision&, const Experience&)> on_step;
};

// Runs `total_steps` environment steps. The gate (may be null) is advanced
// once per step. The environment is reset with `seed` first, then continues
// its own random stream across episodes.
TrainingLog train(Agent& agent, envs::Environment& env, tutor::TutorGate* gate, std::int64_t total_steps,
                  std::uint64_t seed, const TrainOptions& options = {});

}  // namespace tutor_rl::agents
