#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "tutor_rl/envs/types.hpp"
#include "tutor_rl/nn/mlp.hpp"

namespace tutor_rl::agents {

class EmptyRollout : public std::invalid_argument {
 public:
  EmptyRollout() : std::invalid_argument("update called with an empty rollout") {}
};

struct DqnTransition {
  std::vector<double> features;
  std::size_t action = 0;
  double reward = 0.0;
  std::vector<double> next_features;
  bool terminated = false;
  envs::ActionMask next_legal;  // empty = all actions legal
};

// Mean squared TD error over the batch with targets
//   y = r + gamma * max_a' Q_target(s', a') * (1 - terminated),
// the max taken over legal next actions. Gradients w.r.t. `q` are added to
// `grads` when non-null. Calls q.forward(), so `q` is mutated only in its tape.
double dqn_loss(nn::Mlp& q, const nn::Mlp& target, std::span<const DqnTransition* const> batch, double gamma,
                nn::Gradients* grads);

double dqn_target(const nn::Mlp& target, const DqnTransition& t, double gamma);

struct PolicySample {
  std::vector<double> features;
  envs::ActionMask legal;
  std::size_t action = 0;
  double old_log_prob = 0.0;   // PPO only
  double advantage = 0.0;
  double return_target = 0.0;
};

struct LossCoefficients {
  double clip_range = 0.2;  // PPO only
  double value_coef = 0.5;
  double entropy_coef = 0.01;
};

struct LossSummary {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double total = 0.0;
  double clip_fraction = 0.0;
};

// Clipped surrogate: mean of -min(r A, clip(r, 1-eps, 1+eps) A) with
// r = exp(log pi(a|s) - old_log_prob), plus value_coef * mean (V - R)^2 minus
// entropy_coef * mean entropy.
LossSummary ppo_loss(nn::Mlp& actor, nn::Mlp& critic, std::span<const PolicySample* const> batch,
                     const LossCoefficients& coefficients, nn::Gradients* actor_grads,
                     nn::Gradients* critic_grads);

// Single sample clipped objective min(r A, clip(r) A) (to be maximised).
double clipped_surrogate(double ratio, double advantage, double clip_range);

// Actor-critic: -mean(log pi(a|s) A) + value_coef * mean (V - R)^2
// - entropy_coef * mean entropy.
LossSummary a2c_loss(nn::Mlp& actor, nn::Mlp& critic, std::span<const PolicySample* const> batch,
                     const LossCoefficients& coefficients, nn::Gradients* actor_grads,
                     nn::Gradients* critic_grads);

// Discounted n-step returns R_t = r_t + gamma R_{t+1}, R_T = bootstrap_value.
std::vector<double> n_step_returns(std::span<const double> rewards, double bootstrap_value, double gamma);

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

// Generalised advantage estimation. done[t] marks that the episode ended
// after step t; last_value is V of the state following the final step.
GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      std::span<const std::uint8_t> done, double last_value, double gamma, double lambda);

}  // namespace tutor_rl::agents
