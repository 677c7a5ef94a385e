#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "tutor_rl/agents/agent.hpp"
#include "tutor_rl/agents/losses.hpp"
#include "tutor_rl/nn/optim.hpp"

namespace tutor_rl::agents {

// Separate actor (logits) and critic (scalar value) networks, sharing nothing.
class ActorCriticBase : public Agent {
 public:
  void rescore(ActionDecision& decision, std::span<const double> features,
               const envs::ActionMask& legal) const override;
  std::vector<const nn::Mlp*> networks() const override { return {&actor_, &critic_}; }
  void restore(std::vector<nn::Mlp> networks) override;

  // Current policy distribution (illegal actions get 0).
  std::vector<double> action_probabilities(std::span<const double> features,
                                           const envs::ActionMask& legal) const;
  double state_value(std::span<const double> features) const;

  const nn::Mlp& actor() const { return actor_; }
  const nn::Mlp& critic() const { return critic_; }
  nn::Mlp& actor() { return actor_; }
  nn::Mlp& critic() { return critic_; }

 protected:
  ActorCriticBase(const NetworkConfig& network, std::size_t observation_size, std::size_t action_count,
                  double learning_rate, std::uint64_t seed);

  ActionDecision policy_action(const StepContext& ctx, bool tutor_active) override;

  // Gradient step on both networks for the given batch.
  LossSummary apply_update(bool clipped, std::span<const PolicySample* const> batch,
                           const LossCoefficients& coefficients, double max_grad_norm);

  nn::Mlp actor_;
  nn::Mlp critic_;
  nn::AdamState actor_adam_;
  nn::AdamState critic_adam_;
  std::mt19937_64 rng_;
};

class PpoAgent final : public ActorCriticBase {
 public:
  PpoAgent(const PpoConfig& config, const NetworkConfig& network, std::size_t observation_size,
           std::size_t action_count, std::uint64_t seed);

  Algorithm algorithm() const override { return Algorithm::ppo; }
  void observe(const Experience& experience) override;

  // Runs the epochs over the collected rollout and clears it.
  LossSummary update(double last_value);
  std::size_t pending() const { return rollout_.size(); }
  const PpoConfig& config() const { return config_; }

 private:
  struct Step {
    std::vector<double> features;
    envs::ActionMask legal;
    std::size_t action;
    double log_prob;
    double value;
    double reward;
    bool done;
  };

  PpoConfig config_;
  std::vector<Step> rollout_;
};

class A2cAgent final : public ActorCriticBase {
 public:
  A2cAgent(const A2cConfig& config, const NetworkConfig& network, std::size_t observation_size,
           std::size_t action_count, std::uint64_t seed);

  Algorithm algorithm() const override { return Algorithm::a2c; }
  void observe(const Experience& experience) override;

  LossSummary update(double bootstrap_value);
  std::size_t pending() const { return rollout_.size(); }
  const A2cConfig& config() const { return config_; }

 private:
  struct Step {
    std::vector<double> features;
    envs::ActionMask legal;
    std::size_t action;
    double value;
    double reward;
  };

  A2cConfig config_;
  std::vector<Step> rollout_;
};

}  // namespace tutor_rl::agents
