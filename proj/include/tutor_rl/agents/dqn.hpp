#pragma once

#include <cstddef>
#include <random>
#include <stdexcept>
#include <vector>

#include "tutor_rl/agents/agent.hpp"
#include "tutor_rl/agents/losses.hpp"
#include "tutor_rl/nn/optim.hpp"

namespace tutor_rl::agents {

class BufferTooSmall : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Fixed-capacity ring of transitions; the oldest entry is overwritten first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(DqnTransition transition);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const DqnTransition& operator[](std::size_t i) const { return items_[i]; }

  // Uniform sampling with replacement.
  std::vector<const DqnTransition*> sample(std::size_t count, std::mt19937_64& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<DqnTransition> items_;
};

class DqnAgent final : public Agent {
 public:
  DqnAgent(const DqnConfig& config, const NetworkConfig& network, std::size_t observation_size,
           std::size_t action_count, std::int64_t decay_steps, std::uint64_t seed);

  Algorithm algorithm() const override { return Algorithm::dqn; }
  void rescore(ActionDecision&, std::span<const double>, const envs::ActionMask&) const override {}
  void observe(const Experience& experience) override;
  std::vector<const nn::Mlp*> networks() const override { return {&q_net_, &target_net_}; }
  void restore(std::vector<nn::Mlp> networks) override;

  // One minibatch step on the TD loss; returns the loss before the step.
  double update();

  double epsilon() const;
  const ReplayBuffer& replay() const { return replay_; }
  const nn::Mlp& q_net() const { return q_net_; }
  nn::Mlp& q_net() { return q_net_; }
  const nn::Mlp& target_net() const { return target_net_; }
  const DqnConfig& config() const { return config_; }

 protected:
  ActionDecision policy_action(const StepContext& ctx, bool tutor_active) override;

 private:
  DqnConfig config_;
  nn::Mlp q_net_;
  nn::Mlp target_net_;
  nn::AdamState adam_;
  ReplayBuffer replay_;
  std::mt19937_64 rng_;
  std::int64_t decay_steps_;
  std::int64_t steps_ = 0;
};

}  // namespace tutor_rl::agents
