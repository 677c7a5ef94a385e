#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tutor_rl/agents/config.hpp"
#include "tutor_rl/envs/environment.hpp"
#include "tutor_rl/nn/mlp.hpp"
#include "tutor_rl/tutor/gate.hpp"

namespace tutor_rl::agents {

enum class DecisionSource { policy, tutor_fresh, tutor_reused, random_fallback };

std::string to_string(DecisionSource source);

struct ActionDecision {
  envs::ActionId action;
  DecisionSource source = DecisionSource::policy;
  // Actor-critic agents only: log pi(action | s) and V(s) under the current
  // networks, whoever picked the action. NaN for DQN.
  double log_prob = std::numeric_limits<double>::quiet_NaN();
  double value = std::numeric_limits<double>::quiet_NaN();
};

// Everything an agent may look at when choosing an action.
struct StepContext {
  const envs::Environment& env;
  const envs::Observation& observation;
  std::span<const double> features;
  const envs::ActionMask& legal;
};

struct Experience {
  std::vector<double> features;
  envs::ActionMask legal;
  ActionDecision decision;  // decision.action is the action actually executed
  double reward = 0.0;
  std::vector<double> next_features;
  envs::ActionMask next_legal;
  bool terminated = false;
  bool truncated = false;
};

class Agent {
 public:
  virtual ~Agent() = default;

  virtual Algorithm algorithm() const = 0;

  // One engagement draw per call: the tutor answers when the gate fires,
  // otherwise the agent's own policy does.
  ActionDecision select_action(const StepContext& ctx, tutor::TutorGate* gate);

  // Refreshes log_prob/value after the action was chosen outside the policy.
  virtual void rescore(ActionDecision& decision, std::span<const double> features,
                       const envs::ActionMask& legal) const = 0;

  // Feeds one transition; may run one or more updates.
  virtual void observe(const Experience& experience) = 0;

  virtual std::vector<const nn::Mlp*> networks() const = 0;
  virtual void restore(std::vector<nn::Mlp> networks) = 0;

  std::uint64_t update_count() const { return updates_; }

 protected:
  virtual ActionDecision policy_action(const StepContext& ctx, bool tutor_active) = 0;

  std::uint64_t updates_ = 0;
};

std::unique_ptr<Agent> make_agent(const AgentConfig& config, std::size_t observation_size,
                                  std::size_t action_count, std::int64_t decay_steps, std::uint64_t seed);

// Network dims [in, hidden..., out].
std::vector<std::size_t> layer_dims(std::size_t in, const NetworkConfig& net, std::size_t out);

// argmax over legal entries; ties go to the lowest index.
std::size_t masked_argmax(std::span<const double> values, const envs::ActionMask& legal);

// Uniform draw among legal actions.
envs::ActionId uniform_legal(const envs::ActionMask& legal, std::mt19937_64& rng);

}  // namespace tutor_rl::agents
