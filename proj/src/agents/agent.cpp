#include "tutor_rl/agents/agent.hpp"

#include <stdexcept>

#include "tutor_rl/agents/actor_critic.hpp"
#include "tutor_rl/agents/dqn.hpp"

namespace tutor_rl::agents {

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::dqn: return "dqn";
    case Algorithm::ppo: return "ppo";
    case Algorithm::a2c: return "a2c";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "dqn") return Algorithm::dqn;
  if (name == "ppo") return Algorithm::ppo;
  if (name == "a2c") return Algorithm::a2c;
  throw std::invalid_argument("unknown algorithm '" + name + "' (expected dqn, ppo or a2c)");
}

std::string to_string(DecisionSource source) {
  switch (source) {
    case DecisionSource::policy: return "policy";
    case DecisionSource::tutor_fresh: return "tutor_fresh";
    case DecisionSource::tutor_reused: return "tutor_reused";
    case DecisionSource::random_fallback: return "random_fallback";
  }
  return "unknown";
}

namespace {

DecisionSource from_advice(tutor::AdviceSource source) {
  switch (source) {
    case tutor::AdviceSource::tutor_fresh: return DecisionSource::tutor_fresh;
    case tutor::AdviceSource::tutor_reused: return DecisionSource::tutor_reused;
    case tutor::AdviceSource::random_fallback: return DecisionSource::random_fallback;
  }
  return DecisionSource::random_fallback;
}

}  // namespace

ActionDecision Agent::select_action(const StepContext& ctx, tutor::TutorGate* gate) {
  const bool tutor_active = gate != nullptr && gate->enabled();
  if (tutor_active) {
    if (const auto advice = gate->maybe_advise(ctx.env, ctx.observation)) {
      ActionDecision decision{advice->action, from_advice(advice->source)};
      rescore(decision, ctx.features, ctx.legal);
      return decision;
    }
  }
  return policy_action(ctx, tutor_active);
}

std::unique_ptr<Agent> make_agent(const AgentConfig& config, std::size_t observation_size,
                                  std::size_t action_count, std::int64_t decay_steps, std::uint64_t seed) {
  switch (config.algorithm) {
    case Algorithm::dqn:
      return std::make_unique<DqnAgent>(config.dqn, config.network, observation_size, action_count, decay_steps,
                                        seed);
    case Algorithm::ppo:
      return std::make_unique<PpoAgent>(config.ppo, config.network, observation_size, action_count, seed);
    case Algorithm::a2c:
      return std::make_unique<A2cAgent>(config.a2c, config.network, observation_size, action_count, seed);
  }
  throw std::invalid_argument("unknown algorithm");
}

std::vector<std::size_t> layer_dims(std::size_t in, const NetworkConfig& net, std::size_t out) {
  std::vector<std::size_t> dims{in};
  dims.insert(dims.end(), net.hidden.begin(), net.hidden.end());
  dims.push_back(out);
  return dims;
}

std::size_t masked_argmax(std::span<const double> values, const envs::ActionMask& legal) {
  std::size_t best = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!legal.empty() && !legal[i]) continue;
    if (best == values.size() || values[i] > values[best]) best = i;
  }
  if (best == values.size()) throw std::logic_error("no legal action available");
  return best;
}

envs::ActionId uniform_legal(const envs::ActionMask& legal, std::mt19937_64& rng) {
  std::vector<std::size_t> options;
  for (std::size_t i = 0; i < legal.size(); ++i) {
    if (legal[i]) options.push_back(i);
  }
  if (options.empty()) throw std::logic_error("no legal action available");
  std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
  return envs::ActionId{options[pick(rng)]};
}

}  // namespace tutor_rl::agents
