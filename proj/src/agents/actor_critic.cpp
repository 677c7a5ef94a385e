#include "tutor_rl/agents/actor_critic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tutor_rl::agents {

namespace {

double safe_log(double p) { return std::log(std::max(p, std::numeric_limits<double>::min())); }

bool same_dims(const nn::Mlp& a, const nn::Mlp& b) {
  return std::equal(a.dims().begin(), a.dims().end(), b.dims().begin(), b.dims().end());
}

void normalize(std::span<PolicySample> samples) {
  if (samples.size() < 2) return;
  double mean = 0.0;
  for (const auto& s : samples) mean += s.advantage;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (const auto& s : samples) var += (s.advantage - mean) * (s.advantage - mean);
  const double stddev = std::sqrt(var / static_cast<double>(samples.size()));
  for (auto& s : samples) s.advantage = (s.advantage - mean) / (stddev + 1e-8);
}

}  // namespace

ActorCriticBase::ActorCriticBase(const NetworkConfig& network, std::size_t observation_size,
                                 std::size_t action_count, double learning_rate, std::uint64_t seed)
    : actor_(layer_dims(observation_size, network, action_count), network.activation, seed),
      critic_(layer_dims(observation_size, network, 1), network.activation, seed + 1),
      actor_adam_(nn::AdamState::for_parameters(actor_.parameter_count(), learning_rate)),
      critic_adam_(nn::AdamState::for_parameters(critic_.parameter_count(), learning_rate)),
      rng_(seed ^ 0x9e3779b97f4a7c15ULL) {}

std::vector<double> ActorCriticBase::action_probabilities(std::span<const double> features,
                                                          const envs::ActionMask& legal) const {
  const std::vector<double> logits = actor_.predict(features);
  if (legal.empty()) return nn::softmax(logits);
  return nn::masked_softmax(logits, legal);
}

double ActorCriticBase::state_value(std::span<const double> features) const {
  return critic_.predict(features)[0];
}

void ActorCriticBase::rescore(ActionDecision& decision, std::span<const double> features,
                              const envs::ActionMask& legal) const {
  const std::vector<double> probs = action_probabilities(features, legal);
  decision.log_prob = safe_log(probs.at(decision.action.value));
  decision.value = state_value(features);
}

ActionDecision ActorCriticBase::policy_action(const StepContext& ctx, bool) {
  const std::vector<double> probs = action_probabilities(ctx.features, ctx.legal);
  std::discrete_distribution<std::size_t> draw(probs.begin(), probs.end());
  const std::size_t action = draw(rng_);
  return ActionDecision{envs::ActionId{action}, DecisionSource::policy, safe_log(probs[action]),
                        state_value(ctx.features)};
}

LossSummary ActorCriticBase::apply_update(bool clipped, std::span<const PolicySample* const> batch,
                                          const LossCoefficients& coefficients, double max_grad_norm) {
  nn::Gradients actor_grads = actor_.zero_gradients();
  nn::Gradients critic_grads = critic_.zero_gradients();
  const LossSummary summary = clipped ? ppo_loss(actor_, critic_, batch, coefficients, &actor_grads, &critic_grads)
                                      : a2c_loss(actor_, critic_, batch, coefficients, &actor_grads, &critic_grads);
  if (max_grad_norm > 0.0) {
    actor_grads.clip_by_norm(max_grad_norm);
    critic_grads.clip_by_norm(max_grad_norm);
  }
  nn::adam_step(actor_.parameters(), actor_grads.values, actor_adam_);
  nn::adam_step(critic_.parameters(), critic_grads.values, critic_adam_);
  ++updates_;
  return summary;
}

void ActorCriticBase::restore(std::vector<nn::Mlp> networks) {
  if (networks.size() != 2 || !same_dims(networks[0], actor_) || !same_dims(networks[1], critic_)) {
    throw nn::DimensionMismatch("checkpoint does not match the actor/critic shapes");
  }
  actor_ = std::move(networks[0]);
  critic_ = std::move(networks[1]);
}

PpoAgent::PpoAgent(const PpoConfig& config, const NetworkConfig& network, std::size_t observation_size,
                   std::size_t action_count, std::uint64_t seed)
    : ActorCriticBase(network, observation_size, action_count, config.learning_rate, seed), config_(config) {
  if (config.batch_size == 0 || config.rollout_steps == 0 || config.epochs == 0) {
    throw std::invalid_argument("PPO batch size, rollout length and epochs must be positive");
  }
  rollout_.reserve(config.rollout_steps);
}

void PpoAgent::observe(const Experience& e) {
  double reward = e.reward;
  // A time-limit cut is not a real terminal: fold the bootstrap into the reward.
  if (e.truncated && !e.terminated) reward += config_.gamma * state_value(e.next_features);
  rollout_.push_back(Step{e.features, e.legal, e.decision.action.value, e.decision.log_prob, e.decision.value,
                          reward, e.terminated || e.truncated});
  if (rollout_.size() >= config_.rollout_steps) {
    const double last_value = rollout_.back().done ? 0.0 : state_value(e.next_features);
    update(last_value);
  }
}

LossSummary PpoAgent::update(double last_value) {
  if (rollout_.empty()) throw EmptyRollout();
  const std::size_t n = rollout_.size();
  std::vector<double> rewards(n), values(n);
  std::vector<std::uint8_t> done(n);
  for (std::size_t i = 0; i < n; ++i) {
    rewards[i] = rollout_[i].reward;
    values[i] = rollout_[i].value;
    done[i] = rollout_[i].done ? 1 : 0;
  }
  const GaeResult gae = compute_gae(rewards, values, done, last_value, config_.gamma, config_.gae_lambda);

  std::vector<PolicySample> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    samples[i] = PolicySample{std::move(rollout_[i].features), std::move(rollout_[i].legal), rollout_[i].action,
                              rollout_[i].log_prob, gae.advantages[i], gae.returns[i]};
  }
  rollout_.clear();

  const LossCoefficients coefficients{config_.clip_range, config_.value_coef, config_.entropy_coef};
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  LossSummary last;
  std::vector<PolicySample> minibatch;
  std::vector<const PolicySample*> pointers;
  for (std::size_t epoch = 0; epoch < config_.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng_);
    for (std::size_t start = 0; start < n; start += config_.batch_size) {
      const std::size_t end = std::min(n, start + config_.batch_size);
      minibatch.clear();
      for (std::size_t i = start; i < end; ++i) minibatch.push_back(samples[order[i]]);
      if (config_.normalize_advantage) normalize(minibatch);
      pointers.clear();
      for (const auto& s : minibatch) pointers.push_back(&s);
      last = apply_update(true, pointers, coefficients, config_.max_grad_norm);
    }
  }
  return last;
}

A2cAgent::A2cAgent(const A2cConfig& config, const NetworkConfig& network, std::size_t observation_size,
                   std::size_t action_count, std::uint64_t seed)
    : ActorCriticBase(network, observation_size, action_count, config.learning_rate, seed), config_(config) {
  if (config.n_steps == 0) throw std::invalid_argument("A2C n_steps must be positive");
  rollout_.reserve(config.n_steps);
}

void A2cAgent::observe(const Experience& e) {
  rollout_.push_back(Step{e.features, e.legal, e.decision.action.value, e.decision.value, e.reward});
  const bool episode_over = e.terminated || e.truncated;
  if (rollout_.size() >= config_.n_steps || episode_over) {
    update(e.terminated ? 0.0 : state_value(e.next_features));
  }
}

LossSummary A2cAgent::update(double bootstrap_value) {
  if (rollout_.empty()) throw EmptyRollout();
  std::vector<double> rewards;
  rewards.reserve(rollout_.size());
  for (const auto& s : rollout_) rewards.push_back(s.reward);
  const std::vector<double> returns = n_step_returns(rewards, bootstrap_value, config_.gamma);

  std::vector<PolicySample> samples;
  samples.reserve(rollout_.size());
  for (std::size_t i = 0; i < rollout_.size(); ++i) {
    auto& s = rollout_[i];
    samples.push_back(PolicySample{std::move(s.features), std::move(s.legal), s.action, 0.0,
                                   returns[i] - s.value, returns[i]});
  }
  rollout_.clear();
  std::vector<const PolicySample*> pointers;
  for (const auto& s : samples) pointers.push_back(&s);
  return apply_update(false, pointers, LossCoefficients{0.0, config_.value_coef, config_.entropy_coef},
                      config_.max_grad_norm);
}

}  // namespace tutor_rl::agents
