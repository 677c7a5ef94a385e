#include "tutor_rl/agents/dqn.hpp"

#include <algorithm>

namespace tutor_rl::agents {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
  items_.reserve(capacity);
}

void ReplayBuffer::push(DqnTransition transition) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(transition));
  } else {
    items_[next_] = std::move(transition);
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<const DqnTransition*> ReplayBuffer::sample(std::size_t count, std::mt19937_64& rng) const {
  if (items_.empty()) throw BufferTooSmall("cannot sample from an empty replay buffer");
  std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
  std::vector<const DqnTransition*> batch(count);
  for (auto& slot : batch) slot = &items_[pick(rng)];
  return batch;
}

DqnAgent::DqnAgent(const DqnConfig& config, const NetworkConfig& network, std::size_t observation_size,
                   std::size_t action_count, std::int64_t decay_steps, std::uint64_t seed)
    : config_(config),
      q_net_(layer_dims(observation_size, network, action_count), network.activation, seed),
      target_net_(q_net_),
      adam_(nn::AdamState::for_parameters(q_net_.parameter_count(), config.learning_rate)),
      replay_(config.buffer_size),
      rng_(seed ^ 0x9e3779b97f4a7c15ULL),
      decay_steps_(config.epsilon_decay_steps > 0 ? config.epsilon_decay_steps : decay_steps) {
  if (config.batch_size == 0) throw std::invalid_argument("batch size must be positive");
  if (config.train_freq == 0) throw std::invalid_argument("train frequency must be positive");
  if (config.target_sync_interval == 0) throw std::invalid_argument("target sync interval must be positive");
}

double DqnAgent::epsilon() const {
  if (decay_steps_ <= 0 || steps_ >= decay_steps_) return config_.epsilon_end;
  const double fraction = static_cast<double>(steps_) / static_cast<double>(decay_steps_);
  return config_.epsilon_start + fraction * (config_.epsilon_end - config_.epsilon_start);
}

ActionDecision DqnAgent::policy_action(const StepContext& ctx, bool tutor_active) {
  if (!tutor_active || config_.epsilon_with_tutor) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng_) < epsilon()) return ActionDecision{uniform_legal(ctx.legal, rng_), DecisionSource::policy};
  }
  const std::vector<double> q = q_net_.predict(ctx.features);
  return ActionDecision{envs::ActionId{masked_argmax(q, ctx.legal)}, DecisionSource::policy};
}

void DqnAgent::observe(const Experience& e) {
  // Truncated episodes keep bootstrapping; only true terminals cut the target.
  replay_.push(DqnTransition{e.features, e.decision.action.value, e.reward, e.next_features, e.terminated,
                             e.next_legal});
  ++steps_;
  const std::size_t warmup = std::max(config_.learning_starts, config_.batch_size);
  if (steps_ % static_cast<std::int64_t>(config_.train_freq) == 0 && replay_.size() >= warmup) update();
}

double DqnAgent::update() {
  if (replay_.size() < config_.batch_size) {
    throw BufferTooSmall("replay holds " + std::to_string(replay_.size()) + " transitions, batch needs " +
                         std::to_string(config_.batch_size));
  }
  const auto batch = replay_.sample(config_.batch_size, rng_);
  nn::Gradients grads = q_net_.zero_gradients();
  const double loss = dqn_loss(q_net_, target_net_, batch, config_.gamma, &grads);
  if (config_.max_grad_norm > 0.0) grads.clip_by_norm(config_.max_grad_norm);
  nn::adam_step(q_net_.parameters(), grads.values, adam_);
  ++updates_;
  if (updates_ % config_.target_sync_interval == 0) target_net_ = q_net_;
  return loss;
}

void DqnAgent::restore(std::vector<nn::Mlp> networks) {
  if (networks.size() != 2 || networks[0].dims().size() != q_net_.dims().size() ||
      !std::equal(networks[0].dims().begin(), networks[0].dims().end(), q_net_.dims().begin())) {
    throw nn::DimensionMismatch("checkpoint does not match the DQN network shape");
  }
  q_net_ = std::move(networks[0]);
  target_net_ = std::move(networks[1]);
}

}  // namespace tutor_rl::agents
