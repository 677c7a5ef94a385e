#include "tutor_rl/agents/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tutor_rl/nn/optim.hpp"

namespace tutor_rl::agents {

namespace {

double masked_max(std::span<const double> values, const envs::ActionMask& mask) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (mask.empty() || mask[i]) best = std::max(best, values[i]);
  }
  return best;
}

const envs::ActionMask& full_mask_if_empty(const envs::ActionMask& mask, std::size_t n, envs::ActionMask& scratch) {
  if (!mask.empty()) return mask;
  scratch.assign(n, 1);
  return scratch;
}

// Per-sample quantities of a categorical policy head.
struct PolicyHead {
  std::vector<double> probs;
  double log_prob = 0.0;
  double entropy = 0.0;
};

PolicyHead evaluate_head(std::span<const double> logits, const envs::ActionMask& legal, std::size_t action) {
  PolicyHead head;
  head.probs = nn::masked_softmax(logits, legal);
  for (std::size_t i = 0; i < head.probs.size(); ++i) {
    if (legal[i] && head.probs[i] > 0.0) head.entropy -= head.probs[i] * std::log(head.probs[i]);
  }
  head.log_prob = std::log(std::max(head.probs[action], std::numeric_limits<double>::min()));
  return head;
}

// dLoss/dlogits given dLoss/dlog_prob(action) and dLoss/dentropy.
std::vector<double> head_gradient(const PolicyHead& head, const envs::ActionMask& legal, std::size_t action,
                                  double d_log_prob, double d_entropy) {
  std::vector<double> grad(head.probs.size(), 0.0);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (!legal[i]) continue;
    const double p = head.probs[i];
    const double dlogp = (i == action ? 1.0 : 0.0) - p;
    const double dentropy = p > 0.0 ? -p * (std::log(p) + head.entropy) : 0.0;
    grad[i] = d_log_prob * dlogp + d_entropy * dentropy;
  }
  return grad;
}

enum class PolicyObjective { clipped_surrogate, vanilla };

LossSummary actor_critic_loss(PolicyObjective objective, nn::Mlp& actor, nn::Mlp& critic,
                              std::span<const PolicySample* const> batch, const LossCoefficients& c,
                              nn::Gradients* actor_grads, nn::Gradients* critic_grads) {
  if (batch.empty()) throw EmptyRollout();
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  const bool want_grads = actor_grads != nullptr || critic_grads != nullptr;
  LossSummary summary;
  std::size_t clipped = 0;
  envs::ActionMask scratch;

  for (const PolicySample* sample : batch) {
    const envs::ActionMask& legal = full_mask_if_empty(sample->legal, actor.output_size(), scratch);
    const std::vector<double> logits = want_grads ? actor.forward(sample->features) : actor.predict(sample->features);
    const PolicyHead head = evaluate_head(logits, legal, sample->action);
    const double a = sample->advantage;

    double policy_term = 0.0;
    double d_log_prob = 0.0;
    if (objective == PolicyObjective::clipped_surrogate) {
      const double ratio = std::exp(head.log_prob - sample->old_log_prob);
      const double unclipped = ratio * a;
      const double bounded = std::clamp(ratio, 1.0 - c.clip_range, 1.0 + c.clip_range) * a;
      policy_term = -std::min(unclipped, bounded);
      if (unclipped <= bounded) {
        d_log_prob = -a * ratio * inv_n;
      } else {
        ++clipped;
      }
    } else {
      policy_term = -head.log_prob * a;
      d_log_prob = -a * inv_n;
    }
    summary.policy_loss += policy_term * inv_n;
    summary.entropy += head.entropy * inv_n;

    if (actor_grads) {
      const std::vector<double> grad =
          head_gradient(head, legal, sample->action, d_log_prob, -c.entropy_coef * inv_n);
      actor.backward_accumulate(grad, *actor_grads);
    }

    const std::vector<double> value =
        want_grads ? critic.forward(sample->features) : critic.predict(sample->features);
    const double error = value[0] - sample->return_target;
    summary.value_loss += error * error * inv_n;
    if (critic_grads) {
      const double d_value = 2.0 * c.value_coef * error * inv_n;
      critic.backward_accumulate(std::span<const double>(&d_value, 1), *critic_grads);
    }
  }
  summary.total = summary.policy_loss + c.value_coef * summary.value_loss - c.entropy_coef * summary.entropy;
  summary.clip_fraction = static_cast<double>(clipped) * inv_n;
  return summary;
}

}  // namespace

double dqn_target(const nn::Mlp& target, const DqnTransition& t, double gamma) {
  if (t.terminated) return t.reward;
  const std::vector<double> next_q = target.predict(t.next_features);
  return t.reward + gamma * masked_max(next_q, t.next_legal);
}

double dqn_loss(nn::Mlp& q, const nn::Mlp& target, std::span<const DqnTransition* const> batch, double gamma,
                nn::Gradients* grads) {
  if (batch.empty()) throw EmptyRollout();
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  std::vector<double> d_output(q.output_size(), 0.0);
  for (const DqnTransition* t : batch) {
    const double y = dqn_target(target, *t, gamma);
    const std::vector<double> values = grads ? q.forward(t->features) : q.predict(t->features);
    const double error = values.at(t->action) - y;
    loss += error * error * inv_n;
    if (grads) {
      std::fill(d_output.begin(), d_output.end(), 0.0);
      d_output[t->action] = 2.0 * error * inv_n;
      q.backward_accumulate(d_output, *grads);
    }
  }
  return loss;
}

double clipped_surrogate(double ratio, double advantage, double clip_range) {
  return std::min(ratio * advantage, std::clamp(ratio, 1.0 - clip_range, 1.0 + clip_range) * advantage);
}

LossSummary ppo_loss(nn::Mlp& actor, nn::Mlp& critic, std::span<const PolicySample* const> batch,
                     const LossCoefficients& coefficients, nn::Gradients* actor_grads,
                     nn::Gradients* critic_grads) {
  return actor_critic_loss(PolicyObjective::clipped_surrogate, actor, critic, batch, coefficients, actor_grads,
                           critic_grads);
}

LossSummary a2c_loss(nn::Mlp& actor, nn::Mlp& critic, std::span<const PolicySample* const> batch,
                     const LossCoefficients& coefficients, nn::Gradients* actor_grads,
                     nn::Gradients* critic_grads) {
  return actor_critic_loss(PolicyObjective::vanilla, actor, critic, batch, coefficients, actor_grads,
                           critic_grads);
}

std::vector<double> n_step_returns(std::span<const double> rewards, double bootstrap_value, double gamma) {
  std::vector<double> returns(rewards.size());
  double running = bootstrap_value;
  for (std::size_t t = rewards.size(); t-- > 0;) {
    running = rewards[t] + gamma * running;
    returns[t] = running;
  }
  return returns;
}

GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      std::span<const std::uint8_t> done, double last_value, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || done.size() != n) throw std::invalid_argument("GAE inputs differ in length");
  GaeResult out{std::vector<double>(n), std::vector<double>(n)};
  double running = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double next_value = t + 1 < n ? values[t + 1] : last_value;
    const double not_done = done[t] ? 0.0 : 1.0;
    const double delta = rewards[t] + gamma * next_value * not_done - values[t];
    running = delta + gamma * lambda * not_done * running;
    out.advantages[t] = running;
    out.returns[t] = running + values[t];
  }
  return out;
}

}  // namespace tutor_rl::agents
