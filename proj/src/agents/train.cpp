#include "tutor_rl/agents/train.hpp"

#include <stdexcept>

namespace tutor_rl::agents {

std::vector<double> TrainingLog::step_curve() const {
  std::vector<double> curve(static_cast<std::size_t>(steps), 0.0);
  std::size_t episode = 0;
  double latest = 0.0;
  for (std::int64_t s = 0; s < steps; ++s) {
    while (episode < episode_end_steps.size() && episode_end_steps[episode] <= s + 1) {
      latest = episode_returns[episode];
      ++episode;
    }
    curve[static_cast<std::size_t>(s)] = latest;
  }
  return curve;
}

namespace {

void count(DecisionCounts& counts, DecisionSource source) {
  switch (source) {
    case DecisionSource::policy: ++counts.policy; break;
    case DecisionSource::tutor_fresh: ++counts.tutor_fresh; break;
    case DecisionSource::tutor_reused: ++counts.tutor_reused; break;
    case DecisionSource::random_fallback: ++counts.random_fallback; break;
  }
}

}  // namespace

TrainingLog train(Agent& agent, envs::Environment& env, tutor::TutorGate* gate, std::int64_t total_steps,
                  std::uint64_t seed, const TrainOptions& options) {
  if (total_steps < 0) throw std::invalid_argument("total_steps must be non-negative");
  TrainingLog log;
  if (total_steps == 0) return log;

  std::mt19937_64 fallback_rng(seed ^ 0xd1b54a32d192ed03ULL);
  envs::Observation obs = env.reset(seed);
  std::vector<double> features = env.encode(obs);
  envs::ActionMask legal = env.legal_actions(obs);
  double episode_return = 0.0;

  for (std::int64_t step = 0; step < total_steps; ++step) {
    const StepContext ctx{env, obs, features, legal};
    ActionDecision decision = agent.select_action(ctx, gate);

    envs::StepResult result;
    try {
      result = env.step(decision.action);
    } catch (const envs::IllegalAction&) {
      // Advice that only turned out to be inapplicable when executed: forget
      // it and play a random legal move instead.
      if (decision.source == DecisionSource::policy) throw;
      if (gate != nullptr) gate->report_inapplicable(obs);
      ++log.decisions.inapplicable;
      decision.action = uniform_legal(legal, fallback_rng);
      decision.source = DecisionSource::random_fallback;
      agent.rescore(decision, features, legal);
      result = env.step(decision.action);
    }
    count(log.decisions, decision.source);

    Experience experience{features,        legal,
                          decision,        result.reward,
                          env.encode(result.observation), env.legal_actions(result.observation),
                          result.terminated, result.truncated};
    agent.observe(experience);
    if (options.on_step) options.on_step(step, decision, experience);
    if (gate != nullptr) gate->advance();
    log.steps = step + 1;

    episode_return += result.reward;
    if (result.terminated || result.truncated) {
      log.episode_returns.push_back(episode_return);
      log.episode_end_steps.push_back(step + 1);
      episode_return = 0.0;
      obs = env.reset();
    } else {
      obs = std::move(result.observation);
    }
    features = env.encode(obs);
    legal = env.legal_actions(obs);
  }
  return log;
}

}  // namespace tutor_rl::agents
