#include "tutor_rl/tutor/gate.hpp"

#include <numeric>

#include "tutor_rl/tutor/parse.hpp"
#include "tutor_rl/tutor/prompts.hpp"

namespace tutor_rl::tutor {

AdviceCache::AdviceCache(int initial_budget, bool reuse_enabled)
    : initial_budget_(initial_budget), reuse_enabled_(reuse_enabled) {
  if (initial_budget < 0) throw std::invalid_argument("advice budget must be non-negative");
}

std::optional<AdviceEntry> AdviceCache::try_reuse(const std::string& key) {
  if (!reuse_enabled_) return std::nullopt;
  const auto it = entries_.find(key);
  if (it == entries_.end() || it->second.budget <= 0) return std::nullopt;
  it->second.budget -= 1;
  return it->second;
}

void AdviceCache::store(const std::string& key, envs::ActionId action, double latency_seconds) {
  entries_.insert_or_assign(key, AdviceEntry{action, initial_budget_, latency_seconds});
}

void AdviceCache::evict(const std::string& key) { entries_.erase(key); }

const AdviceEntry* AdviceCache::find(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

double TutorStats::total_latency_seconds() const {
  return std::accumulate(latencies.begin(), latencies.end(), 0.0);
}

std::string to_string(AdviceSource source) {
  switch (source) {
    case AdviceSource::tutor_fresh: return "tutor_fresh";
    case AdviceSource::tutor_reused: return "tutor_reused";
    case AdviceSource::random_fallback: return "random_fallback";
  }
  return "unknown";
}

TutorGate::TutorGate(TutorSchedule schedule, std::unique_ptr<TutorBackend> backend, GateOptions options,
                     std::uint64_t seed)
    : schedule_(schedule),
      backend_(std::move(backend)),
      options_(options),
      cache_(options.budget, options.reuse),
      rng_(seed) {
  if (!backend_) throw std::invalid_argument("tutor gate needs a backend");
  if (options.retry_cap < 1) throw std::invalid_argument("retry cap must be at least 1");
}

bool TutorGate::draw_engagement() {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return unit(rng_) < schedule_.current_probability();
}

std::optional<Advice> TutorGate::maybe_advise(const envs::Environment& env, const envs::Observation& obs) {
  if (!options_.enabled) return std::nullopt;
  if (!draw_engagement()) return std::nullopt;
  return advise(env, obs);
}

Advice TutorGate::set_action(const envs::Environment& env, const envs::Observation& obs) {
  const std::string key = envs::canonical_key(obs);
  if (const auto reused = cache_.try_reuse(key)) {
    stats_.reuses += 1;
    stats_.reuse_latencies.push_back(reused->latency_seconds);
    return Advice{reused->action, AdviceSource::tutor_reused};
  }

  const int kind = static_cast<int>(env.kind());
  auto prompt_it = system_prompts_.find(kind);
  if (prompt_it == system_prompts_.end()) {
    prompt_it = system_prompts_.emplace(kind, build_system_prompt(env)).first;
  }

  const envs::ActionMask legal = env.legal_actions(obs);
  TutorQuery query{prompt_it->second, envs::to_prompt(obs), &obs, env.action_count(), 0};
  for (int attempt = 0; attempt < options_.retry_cap; ++attempt) {
    query.attempt = attempt;
    stats_.backend_queries += 1;
    TutorReply reply;
    try {
      reply = backend_->query(query);
    } catch (const TransportError&) {
      stats_.transport_failures += 1;
      continue;
    }
    stats_.latencies.push_back(reply.latency_seconds);
    const ParsedAction parsed = parse_action(reply.text, env.action_count());
    if (std::holds_alternative<ParseFailure>(parsed)) {
      stats_.parse_failures += 1;
      continue;
    }
    const envs::ActionId action = std::get<envs::ActionId>(parsed);
    if (!legal[action.value]) {
      stats_.inapplicable += 1;
      continue;
    }
    stats_.fresh_queries += 1;
    cache_.store(key, action, reply.latency_seconds);
    return Advice{action, AdviceSource::tutor_fresh};
  }
  throw RetriesExhausted("no valid advice after " + std::to_string(options_.retry_cap) + " attempts");
}

Advice TutorGate::advise(const envs::Environment& env, const envs::Observation& obs) {
  try {
    return set_action(env, obs);
  } catch (const RetriesExhausted&) {
    stats_.random_fallbacks += 1;
    return Advice{random_legal(env.legal_actions(obs)), AdviceSource::random_fallback};
  }
}

void TutorGate::report_inapplicable(const envs::Observation& obs) {
  stats_.inapplicable += 1;
  cache_.evict(envs::canonical_key(obs));
}

envs::ActionId TutorGate::random_legal(const envs::ActionMask& mask) {
  std::vector<std::size_t> legal;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) legal.push_back(i);
  }
  if (legal.empty()) throw std::logic_error("no legal action to fall back to");
  std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
  return envs::ActionId{legal[pick(rng_)]};
}

}  // namespace tutor_rl::tutor
