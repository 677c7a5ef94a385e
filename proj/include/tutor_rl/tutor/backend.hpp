#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>

#include "tutor_rl/envs/environment.hpp"

namespace tutor_rl::tutor {

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TutorTimeout : public TransportError {
 public:
  using TransportError::TransportError;
};

struct TutorQuery {
  std::string system;
  std::string prompt;
  // Scripted backends read the state directly; HTTP backends ignore it.
  const envs::Observation* observation = nullptr;
  std::size_t action_count = 0;
  // 0 for the first prompt of a set_action call, then 1, 2, ... on re-prompts.
  int attempt = 0;
};

struct TutorReply {
  std::string text;
  double latency_seconds = 0.0;
};

class TutorBackend {
 public:
  virtual ~TutorBackend() = default;
  // Throws TransportError (or TutorTimeout) when no reply could be obtained.
  virtual TutorReply query(const TutorQuery& query) = 0;
  virtual std::string describe() const = 0;
};

enum class ScriptedPolicy { optimal, heuristic, random, adversarial, malformed };

std::string to_string(ScriptedPolicy policy);
ScriptedPolicy scripted_policy_from_string(const std::string& name);

// Deterministic stand-in for an LLM: given (state, seed, attempt) it always
// emits the same reply, and reports a fixed simulated latency.
class ScriptedBackend final : public TutorBackend {
 public:
  ScriptedBackend(ScriptedPolicy policy, std::uint64_t seed, double latency_seconds = 0.01);

  TutorReply query(const TutorQuery& query) override;
  std::string describe() const override;

  ScriptedPolicy policy() const { return policy_; }

 private:
  ScriptedPolicy policy_;
  std::uint64_t seed_;
  double latency_seconds_;
};

// Policy decisions behind ScriptedBackend, exposed for tests.
envs::ActionId scripted_choice(ScriptedPolicy policy, const envs::Observation& obs, std::mt19937_64& rng);

envs::ActionId snake_greedy_move(const envs::SnakeObservation& obs);
envs::ActionId blackjack_basic_strategy(const envs::BlackjackObservation& obs);
envs::ActionId connect_four_tactical_move(const envs::ConnectFourObservation& board);

// Client for the Ollama /api/generate endpoint (non-streaming).
class HttpLlmBackend final : public TutorBackend {
 public:
  HttpLlmBackend(std::string base_url, std::string model, double timeout_seconds = 120.0);

  TutorReply query(const TutorQuery& query) override;
  std::string describe() const override;

  const std::string& base_url() const { return base_url_; }

 private:
  std::string base_url_;
  std::string model_;
  double timeout_seconds_;
};

inline constexpr const char* kDefaultLlmUrl = "http://localhost:11434";
inline constexpr const char* kLlmUrlVariable = "TUTOR_RL_LLM_URL";

// TUTOR_RL_LLM_URL when set and non-empty, else `configured`, else the default.
std::string resolve_llm_url(const std::string& configured);

// Stable 64-bit mixing of a seed with a byte string.
std::uint64_t mix_seed(std::uint64_t seed, std::string_view bytes);

}  // namespace tutor_rl::tutor
