#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tutor_rl/envs/types.hpp"

namespace tutor_rl::envs {

enum class OpponentPolicy { uniform_random, heuristic };

std::string to_string(OpponentPolicy policy);
OpponentPolicy opponent_policy_from_string(const std::string& name);

struct EnvOptions {
  OpponentPolicy connect_four_opponent = OpponentPolicy::uniform_random;
  // Steps without eating before a Snake episode is truncated.
  int snake_starvation_limit = 200;
};

// Gymnasium-style stepping interface shared by the three games.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual EnvKind kind() const = 0;
  std::string name() const;

  virtual std::size_t action_count() const = 0;
  // Human-readable action labels, index = ActionId.
  virtual std::vector<std::string> action_names() const = 0;
  virtual std::string observation_description() const = 0;

  // Reseeds the environment's generator and starts a fresh episode.
  virtual Observation reset(std::uint64_t seed) = 0;
  // Starts a fresh episode continuing the current random stream.
  virtual Observation reset() = 0;
  virtual StepResult step(ActionId action) = 0;

  virtual ActionMask legal_actions(const Observation& obs) const;

  // Flattened network input; size is observation_size().
  virtual std::size_t observation_size() const = 0;
  virtual std::vector<double> encode(const Observation& obs) const = 0;
};

std::unique_ptr<Environment> make_environment(EnvKind kind, const EnvOptions& options = {});

std::size_t action_count(EnvKind kind);

// Injective byte serialization, stable across processes and platforms.
std::string canonical_key(const Observation& obs);

// Natural-language rendering of a state for the tutor.
std::string to_prompt(const Observation& obs);

// Legal actions derivable from the observation alone.
ActionMask legal_actions(const Observation& obs);

}  // namespace tutor_rl::envs
