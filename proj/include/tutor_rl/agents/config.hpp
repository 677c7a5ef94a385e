#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tutor_rl/nn/mlp.hpp"

namespace tutor_rl::agents {

enum class Algorithm { dqn, ppo, a2c };

std::string to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);

struct NetworkConfig {
  std::vector<std::size_t> hidden = {64, 64};
  nn::Activation activation = nn::Activation::relu;
};

struct DqnConfig {
  double learning_rate = 1e-4;
  std::size_t buffer_size = 1000;
  std::size_t batch_size = 32;
  double gamma = 0.99;
  std::size_t train_freq = 1;
  // Updates start once the buffer holds this many transitions (never below
  // batch_size).
  std::size_t learning_starts = 32;
  std::size_t target_sync_interval = 100;  // in updates
  double max_grad_norm = 10.0;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  // 0 means "use the tutor decay horizon".
  std::int64_t epsilon_decay_steps = 0;
  // Keep epsilon-greedy exploration even when a tutor gate is active.
  bool epsilon_with_tutor = false;
};

struct PpoConfig {
  double learning_rate = 3e-4;
  double clip_range = 0.2;
  std::size_t batch_size = 64;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  std::size_t rollout_steps = 512;
  std::size_t epochs = 10;
  double value_coef = 0.5;
  double entropy_coef = 0.01;
  double max_grad_norm = 0.5;
  bool normalize_advantage = true;
};

struct A2cConfig {
  double learning_rate = 7e-4;
  std::size_t n_steps = 5;
  double gamma = 0.99;
  double value_coef = 0.5;
  double entropy_coef = 0.01;
  double max_grad_norm = 0.5;
};

struct AgentConfig {
  Algorithm algorithm = Algorithm::dqn;
  NetworkConfig network;
  DqnConfig dqn;
  PpoConfig ppo;
  A2cConfig a2c;
};

}  // namespace tutor_rl::agents
