#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tutor_rl/nn/mlp.hpp"

namespace tutor_rl::nn {

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::int64_t step_count = 0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState for_parameters(std::size_t count, double learning_rate);
};

// One bias-corrected Adam update in place.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state);

// Numerically stable softmax; entries whose mask is 0 get probability 0.
std::vector<double> softmax(std::span<const double> logits);
std::vector<double> masked_softmax(std::span<const double> logits,
                                   std::span<const std::uint8_t> mask);

// Checkpoint: several networks in one file, see docs/formats.md.
void save_checkpoint(const std::filesystem::path& path, std::span<const Mlp* const> nets);
std::vector<Mlp> load_checkpoint(const std::filesystem::path& path);

}  // namespace tutor_rl::nn
