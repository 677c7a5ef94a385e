#include "tutor_rl/nn/optim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>

#include "tutor_rl/kernels/kernels.hpp"

namespace tutor_rl::nn {

namespace {
constexpr std::array<char, 8> kCheckpointMagic{'T', 'R', 'L', 'C', 'K', 'P', 'T', '1'};
}

AdamState AdamState::for_parameters(std::size_t count, double learning_rate) {
  AdamState state;
  state.first_moment.assign(count, 0.0);
  state.second_moment.assign(count, 0.0);
  state.learning_rate = learning_rate;
  return state;
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state) {
  if (grads.size() != params.size()) throw DimensionMismatch("adam: gradient size mismatch");
  if (state.first_moment.size() != params.size() || state.second_moment.size() != params.size()) {
    throw DimensionMismatch("adam: optimizer state size mismatch");
  }
  state.step_count += 1;
  const auto t = static_cast<double>(state.step_count);
  const kernels::AdamCoefficients c{
      state.learning_rate,
      state.beta1,
      state.beta2,
      state.epsilon,
      1.0 - std::pow(state.beta1, t),
      1.0 - std::pow(state.beta2, t),
  };
  kernels::adam(params, grads, state.first_moment, state.second_moment, c);
}

std::vector<double> softmax(std::span<const double> logits) {
  const std::vector<std::uint8_t> all(logits.size(), 1);
  return masked_softmax(logits, all);
}

std::vector<double> masked_softmax(std::span<const double> logits, std::span<const std::uint8_t> mask) {
  if (mask.size() != logits.size()) throw DimensionMismatch("softmax mask size mismatch");
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (mask[i]) peak = std::max(peak, logits[i]);
  }
  std::vector<double> probs(logits.size(), 0.0);
  if (!std::isfinite(peak)) throw std::invalid_argument("softmax: no finite unmasked logit");
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (!mask[i]) continue;
    probs[i] = std::exp(logits[i] - peak);
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

void save_checkpoint(const std::filesystem::path& path, std::span<const Mlp* const> nets) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path.string());
  out.write(kCheckpointMagic.data(), kCheckpointMagic.size());
  const auto count = static_cast<std::uint32_t>(nets.size());
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  for (const Mlp* net : nets) net->save(out);
  if (!out) throw std::runtime_error("failed writing checkpoint " + path.string());
}

std::vector<Mlp> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kCheckpointMagic) throw std::runtime_error("bad checkpoint magic in " + path.string());
  std::uint32_t count = 0;
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  if (!in) throw std::runtime_error("truncated checkpoint " + path.string());
  std::vector<Mlp> nets;
  for (std::uint32_t i = 0; i < count; ++i) nets.push_back(Mlp::load(in));
  return nets;
}

}  // namespace tutor_rl::nn
