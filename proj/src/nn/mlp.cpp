#include "tutor_rl/nn/mlp.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>

#include "tutor_rl/kernels/kernels.hpp"

namespace tutor_rl::nn {

static_assert(std::endian::native == std::endian::little,
              "checkpoint layout assumes a little-endian host");

namespace {

constexpr std::array<char, 8> kMlpMagic{'T', 'R', 'L', 'M', 'L', 'P', '0', '1'};

double activate(Activation a, double x) {
  switch (a) {
    case Activation::relu: return x > 0.0 ? x : 0.0;
    case Activation::tanh: return std::tanh(x);
    case Activation::identity: return x;
  }
  return x;
}

// Derivative expressed through the activation's output.
double activate_derivative(Activation a, double y) {
  switch (a) {
    case Activation::relu: return y > 0.0 ? 1.0 : 0.0;
    case Activation::tanh: return 1.0 - y * y;
    case Activation::identity: return 1.0;
  }
  return 1.0;
}

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("truncated network checkpoint");
  return value;
}

}  // namespace

void Gradients::zero() { std::fill(values.begin(), values.end(), 0.0); }

void Gradients::scale(double factor) {
  for (double& v : values) v *= factor;
}

double Gradients::l2_norm() const {
  return std::sqrt(kernels::dot(values, values));
}

double Gradients::clip_by_norm(double max_norm) {
  const double norm = l2_norm();
  if (max_norm > 0.0 && norm > max_norm) scale(max_norm / (norm + 1e-6));
  return norm;
}

Mlp::Mlp(std::vector<std::size_t> dims, Activation hidden_activation, std::uint64_t seed)
    : dims_(std::move(dims)), activation_(hidden_activation) {
  layout();
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < layer_count(); ++k) {
    const double limit = std::sqrt(6.0 / static_cast<double>(dims_[k] + dims_[k + 1]));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& w : weights(k)) w = dist(rng);
  }
}

Mlp Mlp::zeros(std::vector<std::size_t> dims, Activation hidden_activation) {
  Mlp net;
  net.dims_ = std::move(dims);
  net.activation_ = hidden_activation;
  net.layout();
  return net;
}

void Mlp::layout() {
  if (dims_.size() < 2) throw DimensionMismatch("an Mlp needs at least input and output dims");
  for (std::size_t d : dims_) {
    if (d == 0) throw DimensionMismatch("layer width must be positive");
  }
  weight_offset_.clear();
  bias_offset_.clear();
  std::size_t offset = 0;
  for (std::size_t k = 0; k + 1 < dims_.size(); ++k) {
    weight_offset_.push_back(offset);
    offset += dims_[k] * dims_[k + 1];
    bias_offset_.push_back(offset);
    offset += dims_[k + 1];
  }
  params_.assign(offset, 0.0);
  tape_.clear();
}

std::span<double> Mlp::weights(std::size_t layer) {
  return std::span<double>(params_).subspan(weight_offset_.at(layer), dims_[layer] * dims_[layer + 1]);
}
std::span<const double> Mlp::weights(std::size_t layer) const {
  return std::span<const double>(params_).subspan(weight_offset_.at(layer),
                                                  dims_[layer] * dims_[layer + 1]);
}
std::span<double> Mlp::biases(std::size_t layer) {
  return std::span<double>(params_).subspan(bias_offset_.at(layer), dims_[layer + 1]);
}
std::span<const double> Mlp::biases(std::size_t layer) const {
  return std::span<const double>(params_).subspan(bias_offset_.at(layer), dims_[layer + 1]);
}

std::vector<double> Mlp::run(std::span<const double> input, std::vector<std::vector<double>>* tape) const {
  if (input.size() != input_size()) {
    throw DimensionMismatch("input has " + std::to_string(input.size()) + " values, network expects " +
                            std::to_string(input_size()));
  }
  if (tape) {
    tape->resize(dims_.size());
    (*tape)[0].assign(input.begin(), input.end());
  }
  std::vector<double> current(input.begin(), input.end());
  std::vector<double> next;
  for (std::size_t k = 0; k < layer_count(); ++k) {
    next.resize(dims_[k + 1]);
    kernels::affine(weights(k), biases(k), current, next);
    if (k + 1 < layer_count()) {
      for (double& v : next) v = activate(activation_, v);
    }
    if (tape) (*tape)[k + 1] = next;
    current.swap(next);
  }
  return current;
}

std::vector<double> Mlp::predict(std::span<const double> input) const {
  return run(input, nullptr);
}

std::vector<double> Mlp::forward(std::span<const double> input) { return run(input, &tape_); }

Gradients Mlp::zero_gradients() const { return Gradients{std::vector<double>(params_.size(), 0.0)}; }

Gradients Mlp::backward(std::span<const double> output_gradient) const {
  Gradients grads = zero_gradients();
  backward_accumulate(output_gradient, grads);
  return grads;
}

void Mlp::backward_accumulate(std::span<const double> output_gradient, Gradients& into) const {
  if (tape_.size() != dims_.size()) throw NoForwardRecorded();
  if (output_gradient.size() != output_size()) throw DimensionMismatch("output gradient size mismatch");
  if (into.values.size() != params_.size()) throw DimensionMismatch("gradient buffer size mismatch");

  std::vector<double> delta(output_gradient.begin(), output_gradient.end());
  std::vector<double> below;
  std::span<double> grad_all(into.values);
  for (std::size_t k = layer_count(); k-- > 0;) {
    const std::vector<double>& layer_input = tape_[k];
    kernels::outer_acc(delta, layer_input,
                       grad_all.subspan(weight_offset_[k], dims_[k] * dims_[k + 1]));
    kernels::axpy(1.0, delta, grad_all.subspan(bias_offset_[k], dims_[k + 1]));
    if (k == 0) break;
    below.assign(dims_[k], 0.0);
    kernels::affine_transpose_acc(weights(k), delta, below);
    for (std::size_t i = 0; i < below.size(); ++i) {
      below[i] *= activate_derivative(activation_, layer_input[i]);
    }
    delta.swap(below);
  }
}

void Mlp::save(std::ostream& out) const {
  out.write(kMlpMagic.data(), kMlpMagic.size());
  write_pod(out, static_cast<std::uint32_t>(activation_));
  write_pod(out, static_cast<std::uint32_t>(dims_.size()));
  for (std::size_t d : dims_) write_pod(out, static_cast<std::uint64_t>(d));
  out.write(reinterpret_cast<const char*>(params_.data()),
            static_cast<std::streamsize>(params_.size() * sizeof(double)));
}

Mlp Mlp::load(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMlpMagic) throw std::runtime_error("not a network checkpoint (bad magic)");
  const auto activation = read_pod<std::uint32_t>(in);
  if (activation > static_cast<std::uint32_t>(Activation::identity)) {
    throw std::runtime_error("unknown activation in checkpoint");
  }
  const auto dim_count = read_pod<std::uint32_t>(in);
  if (dim_count < 2 || dim_count > 64) throw std::runtime_error("implausible layer count in checkpoint");
  std::vector<std::size_t> dims;
  for (std::uint32_t i = 0; i < dim_count; ++i) dims.push_back(read_pod<std::uint64_t>(in));
  Mlp net = zeros(std::move(dims), static_cast<Activation>(activation));
  in.read(reinterpret_cast<char*>(net.params_.data()),
          static_cast<std::streamsize>(net.params_.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated network checkpoint");
  return net;
}

bool operator==(const Mlp& a, const Mlp& b) {
  return a.dims_ == b.dims_ && a.activation_ == b.activation_ &&
         a.params_.size() == b.params_.size() &&
         std::memcmp(a.params_.data(), b.params_.data(), a.params_.size() * sizeof(double)) == 0;
}

std::string to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::identity: return "identity";
  }
  return "relu";
}

Activation activation_from_string(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "identity") return Activation::identity;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

}  // namespace tutor_rl::nn
