#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tutor_rl::nn {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NoForwardRecorded : public std::logic_error {
 public:
  NoForwardRecorded() : std::logic_error("backward called without a recorded forward pass") {}
};

enum class Activation : std::uint8_t { relu = 0, tanh = 1, identity = 2 };

// Flat gradient vector laid out exactly like Mlp::parameters().
struct Gradients {
  std::vector<double> values;

  void zero();
  void scale(double factor);
  double l2_norm() const;
  // Rescales in place when the global norm exceeds max_norm; returns the norm
  // before clipping.
  double clip_by_norm(double max_norm);
};

// Fully connected network. Hidden layers use `hidden_activation`, the output
// layer is linear. All parameters live in one contiguous buffer: for each
// layer k, a dims[k+1] x dims[k] row-major weight block followed by the
// dims[k+1] biases.
class Mlp {
 public:
  Mlp() = default;
  // Xavier-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
  Mlp(std::vector<std::size_t> dims, Activation hidden_activation, std::uint64_t seed);

  static Mlp zeros(std::vector<std::size_t> dims, Activation hidden_activation);

  std::span<const std::size_t> dims() const { return dims_; }
  std::size_t input_size() const { return dims_.front(); }
  std::size_t output_size() const { return dims_.back(); }
  std::size_t layer_count() const { return dims_.size() - 1; }
  Activation hidden_activation() const { return activation_; }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }
  std::size_t parameter_count() const { return params_.size(); }

  std::span<double> weights(std::size_t layer);
  std::span<const double> weights(std::size_t layer) const;
  std::span<double> biases(std::size_t layer);
  std::span<const double> biases(std::size_t layer) const;

  // Inference without recording activations.
  std::vector<double> predict(std::span<const double> input) const;

  // Forward pass that records activations for a following backward().
  std::vector<double> forward(std::span<const double> input);

  // Gradient of the loss w.r.t. every parameter, given dLoss/dOutput for the
  // most recent forward().
  Gradients backward(std::span<const double> output_gradient) const;
  // Same, accumulated into `into` (batch use). Returns nothing; `into` must
  // have parameter_count() entries.
  void backward_accumulate(std::span<const double> output_gradient, Gradients& into) const;

  Gradients zero_gradients() const;
  void clear_tape() { tape_.clear(); }

  void save(std::ostream& out) const;
  static Mlp load(std::istream& in);

  friend bool operator==(const Mlp&, const Mlp&);

 private:
  void layout();
  std::vector<double> run(std::span<const double> input,
                          std::vector<std::vector<double>>* tape) const;

  std::vector<std::size_t> dims_;
  Activation activation_ = Activation::relu;
  std::vector<std::size_t> weight_offset_;
  std::vector<std::size_t> bias_offset_;
  std::vector<double> params_;
  // tape_[0] is the input, tape_[k] the post-activation output of layer k-1.
  std::vector<std::vector<double>> tape_;
};

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

}  // namespace tutor_rl::nn
