#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rf::neural {

enum class Activation : std::uint8_t { Relu = 0, Tanh = 1 };

const char* to_string(Activation a);
Activation activation_from_string(const std::string& s);

/// Non-finite loss, gradient or parameter. what() carries a diagnostics dump.
class NumericalFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fully connected network with a shared hidden activation and identity
/// output. Parameters live in one flat array, layer by layer: the row-major
/// weight matrix (out x in) followed by the bias vector.
class Mlp {
 public:
  /// layer_sizes = {input, hidden..., output}. Weights are drawn uniformly
  /// from +-sqrt(6 / (fan_in + fan_out)); biases start at zero.
  Mlp(std::vector<std::size_t> layer_sizes, Activation hidden, double learning_rate, std::uint64_t seed);

  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  std::size_t input_size() const { return sizes_.front(); }
  std::size_t output_size() const { return sizes_.back(); }
  std::size_t layer_count() const { return sizes_.size() - 1; }
  Activation activation() const { return act_; }
  double learning_rate() const { return lr_; }
  void set_learning_rate(double lr);
  std::uint64_t seed() const { return seed_; }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const { return offsets_[layer] + sizes_[layer] * sizes_[layer + 1]; }

  std::vector<double> forward(std::span<const double> input) const;

  /// Adds the gradient of weight * (output[action] - target)^2 to grad and
  /// returns output[action] - target.
  double accumulate_squared_error(std::span<const double> input, std::size_t action, double target, double weight,
                                  std::span<double> grad) const;

  std::vector<std::uint8_t> save() const;
  static Mlp load(std::span<const std::uint8_t> bytes);

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  Activation act_;
  double lr_;
  std::uint64_t seed_;
  std::vector<double> params_;
};

struct Transition {
  std::vector<double> state;
  std::size_t action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
};

/// y = r for terminal transitions, else r + gamma * max_a' q(s', a').
std::vector<double> td_targets(const Mlp& net, std::span<const Transition> batch, double gamma);

/// mean over the batch of (y - q(s)[a])^2 with fixed targets.
double regression_loss(const Mlp& net, std::span<const Transition> batch, std::span<const double> targets);

/// Gradient of regression_loss with respect to every parameter, written into
/// grad (size = parameter count). Returns the loss.
double regression_gradient(const Mlp& net, std::span<const Transition> batch, std::span<const double> targets,
                           std::span<double> grad);

/// One SGD step on the TD loss. Targets are computed before the update and
/// treated as constants. Returns the loss before the step; throws
/// NumericalFault if the loss, gradient or updated parameters are non-finite.
double td_step(Mlp& net, std::span<const Transition> batch, double gamma);

}  // namespace rf::neural
