#include "rf/neural/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rf/io/binary.hpp"
#include "rf/io/random.hpp"

namespace rf::neural {

namespace {

constexpr io::Magic kMagic{'R', 'F', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

double activate(Activation a, double z) { return a == Activation::Relu ? (z > 0.0 ? z : 0.0) : std::tanh(z); }

// Derivative expressed through the activation output h.
double activate_grad(Activation a, double z, double h) {
  return a == Activation::Relu ? (z > 0.0 ? 1.0 : 0.0) : 1.0 - h * h;
}

std::string dump(const Mlp& net, const std::string& reason) {
  std::ostringstream os;
  os << reason << " | layers=";
  for (std::size_t i = 0; i < net.layer_sizes().size(); ++i) os << (i ? "-" : "") << net.layer_sizes()[i];
  os << " act=" << to_string(net.activation()) << " lr=" << net.learning_rate();
  double max_abs = 0.0;
  std::size_t non_finite = 0;
  for (double p : net.parameters()) {
    if (!std::isfinite(p)) ++non_finite;
    else max_abs = std::max(max_abs, std::fabs(p));
  }
  os << " non_finite_params=" << non_finite << " max_abs_param=" << max_abs;
  return os.str();
}

}  // namespace

const char* to_string(Activation a) { return a == Activation::Relu ? "relu" : "tanh"; }

Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::Relu;
  if (s == "tanh") return Activation::Tanh;
  throw std::invalid_argument("unknown activation: " + s);
}

Mlp::Mlp(std::vector<std::size_t> layer_sizes, Activation hidden, double learning_rate, std::uint64_t seed)
    : sizes_(std::move(layer_sizes)), act_(hidden), lr_(learning_rate), seed_(seed) {
  if (sizes_.size() < 2) throw std::invalid_argument("mlp needs input and output sizes");
  for (auto s : sizes_) {
    if (s == 0) throw std::invalid_argument("mlp layer sizes must be positive");
  }
  set_learning_rate(learning_rate);
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += sizes_[l] * sizes_[l + 1] + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
  Rng rng = make_rng(seed, 0x6d6c70);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const double limit = std::sqrt(6.0 / static_cast<double>(sizes_[l] + sizes_[l + 1]));
    const std::size_t n = sizes_[l] * sizes_[l + 1];
    for (std::size_t i = 0; i < n; ++i) params_[offsets_[l] + i] = uniform(rng, -limit, limit);
  }
}

void Mlp::set_learning_rate(double lr) {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw std::invalid_argument("learning rate must be positive");
  lr_ = lr;
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  if (input.size() != input_size()) {
    throw std::invalid_argument("mlp input has dimension " + std::to_string(input.size()) + ", expected " +
                                std::to_string(input_size()));
  }
  std::vector<double> a(input.begin(), input.end());
  std::vector<double> z;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const std::size_t in = sizes_[l], out = sizes_[l + 1];
    const double* w = params_.data() + offsets_[l];
    const double* b = w + in * out;
    z.assign(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      double acc = b[o];
      for (std::size_t i = 0; i < in; ++i) acc += w[o * in + i] * a[i];
      z[o] = acc;
    }
    const bool hidden = l + 1 < layer_count();
    if (hidden) {
      for (auto& v : z) v = activate(act_, v);
    }
    a.swap(z);
  }
  return a;
}

double Mlp::accumulate_squared_error(std::span<const double> input, std::size_t action, double target,
                                     double weight, std::span<double> grad) const {
  if (input.size() != input_size()) throw std::invalid_argument("mlp input has wrong dimension");
  if (action >= output_size()) throw std::out_of_range("action index out of range");
  const std::size_t L = layer_count();
  // Forward pass keeping pre-activations and activations of every layer.
  std::vector<std::vector<double>> acts(L + 1), pre(L);
  acts[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < L; ++l) {
    const std::size_t in = sizes_[l], out = sizes_[l + 1];
    const double* w = params_.data() + offsets_[l];
    const double* b = w + in * out;
    pre[l].assign(out, 0.0);
    acts[l + 1].assign(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      double acc = b[o];
      for (std::size_t i = 0; i < in; ++i) acc += w[o * in + i] * acts[l][i];
      pre[l][o] = acc;
      acts[l + 1][o] = l + 1 < L ? activate(act_, acc) : acc;
    }
  }

  const double err = acts[L][action] - target;
  std::vector<double> delta(output_size(), 0.0);
  delta[action] = 2.0 * weight * err;
  std::vector<double> prev;
  for (std::size_t l = L; l-- > 0;) {
    const std::size_t in = sizes_[l], out = sizes_[l + 1];
    const double* w = params_.data() + offsets_[l];
    double* gw = grad.data() + offsets_[l];
    double* gb = gw + in * out;
    for (std::size_t o = 0; o < out; ++o) {
      if (delta[o] == 0.0) continue;
      gb[o] += delta[o];
      for (std::size_t i = 0; i < in; ++i) gw[o * in + i] += delta[o] * acts[l][i];
    }
    if (l == 0) break;
    prev.assign(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      if (delta[o] == 0.0) continue;
      for (std::size_t i = 0; i < in; ++i) prev[i] += w[o * in + i] * delta[o];
    }
    for (std::size_t i = 0; i < in; ++i) prev[i] *= activate_grad(act_, pre[l - 1][i], acts[l][i]);
    delta.swap(prev);
  }
  return err;
}

std::vector<std::uint8_t> Mlp::save() const {
  io::ByteWriter w(kMagic, kVersion);
  w.u64(sizes_.size());
  for (auto s : sizes_) w.u64(s);
  w.u8(static_cast<std::uint8_t>(act_));
  w.f64(lr_);
  w.u64(seed_);
  w.f64s(params_);
  return std::move(w).finish();
}

Mlp Mlp::load(std::span<const std::uint8_t> bytes) {
  io::ByteReader r(bytes, kMagic, kVersion, "mlp weights");
  std::vector<std::size_t> sizes(r.u64());
  for (auto& s : sizes) s = r.u64();
  const std::uint8_t tag = r.u8();
  if (tag > 1) throw FormatError("mlp weights: unknown activation tag");
  const double lr = r.f64();
  const std::uint64_t seed = r.u64();
  Mlp net(std::move(sizes), static_cast<Activation>(tag), lr, seed);
  auto params = r.f64s();
  if (params.size() != net.params_.size()) throw FormatError("mlp weights: parameter count does not match layers");
  net.params_ = std::move(params);
  r.expect_end();
  return net;
}

std::vector<double> td_targets(const Mlp& net, std::span<const Transition> batch, double gamma) {
  std::vector<double> y;
  y.reserve(batch.size());
  for (const auto& tr : batch) {
    if (tr.terminal) {
      y.push_back(tr.reward);
    } else {
      const auto q = net.forward(tr.next_state);
      y.push_back(tr.reward + gamma * *std::max_element(q.begin(), q.end()));
    }
  }
  return y;
}

double regression_loss(const Mlp& net, std::span<const Transition> batch, std::span<const double> targets) {
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double err = net.forward(batch[i].state).at(batch[i].action) - targets[i];
    loss += err * err;
  }
  return loss / static_cast<double>(batch.size());
}

double regression_gradient(const Mlp& net, std::span<const Transition> batch, std::span<const double> targets,
                           std::span<double> grad) {
  if (grad.size() != net.parameters().size()) throw std::invalid_argument("gradient buffer has wrong size");
  std::fill(grad.begin(), grad.end(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double err = net.accumulate_squared_error(batch[i].state, batch[i].action, targets[i], inv_n, grad);
    loss += err * err;
  }
  return loss * inv_n;
}

double td_step(Mlp& net, std::span<const Transition> batch, double gamma) {
  if (batch.empty()) throw std::invalid_argument("td_step needs a non-empty batch");
  const auto targets = td_targets(net, batch, gamma);
  std::vector<double> grad(net.parameters().size());
  const double loss = regression_gradient(net, batch, targets, grad);
  if (!std::isfinite(loss)) throw NumericalFault(dump(net, "non-finite TD loss"));
  for (double g : grad) {
    if (!std::isfinite(g)) throw NumericalFault(dump(net, "non-finite gradient"));
  }
  auto params = net.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) params[i] -= net.learning_rate() * grad[i];
  for (double p : params) {
    if (!std::isfinite(p)) throw NumericalFault(dump(net, "non-finite parameter after update"));
  }
  return loss;
}

}  // namespace rf::neural
