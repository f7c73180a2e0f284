#pragma once

// Central finite-difference check of Mlp regression gradients.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rf/io/random.hpp"
#include "rf/neural/mlp.hpp"

namespace gradcheck {

/// Largest relative error between analytic and central-difference gradients
/// over every parameter of a freshly drawn network, batch and target set.
/// Relative error is |a - n| / max(|a|, |n|, 1e-6).
inline double max_relative_error(const std::vector<std::size_t>& sizes, rf::neural::Activation act,
                                 std::uint64_t draw, double h = 1e-5) {
  using namespace rf::neural;
  Mlp net(sizes, act, 1e-3, draw);
  rf::Rng rng = rf::make_rng(draw, 0x67726164);
  for (double& p : net.parameters()) p = rf::uniform(rng, -1.0, 1.0);
  std::vector<Transition> batch;
  std::vector<double> targets;
  const std::size_t n = 1 + rf::uniform_index(rng, 4);
  for (std::size_t i = 0; i < n; ++i) {
    Transition t;
    for (std::size_t j = 0; j < sizes.front(); ++j) t.state.push_back(rf::uniform(rng, -2.0, 2.0));
    t.action = rf::uniform_index(rng, sizes.back());
    t.next_state = t.state;
    batch.push_back(t);
    targets.push_back(rf::uniform(rng, -3.0, 3.0));
  }
  std::vector<double> grad(net.parameters().size(), 0.0);
  regression_gradient(net, batch, targets, grad);
  double worst = 0.0;
  auto params = net.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double keep = params[i];
    params[i] = keep + h;
    const double up = regression_loss(net, batch, targets);
    params[i] = keep - h;
    const double down = regression_loss(net, batch, targets);
    params[i] = keep;
    const double numeric = (up - down) / (2 * h);
    const double denom = std::max({std::abs(grad[i]), std::abs(numeric), 1e-6});
    worst = std::max(worst, std::abs(grad[i] - numeric) / denom);
  }
  return worst;
}

}  // namespace gradcheck
