#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstdint>

#include "grad_check.hpp"
#include "rf/io/error.hpp"
#include "rf/neural/mlp.hpp"
#include "rf/neural/replay.hpp"

using namespace rf;
using namespace rf::neural;

namespace {

Transition tr(std::vector<double> s, std::size_t a, double r, std::vector<double> s2, bool terminal) {
  return {std::move(s), a, r, std::move(s2), terminal};
}

bool same_params(const Mlp& a, const Mlp& b) {
  if (a.parameters().size() != b.parameters().size()) return false;
  for (std::size_t i = 0; i < a.parameters().size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a.parameters()[i]) != std::bit_cast<std::uint64_t>(b.parameters()[i])) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST(Forward, ZeroParametersGiveZeros) {
  Mlp net({3, 5, 2}, Activation::Relu, 1e-3, 1);
  for (double& p : net.parameters()) p = 0.0;
  auto q = net.forward(std::vector<double>{1.5, -2.0, 7.0});
  EXPECT_EQ(q, (std::vector<double>{0.0, 0.0}));
}

TEST(Forward, IdentityLinearLayer) {
  Mlp net({3, 3}, Activation::Tanh, 1e-3, 1);
  auto p = net.parameters();
  for (double& x : p) x = 0.0;
  for (std::size_t i = 0; i < 3; ++i) p[net.weight_offset(0) + i * 3 + i] = 1.0;
  const std::vector<double> x{0.5, -4.0, 12.0};
  EXPECT_EQ(net.forward(x), x);
}

TEST(Forward, MatchesStraightLineReimplementation) {
  Mlp net({2, 8, 3}, Activation::Tanh, 1e-3, 42);
  const std::vector<double> x{0.3, -1.2};
  auto p = net.parameters();
  // Hidden layer: W1 is 8x2 row-major, then b1; output: W2 is 3x8, then b2.
  const double* w1 = p.data();
  const double* b1 = w1 + 16;
  const double* w2 = b1 + 8;
  const double* b2 = w2 + 24;
  double h[8];
  for (int j = 0; j < 8; ++j) h[j] = std::tanh(w1[j * 2] * x[0] + w1[j * 2 + 1] * x[1] + b1[j]);
  auto q = net.forward(x);
  for (int k = 0; k < 3; ++k) {
    double acc = b2[k];
    for (int j = 0; j < 8; ++j) acc += w2[k * 8 + j] * h[j];
    EXPECT_NEAR(q[k], acc, 1e-15);
  }
}

TEST(Forward, DimensionMismatchThrows) {
  Mlp net({2, 4, 2}, Activation::Relu, 1e-3, 1);
  EXPECT_THROW(net.forward(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Init, GlorotUniformRangeAndZeroBias) {
  Mlp net({4, 16, 3}, Activation::Relu, 1e-3, 7);
  const double l0 = std::sqrt(6.0 / 20.0), l1 = std::sqrt(6.0 / 19.0);
  auto p = net.parameters();
  for (std::size_t i = net.weight_offset(0); i < net.bias_offset(0); ++i) EXPECT_LE(std::abs(p[i]), l0);
  for (std::size_t i = net.bias_offset(0); i < net.weight_offset(1); ++i) EXPECT_EQ(p[i], 0.0);
  for (std::size_t i = net.weight_offset(1); i < net.bias_offset(1); ++i) EXPECT_LE(std::abs(p[i]), l1);
  EXPECT_TRUE(same_params(net, Mlp({4, 16, 3}, Activation::Relu, 1e-3, 7)));
  EXPECT_FALSE(same_params(net, Mlp({4, 16, 3}, Activation::Relu, 1e-3, 8)));
}

TEST(TdStep, TerminalLossBeforeStep) {
  Mlp net({2, 3}, Activation::Relu, 1e-3, 1);
  for (double& p : net.parameters()) p = 0.0;
  std::vector<Transition> batch{tr({1.0, 2.0}, 1, 1.0, {0.0, 0.0}, true)};
  EXPECT_EQ(td_step(net, batch, 0.9), 1.0);
  EXPECT_GT(net.forward(std::vector<double>{1.0, 2.0})[1], 0.0);
}

TEST(TdStep, ZeroGammaIsRegressionOntoRewards) {
  Rng rng = make_rng(2);
  Mlp a({3, 6, 2}, Activation::Tanh, 1e-2, 3);
  std::vector<Transition> batch;
  std::vector<double> rewards;
  for (int i = 0; i < 8; ++i) {
    batch.push_back(tr({uniform01(rng), uniform01(rng), uniform01(rng)}, i % 2, uniform(rng, -1, 1),
                       {uniform01(rng), 0.0, 1.0}, false));
    rewards.push_back(batch.back().reward);
  }
  EXPECT_EQ(td_targets(a, batch, 0.0), rewards);
  const double expected = regression_loss(a, batch, rewards);
  EXPECT_EQ(td_step(a, batch, 0.0), expected);
}

TEST(TdStep, TargetsUseParametersBeforeTheStep) {
  Mlp net({2, 4, 2}, Activation::Tanh, 0.5, 9);
  std::vector<Transition> batch{tr({0.1, 0.2}, 0, 0.3, {0.1, 0.2}, false), tr({-1, 1}, 1, -0.2, {0.1, 0.2}, false)};
  const Mlp before = net;
  const auto y = td_targets(before, batch, 0.9);
  std::vector<double> grad(net.parameters().size(), 0.0);
  regression_gradient(before, batch, y, grad);
  td_step(net, batch, 0.9);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    EXPECT_NEAR(net.parameters()[i], before.parameters()[i] - 0.5 * grad[i], 1e-15);
  }
}

TEST(TdStep, NonFiniteAbortsWithDiagnostics) {
  Mlp net({1, 2}, Activation::Relu, 1e-3, 1);
  std::vector<Transition> batch{tr({1.0}, 0, std::nan(""), {1.0}, true)};
  try {
    td_step(net, batch, 0.9);
    FAIL();
  } catch (const NumericalFault& e) {
    EXPECT_NE(std::string(e.what()).find("layers="), std::string::npos);
  }
  EXPECT_THROW(td_step(net, std::vector<Transition>{}, 0.9), std::invalid_argument);
}

TEST(Gradient, MatchesFiniteDifferences) {
  for (std::uint64_t draw = 0; draw < 30; ++draw) {
    EXPECT_LT(gradcheck::max_relative_error({2, 4, 2}, Activation::Tanh, draw), 1e-4) << draw;
    EXPECT_LT(gradcheck::max_relative_error({3, 8, 8, 3}, Activation::Tanh, draw), 1e-4) << draw;
  }
}

TEST(Training, SeededRunsAreBitIdentical) {
  auto run = [] {
    Mlp net({2, 8, 8, 3}, Activation::Relu, 1e-2, 5);
    ReplayBuffer buf(64);
    Rng rng = make_rng(5, 1);
    for (int i = 0; i < 200; ++i) {
      buf.push(tr({uniform01(rng), uniform01(rng)}, uniform_index(rng, 3), uniform(rng, -1, 1),
                  {uniform01(rng), uniform01(rng)}, uniform01(rng) < 0.1));
      if (auto b = buf.sample(16, rng)) td_step(net, *b, 0.9);
    }
    return net;
  };
  EXPECT_TRUE(same_params(run(), run()));
}

TEST(Training, FixedRegressionLossDropsHundredfold) {
  Rng rng = make_rng(3);
  std::vector<Transition> data;
  for (int i = 0; i < 64; ++i) {
    const double x = uniform(rng, -1, 1), y = uniform(rng, -1, 1);
    const std::size_t a = uniform_index(rng, 3);
    const double target = a == 0 ? x + y : a == 1 ? x * y : std::sin(2 * x);
    data.push_back(tr({x, y}, a, target, {x, y}, true));
  }
  Mlp net({2, 8, 8, 3}, Activation::Tanh, 0.05, 3);
  std::vector<double> targets;
  for (auto& t : data) targets.push_back(t.reward);
  const double first = regression_loss(net, data, targets);
  for (int step = 0; step < 5000; ++step) td_step(net, data, 0.0);
  EXPECT_LT(regression_loss(net, data, targets), first / 100);
}

TEST(Persistence, MlpRoundTrip) {
  Mlp net({3, 5, 4, 2}, Activation::Tanh, 0.01, 11);
  auto back = Mlp::load(net.save());
  EXPECT_TRUE(same_params(net, back));
  EXPECT_EQ(back.layer_sizes(), net.layer_sizes());
  EXPECT_EQ(back.activation(), Activation::Tanh);
  EXPECT_EQ(back.learning_rate(), 0.01);
  auto bytes = net.save();
  bytes[bytes.size() - 9] ^= 1;
  EXPECT_THROW(Mlp::load(bytes), ChecksumError);
}

TEST(Replay, RingEvictsOldest) {
  ReplayBuffer buf(3);
  for (int i = 1; i <= 4; ++i) buf.push(tr({double(i)}, 0, i, {0.0}, false));
  ASSERT_EQ(buf.size(), 3u);
  EXPECT_EQ(buf.at(0).reward, 2.0);
  EXPECT_EQ(buf.at(1).reward, 3.0);
  EXPECT_EQ(buf.at(2).reward, 4.0);
  EXPECT_THROW(buf.at(3), std::out_of_range);
}

TEST(Replay, UnderfilledIsNotReady) {
  ReplayBuffer buf(100);
  for (int i = 0; i < 10; ++i) buf.push(tr({0.0}, 0, i, {0.0}, false));
  Rng rng = make_rng(1);
  EXPECT_FALSE(buf.sample(256, rng).has_value());
  EXPECT_TRUE(buf.sample(10, rng).has_value());
}

TEST(Replay, UniformChiSquare) {
  ReplayBuffer buf(10);
  for (int i = 0; i < 10; ++i) buf.push(tr({0.0}, 0, i, {0.0}, false));
  Rng rng = make_rng(12);
  std::vector<double> counts(10, 0.0);
  for (int i = 0; i < 10000; ++i) {
    for (const auto& t : *buf.sample(10, rng)) counts[static_cast<std::size_t>(t.reward)] += 1;
  }
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - 10000.0) * (c - 10000.0) / 10000.0;
  EXPECT_LT(chi2, 21.666);  // chi-square(9) upper 1% point
}

TEST(Persistence, ReplayRoundTrip) {
  ReplayBuffer buf(3);
  for (int i = 1; i <= 5; ++i) buf.push(tr({double(i), 0.5}, i % 2, i, {1.0, 2.0}, i == 5));
  auto back = ReplayBuffer::load(buf.save());
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.at(i).state, buf.at(i).state);
    EXPECT_EQ(back.at(i).reward, buf.at(i).reward);
    EXPECT_EQ(back.at(i).terminal, buf.at(i).terminal);
  }
  EXPECT_EQ(back.save(), buf.save());
}
