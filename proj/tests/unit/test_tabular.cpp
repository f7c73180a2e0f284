#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "rf/io/error.hpp"
#include "rf/tabular/qtable.hpp"
#include "toy_mdp.hpp"

using namespace rf;
using namespace rf::tabular;

namespace {

QTable small_table(double eps = 0.1) {
  Hyperparameters hp;
  hp.epsilon = eps;
  return QTable(Discretizer({{"x", 0.0, 10.0, 5}, {"y", -1.0, 1.0, 2}}), 3, hp);
}

std::vector<double> frequencies(std::span<const double> row, double eps, int draws, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::vector<double> f(row.size());
  for (int i = 0; i < draws; ++i) f[epsilon_soft(row, eps, rng)] += 1.0 / draws;
  return f;
}

}  // namespace

TEST(Discretizer, BinsAndBoundaries) {
  Discretizer d({{"x", 0.0, 10.0, 5}});
  EXPECT_EQ(d.bin(0, -3.0), 0u);
  EXPECT_EQ(d.bin(0, 0.0), 0u);
  EXPECT_EQ(d.bin(0, 1.99), 0u);
  EXPECT_EQ(d.bin(0, 2.0), 1u);
  EXPECT_EQ(d.bin(0, 9.99), 4u);
  EXPECT_EQ(d.bin(0, 10.0), 4u);
  EXPECT_EQ(d.bin(0, 1e9), 4u);
  EXPECT_EQ(d.bin(0, std::nan("")), 0u);
}

TEST(Discretizer, RowMajorIndex) {
  Discretizer d({{"x", 0.0, 10.0, 5}, {"y", -1.0, 1.0, 2}});
  EXPECT_EQ(d.state_count(), 10u);
  EXPECT_EQ(d.index(std::vector<double>{0.5, -0.5}), 0u);
  EXPECT_EQ(d.index(std::vector<double>{0.5, 0.5}), 1u);
  EXPECT_EQ(d.index(std::vector<double>{9.5, 0.5}), 9u);
  EXPECT_THROW(d.index(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Discretizer, RejectsBadDimensions) {
  EXPECT_THROW(Discretizer({}), std::invalid_argument);
  EXPECT_THROW(Discretizer({{"x", 0.0, 1.0, 0}}), std::invalid_argument);
  EXPECT_THROW(Discretizer({{"x", 1.0, 1.0, 3}}), std::invalid_argument);
}

TEST(Hyperparameters, Validated) {
  Hyperparameters hp;
  hp.alpha = 0.0;
  EXPECT_THROW(QTable(Discretizer({{"x", 0, 1, 1}}), 2, hp), std::invalid_argument);
  hp = {};
  hp.gamma = 1.5;
  EXPECT_THROW(QTable(Discretizer({{"x", 0, 1, 1}}), 2, hp), std::invalid_argument);
  hp = {};
  hp.epsilon = -0.1;
  EXPECT_THROW(QTable(Discretizer({{"x", 0, 1, 1}}), 2, hp), std::invalid_argument);
}

TEST(EpsilonSoft, ArgmaxBreaksTiesLow) {
  EXPECT_EQ(argmax(std::vector<double>{1, 5, 2}), 1u);
  EXPECT_EQ(argmax(std::vector<double>{3, 3, 3}), 0u);
  EXPECT_EQ(argmax(std::vector<double>{-1, 2, 2}), 1u);
}

TEST(EpsilonSoft, ZeroEpsilonIsGreedy) {
  Rng rng = make_rng(1);
  const std::vector<double> row{1, 5, 2};
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(epsilon_soft(row, 0.0, rng), 1u);
}

TEST(EpsilonSoft, FullEpsilonIsUniform) {
  const int n = 10000;
  auto f = frequencies(std::vector<double>{0, 9, 0}, 1.0, n, 2);
  const double p = 1.0 / 3.0;
  const double sigma = std::sqrt(p * (1 - p) / n);
  for (double x : f) EXPECT_NEAR(x, p, 3 * sigma);
}

TEST(EpsilonSoft, MixtureFrequency) {
  auto f = frequencies(std::vector<double>{0, 0, 1}, 0.2, 10000, 3);
  EXPECT_NEAR(f[2], 0.8 + 0.2 / 3.0, 0.02);
  EXPECT_NEAR(f[0], 0.2 / 3.0, 0.02);
}

TEST(EpsilonSoft, EveryActionKeepsItsShare) {
  for (double eps : {0.05, 0.1, 0.3}) {
    const int n = 20000;
    auto f = frequencies(std::vector<double>{5, -1, 2, 0}, eps, n, 4);
    const double floor = eps / 4;
    const double sigma = std::sqrt(floor * (1 - floor) / n);
    for (double x : f) EXPECT_GE(x, floor - 4 * sigma);
  }
}

TEST(EpsilonSchedule, LinearDecayToFloor) {
  Hyperparameters hp;
  hp.epsilon = 0.1;
  hp.epsilon_floor = 0.01;
  EXPECT_EQ(scheduled_epsilon(hp, 50), 0.1);
  hp.epsilon_decay_episodes = 10;
  EXPECT_EQ(scheduled_epsilon(hp, 0), 0.1);
  EXPECT_NEAR(scheduled_epsilon(hp, 5), 0.055, 1e-15);
  EXPECT_NEAR(scheduled_epsilon(hp, 10), 0.01, 1e-15);
  EXPECT_NEAR(scheduled_epsilon(hp, 1000), 0.01, 1e-15);
}

TEST(Update, HandComputedStep) {
  auto qt = small_table();
  // s = bin(3.0)=1, bin(0.5)=1 -> index 3; s' = index 9.
  const std::vector<double> s{3.0, 0.5}, s2{9.5, 0.5};
  qt.set_q(9, 0, 2.0);
  qt.set_q(9, 2, 4.0);
  qt.set_q(3, 1, 1.0);
  qt.update(s, 1, -1.0, s2);
  // 1 + 0.1 * (-1 + 0.95 * 4 - 1) = 1.18
  EXPECT_NEAR(qt.q(3, 1), 1.18, 1e-15);
  qt.update(s, 1, 2.0, s2, true);
  EXPECT_NEAR(qt.q(3, 1), 1.18 + 0.1 * (2.0 - 1.18), 1e-15);
  EXPECT_EQ(qt.visits(3, 1), 2u);
}

TEST(Update, OnlyTouchesVisitedEntry) {
  Rng rng = make_rng(5);
  auto qt = small_table();
  qt.randomize(rng, 1.0);
  for (int i = 0; i < 500; ++i) {
    const std::vector<double> before(qt.values().begin(), qt.values().end());
    const std::size_t s = uniform_index(rng, qt.state_count());
    const std::size_t s2 = uniform_index(rng, qt.state_count());
    const std::size_t a = uniform_index(rng, 3);
    qt.update_index(s, a, uniform(rng, -5, 5), s2, uniform01(rng) < 0.3);
    for (std::size_t k = 0; k < before.size(); ++k) {
      if (k != s * 3 + a) ASSERT_EQ(qt.values()[k], before[k]);
    }
  }
  EXPECT_THROW(qt.update_index(0, 3, 0.0, 0), std::out_of_range);
}

TEST(Update, ConvergesOnToyMdp) {
  auto m = toy::random_mdp(1, 6, 2, 0.8);
  auto q = toy::q_learn(m, 60000, 1.0, 0.6, 1);
  EXPECT_LT(toy::max_error(q, toy::value_iteration(m)), 1e-3);
}

TEST(Persistence, RoundTripBitExact) {
  Rng rng = make_rng(6);
  auto qt = small_table(0.25);
  qt.randomize(rng, 3.0);
  qt.update_index(2, 1, 1.0, 3);
  auto back = QTable::load(qt.save());
  ASSERT_EQ(back.values().size(), qt.values().size());
  for (std::size_t k = 0; k < qt.values().size(); ++k) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back.values()[k]), std::bit_cast<std::uint64_t>(qt.values()[k]));
  }
  EXPECT_EQ(back.visits(2, 1), 1u);
  EXPECT_EQ(back.epsilon(), 0.25);
  EXPECT_EQ(back.hyperparameters().gamma, qt.hyperparameters().gamma);
  EXPECT_EQ(back.discretizer().dims()[1].name, "y");
  EXPECT_EQ(back.save(), qt.save());
}

TEST(Persistence, CorruptionDetected) {
  auto bytes = small_table().save();
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(QTable::load(bad_magic), FormatError);
  auto bad_version = bytes;
  bad_version[4] = 9;
  EXPECT_THROW(QTable::load(bad_version), VersionError);
  auto bad_payload = bytes;
  bad_payload[bytes.size() / 2] ^= 0x40;
  EXPECT_THROW(QTable::load(bad_payload), ChecksumError);
}
