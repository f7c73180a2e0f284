#pragma once

// Small deterministic MDPs with a value-iteration oracle for Q-learning tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rf/io/random.hpp"
#include "rf/tabular/qtable.hpp"

namespace toy {

struct Mdp {
  std::size_t states = 0;
  std::size_t actions = 0;
  double gamma = 0.9;
  // Indexed by s * actions + a.
  std::vector<std::size_t> next;
  std::vector<double> reward;
  std::vector<bool> terminal;
};

inline Mdp random_mdp(std::uint64_t seed, std::size_t states, std::size_t actions, double gamma) {
  rf::Rng rng = rf::make_rng(seed, 99);
  Mdp m{states, actions, gamma, {}, {}, {}};
  for (std::size_t k = 0; k < states * actions; ++k) {
    m.next.push_back(rf::uniform_index(rng, states));
    m.reward.push_back(rf::uniform(rng, -1.0, 1.0));
    m.terminal.push_back(rf::uniform01(rng) < 0.2);
  }
  return m;
}

/// Q* by value iteration until the sup-norm change is below 1e-13.
inline std::vector<double> value_iteration(const Mdp& m) {
  std::vector<double> q(m.states * m.actions, 0.0);
  for (int it = 0; it < 100000; ++it) {
    std::vector<double> nq(q.size());
    double delta = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      double best = 0.0;
      if (!m.terminal[k]) {
        const std::size_t s2 = m.next[k];
        best = *std::max_element(q.begin() + static_cast<long>(s2 * m.actions),
                                 q.begin() + static_cast<long>((s2 + 1) * m.actions));
      }
      nq[k] = m.reward[k] + m.gamma * best;
      delta = std::max(delta, std::abs(nq[k] - q[k]));
    }
    q = std::move(nq);
    if (delta < 1e-13) break;
  }
  return q;
}

/// Runs `updates` Q-learning updates on uniformly drawn (s, a) pairs.
inline rf::tabular::QTable q_learn(const Mdp& m, std::size_t updates, double alpha, double decay_power,
                                   std::uint64_t seed) {
  rf::tabular::Hyperparameters hp;
  hp.alpha = alpha;
  hp.gamma = m.gamma;
  hp.alpha_decay_power = decay_power;
  rf::tabular::QTable qt(rf::tabular::Discretizer({{"s", 0.0, static_cast<double>(m.states), m.states}}), m.actions,
                         hp);
  rf::Rng rng = rf::make_rng(seed, 7);
  for (std::size_t i = 0; i < updates; ++i) {
    const std::size_t s = rf::uniform_index(rng, m.states);
    const std::size_t a = rf::uniform_index(rng, m.actions);
    const std::size_t k = s * m.actions + a;
    qt.update_index(s, a, m.reward[k], m.next[k], m.terminal[k]);
  }
  return qt;
}

inline double max_error(const rf::tabular::QTable& qt, const std::vector<double>& oracle) {
  double err = 0.0;
  for (std::size_t k = 0; k < oracle.size(); ++k) err = std::max(err, std::abs(qt.values()[k] - oracle[k]));
  return err;
}

}  // namespace toy
