#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rf/io/random.hpp"
#include "rf/neural/mlp.hpp"
#include "rf/neural/replay.hpp"
#include "rf/scenario/scenario.hpp"
#include "rf/tabular/qtable.hpp"

namespace rf::harness {

/// Adversary policy driven by the episode loop. Observations are the
/// scenario's agent.state signals, in order.
class Learner {
 public:
  virtual ~Learner() = default;

  virtual std::size_t act(std::span<const double> obs, Rng& rng) = 0;
  virtual std::size_t greedy(std::span<const double> obs) const = 0;
  virtual void observe(std::span<const double> obs, std::size_t action, double reward,
                       std::span<const double> next_obs, bool terminal, Rng& rng) = 0;
  /// Called after each finished episode with the total number finished so far.
  virtual void end_episode(std::size_t /*episodes_done*/) {}
  virtual void reset_episode() {}
  virtual std::vector<std::uint8_t> save() const = 0;
  virtual scenario::AgentType type() const = 0;
};

class TabularLearner : public Learner {
 public:
  explicit TabularLearner(tabular::QTable table) : table_(std::move(table)) {}

  std::size_t act(std::span<const double> obs, Rng& rng) override { return table_.select_action(obs, rng); }
  std::size_t greedy(std::span<const double> obs) const override { return table_.greedy_action(obs); }
  void observe(std::span<const double> obs, std::size_t action, double reward, std::span<const double> next_obs,
               bool terminal, Rng& rng) override;
  void end_episode(std::size_t episodes_done) override;
  std::vector<std::uint8_t> save() const override { return table_.save(); }
  scenario::AgentType type() const override { return scenario::AgentType::Tabular; }

  tabular::QTable& table() { return table_; }
  const tabular::QTable& table() const { return table_; }

 private:
  tabular::QTable table_;
};

/// Q-network trained by td_step on uniform replay samples; inputs are the
/// observations divided by fixed per-dimension scales.
class DqnLearner : public Learner {
 public:
  DqnLearner(neural::Mlp net, neural::ReplayBuffer buffer, scenario::NeuralSpec spec);

  std::size_t act(std::span<const double> obs, Rng& rng) override;
  std::size_t greedy(std::span<const double> obs) const override;
  void observe(std::span<const double> obs, std::size_t action, double reward, std::span<const double> next_obs,
               bool terminal, Rng& rng) override;
  void end_episode(std::size_t episodes_done) override;
  std::vector<std::uint8_t> save() const override;
  scenario::AgentType type() const override { return scenario::AgentType::Neural; }

  /// Restores network, replay memory and exploration rate from save().
  static DqnLearner load(std::span<const std::uint8_t> bytes, scenario::NeuralSpec spec);

  const neural::Mlp& network() const { return net_; }
  const neural::ReplayBuffer& buffer() const { return buffer_; }
  double epsilon() const { return epsilon_; }
  void set_epsilon(double e) { epsilon_ = e; }
  double last_loss() const { return last_loss_; }

 private:
  std::vector<double> scaled(std::span<const double> obs) const;

  neural::Mlp net_;
  neural::ReplayBuffer buffer_;
  scenario::NeuralSpec spec_;
  double epsilon_;
  double last_loss_ = 0.0;
};

/// Plays a fixed action sequence, then a fallback action. Never learns.
class ScriptedLearner : public Learner {
 public:
  explicit ScriptedLearner(std::vector<std::size_t> actions, std::size_t fallback = 0)
      : actions_(std::move(actions)), fallback_(fallback) {}

  std::size_t act(std::span<const double> obs, Rng&) override { return greedy(obs); }
  /// Each call consumes one scripted step.
  std::size_t greedy(std::span<const double>) const override {
    return cursor_ < actions_.size() ? actions_[cursor_++] : fallback_;
  }
  void observe(std::span<const double>, std::size_t, double, std::span<const double>, bool, Rng&) override {}
  void reset_episode() override { cursor_ = 0; }
  std::vector<std::uint8_t> save() const override { return {}; }
  scenario::AgentType type() const override { return scenario::AgentType::Tabular; }

 private:
  std::vector<std::size_t> actions_;
  std::size_t fallback_;
  mutable std::size_t cursor_ = 0;
};

/// Fresh learner for cfg.agent; weights and Q-values are seeded from seed.
std::unique_ptr<Learner> make_learner(const scenario::ScenarioConfig& cfg, std::uint64_t seed);
/// Learner restored from Learner::save() bytes.
std::unique_ptr<Learner> load_learner(const scenario::ScenarioConfig& cfg, std::span<const std::uint8_t> bytes);

}  // namespace rf::harness
