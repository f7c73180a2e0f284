#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rf/io/random.hpp"

namespace rf::tabular {

struct Dimension {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t bins = 1;
};

/// Uniform grid over a box. Values outside [lo, hi] fall into the boundary bin.
class Discretizer {
 public:
  explicit Discretizer(std::vector<Dimension> dims);

  const std::vector<Dimension>& dims() const { return dims_; }
  std::size_t state_count() const { return count_; }
  std::size_t bin(std::size_t dim, double value) const;
  /// Row-major flat index over all dimensions (first dimension slowest).
  std::size_t index(std::span<const double> state) const;

 private:
  std::vector<Dimension> dims_;
  std::size_t count_ = 1;
};

struct Hyperparameters {
  double alpha = 0.1;
  double gamma = 0.95;
  double epsilon = 0.1;
  /// Per-visit step size alpha / n^power for the n-th update of (s, a); 0 keeps alpha constant.
  double alpha_decay_power = 0.0;
  /// Linear epsilon decay over this many episodes down to epsilon_floor; 0 disables decay.
  std::size_t epsilon_decay_episodes = 0;
  double epsilon_floor = 0.01;
};

/// Lowest index among the maximal entries.
std::size_t argmax(std::span<const double> values);

/// Epsilon-soft choice: uniform with probability epsilon, greedy otherwise.
/// Each action is chosen with probability at least epsilon / |A|.
std::size_t epsilon_soft(std::span<const double> q_row, double epsilon, Rng& rng);

/// Epsilon after `episode` completed episodes under the linear decay schedule.
double scheduled_epsilon(const Hyperparameters& hp, std::size_t episode);

class QTable {
 public:
  QTable(Discretizer discretizer, std::size_t action_count, Hyperparameters hp);

  const Discretizer& discretizer() const { return disc_; }
  const Hyperparameters& hyperparameters() const { return hp_; }
  std::size_t action_count() const { return actions_; }
  std::size_t state_count() const { return disc_.state_count(); }

  /// Fills every entry uniformly from [-magnitude, magnitude].
  void randomize(Rng& rng, double magnitude);

  double q(std::size_t s, std::size_t a) const { return values_[s * actions_ + a]; }
  void set_q(std::size_t s, std::size_t a, double v) { values_[s * actions_ + a] = v; }
  std::span<const double> row(std::size_t s) const { return {values_.data() + s * actions_, actions_}; }
  std::span<const double> values() const { return values_; }
  std::uint64_t visits(std::size_t s, std::size_t a) const { return visits_[s * actions_ + a]; }

  double epsilon() const { return epsilon_; }
  void set_epsilon(double e);

  std::size_t select_action(std::span<const double> state, Rng& rng) const;
  std::size_t greedy_action(std::span<const double> state) const;

  /// q(s,a) += alpha [r + gamma max_a' q(s',a') - q(s,a)]; the bootstrap term
  /// is dropped when `terminal`.
  void update(std::span<const double> state, std::size_t action, double reward, std::span<const double> next_state,
              bool terminal = false);
  void update_index(std::size_t s, std::size_t action, double reward, std::size_t next_s, bool terminal = false);

  std::vector<std::uint8_t> save() const;
  /// Throws rf::VersionError / rf::ChecksumError / rf::FormatError.
  static QTable load(std::span<const std::uint8_t> bytes);

 private:
  Discretizer disc_;
  std::size_t actions_;
  Hyperparameters hp_;
  double epsilon_;
  std::vector<double> values_;
  std::vector<std::uint64_t> visits_;
};

}  // namespace rf::tabular
