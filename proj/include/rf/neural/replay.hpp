#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rf/io/random.hpp"
#include "rf/neural/mlp.hpp"

namespace rf::neural {

/// Fixed-capacity ring of transitions; the oldest entry is evicted first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return items_.size(); }

  void push(Transition t);

  /// i-th stored transition, oldest first.
  const Transition& at(std::size_t i) const;

  /// batch_size draws uniformly with replacement, or nullopt while
  /// size() < batch_size (the caller skips the update).
  std::optional<std::vector<Transition>> sample(std::size_t batch_size, Rng& rng) const;

  std::vector<std::uint8_t> save() const;
  static ReplayBuffer load(std::span<const std::uint8_t> bytes);

 private:
  std::size_t capacity_;
  std::vector<Transition> items_;
  std::size_t head_ = 0;  // slot of the oldest entry once the ring is full
};

}  // namespace rf::neural
