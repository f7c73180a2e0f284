#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rf/scenario/scenario.hpp"
#include "rf/sim/world.hpp"

namespace rf::harness {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SearchOptions {
  std::size_t depth = 6;
  /// Each macro-action holds one adversary action for this many steps.
  std::size_t hold = 10;
  /// Refuse searches whose |A|^depth exceeds this.
  std::uint64_t budget = 10'000'000;
};

struct SearchResult {
  std::vector<std::size_t> macro_actions;
  std::vector<std::size_t> actions;  // expanded, one per simulation step
  std::size_t goal_step = 0;
  std::uint64_t rollouts = 0;  // macro nodes expanded
};

/// Depth-first search over macro-action sequences (action 0 first) from
/// `initial`. Subtrees are pruned as soon as any constraint is violated.
/// Returns the first sequence that attains the goal with no violation, or
/// nullopt when the (coarsened) space is exhausted.
std::optional<SearchResult> brute_force(const scenario::ScenarioConfig& cfg, const sim::WorldState& initial,
                                        const SearchOptions& opts);

/// Initial world used by brute_force: the configured fixed initial state,
/// else one draw from the scenario seed.
sim::WorldState search_start(const scenario::ScenarioConfig& cfg);

}  // namespace rf::harness
