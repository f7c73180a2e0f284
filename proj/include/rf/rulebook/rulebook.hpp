#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rf/stl/formula.hpp"
#include "rf/stl/monitor.hpp"
#include "rf/stl/trace.hpp"

namespace rf::rulebook {

struct Constraint {
  std::string id;    // stable name, used for trace columns (viol_<id>)
  std::string text;  // source text as written in the config
  stl::FormulaPtr formula;
};

/// Rules of equal importance sharing one penalty.
struct ConstraintGroup {
  int priority = 0;  // larger = more important
  double penalty = 0.0;
  std::vector<Constraint> constraints;
};

/// Prioritized constraint groups plus the adversary's goal. Immutable after
/// construction; groups are kept sorted by ascending priority.
class Rulebook {
 public:
  /// Throws rf::ConfigError on structural problems (non-positive weights,
  /// empty or duplicate-priority groups, zero horizon). Constraints without an
  /// id are named c1, c2, ... in ascending-priority order.
  Rulebook(stl::FormulaPtr goal, std::string goal_text, double goal_reward, std::vector<ConstraintGroup> groups,
           std::size_t horizon);

  const stl::FormulaPtr& goal() const { return goal_; }
  const std::string& goal_text() const { return goal_text_; }
  double goal_reward() const { return goal_reward_; }
  const std::vector<ConstraintGroup>& groups() const { return groups_; }
  std::size_t horizon() const { return horizon_; }

  /// Flattened constraint ids in evaluation order.
  std::vector<std::string> constraint_ids() const;
  std::size_t constraint_count() const;

  /// Copy with every weight multiplied by k (k > 0).
  Rulebook scaled(double k) const;

 private:
  stl::FormulaPtr goal_;
  std::string goal_text_;
  double goal_reward_;
  std::vector<ConstraintGroup> groups_;
  std::size_t horizon_;
};

struct StepVerdict {
  bool goal_attained = false;
  std::vector<std::pair<std::string, bool>> violations;  // constraint id -> violated
  double reward = 0.0;

  bool any_violation() const;
};

/// Ordering checks on the penalty weights. Returns one human-readable warning
/// per violated ordering; empty when the weights are consistent.
std::vector<std::string> validate(const Rulebook& rb);

/// Reward for the prefix ending at sample t:
///   goal_reward * I(goal) - sum over constraints of penalty * (1 - I(c)).
StepVerdict step_reward(const Rulebook& rb, const stl::Trace& tr, std::size_t t);

/// Streaming form of step_reward for an episode that grows one sample at a
/// time. Produces bit-identical verdicts.
class RewardMonitor {
 public:
  RewardMonitor(const Rulebook& rb, const std::vector<std::string>& signal_names, double timestep);

  StepVerdict push(const stl::Trace& tr);
  void truncate(std::size_t samples);
  std::size_t size() const { return goal_.size(); }

 private:
  const Rulebook* rb_;
  stl::PrefixMonitor goal_;
  std::vector<stl::PrefixMonitor> constraints_;
};

/// Rulebook section of a scenario file:
///   {"goal": "...", "goal_reward": 10, "groups": [{"priority": 0, "lambda": 100,
///    "formulas": ["...", ...], "ids": ["c1", ...] (optional)}]}
Rulebook rulebook_from_json(const nlohmann::json& j, std::size_t horizon);
nlohmann::json rulebook_to_json(const Rulebook& rb);

}  // namespace rf::rulebook
