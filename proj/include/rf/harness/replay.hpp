#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rf/harness/episode.hpp"

namespace rf::harness {

struct Mismatch {
  std::size_t step = 0;
  std::string field;  // "reward", "goal", "viol_<id>", "state"
  std::string logged;
  std::string recomputed;
};

struct ReplayReport {
  std::size_t samples = 0;
  bool goal_attained = false;
  std::optional<std::size_t> goal_step;
  bool constraints_violated = false;
  /// Constraint ids violated at some step (recomputed).
  std::vector<std::string> violated_ids;
  std::vector<Mismatch> mismatches;
  /// Whether the dynamics were re-simulated from the logged actions
  /// (skipped when acceleration noise is enabled).
  bool dynamics_checked = false;

  bool ok() const { return mismatches.empty(); }
};

/// Recomputes every indicator and reward from the stored primitive states
/// using the pure step_reward path, and re-simulates the logged actions.
ReplayReport replay(const EpisodeTrace& trace);
ReplayReport replay_file(const std::string& path);

void print_report(const ReplayReport& report, std::ostream& out);

}  // namespace rf::harness
