#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rf/harness/learner.hpp"
#include "rf/rulebook/rulebook.hpp"
#include "rf/scenario/scenario.hpp"
#include "rf/sim/world.hpp"

namespace rf::harness {

/// Everything needed to re-check an episode offline: the resolved scenario,
/// primitive world states per sample, actions per step and the logged verdicts.
struct EpisodeTrace {
  std::string config_json;
  std::uint64_t seed = 0;
  std::uint64_t episode = 0;
  std::vector<std::string> constraint_ids;
  std::vector<sim::WorldState> states;       // samples 0..n-1
  std::vector<std::size_t> actions;          // n-1 entries; actions[k] moves sample k to k+1
  std::vector<rulebook::StepVerdict> verdicts;  // one per sample, on the prefix ending there

  std::size_t samples() const { return states.size(); }
};

std::vector<std::uint8_t> encode_trace(const EpisodeTrace& tr);
/// Throws rf::FormatError (VersionError / ChecksumError) on bad input.
EpisodeTrace decode_trace(std::span<const std::uint8_t> bytes);

/// Trace as CSV: t, x_ego, y_ego, v_ego, x_adv, y_adv, v_adv, d, d_lat, light,
/// action, reward, goal_ind, viol_<id>... at 9 significant digits.
void write_trace_csv(const EpisodeTrace& tr, std::ostream& out);

struct EpisodeResult {
  std::uint64_t index = 0;
  std::size_t steps = 0;
  bool goal_attained = false;
  bool constraints_violated = false;
  std::optional<std::size_t> goal_step;
  double cumulative_reward = 0.0;
  double sim_time = 0.0;   // seconds of simulated time
  double wall_time = 0.0;  // seconds of host time, informational only
  EpisodeTrace trace;
};

/// Simulation fault raised inside an episode, with the trace up to the fault.
class EpisodeFault : public std::runtime_error {
 public:
  EpisodeFault(const std::string& what, EpisodeTrace partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const EpisodeTrace& partial() const { return partial_; }

 private:
  EpisodeTrace partial_;
};

struct EpisodeOptions {
  bool learn = true;
  /// Greedy actions instead of the learner's exploration policy.
  bool greedy = false;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

/// One episode: sample the initial state, then up to cfg.horizon steps of
/// act / simulate / reward / update. Stops early once the goal indicator is 1.
EpisodeResult run_episode(const scenario::ScenarioConfig& cfg, Learner& learner, Rng& rng,
                          const EpisodeOptions& opts = {});

/// Same loop from a given initial world, for scripted playback.
EpisodeResult run_episode_from(const scenario::ScenarioConfig& cfg, const sim::WorldState& initial, Learner& learner,
                               Rng& rng, const EpisodeOptions& opts = {});

/// RNG stream used for episode `index` of a campaign with base seed `seed`.
Rng episode_rng(std::uint64_t seed, std::uint64_t index);

/// Observation vector (agent.state signals) from a derived signal row and
/// whether a constraint has been violated so far.
class Observer {
 public:
  Observer(const scenario::ScenarioConfig& cfg, const std::vector<std::string>& signal_names);
  std::vector<double> operator()(std::span<const double> row, bool violated = false) const;

 private:
  static constexpr std::size_t kViolatedColumn = static_cast<std::size_t>(-1);
  std::vector<std::size_t> columns_;
};

}  // namespace rf::harness
