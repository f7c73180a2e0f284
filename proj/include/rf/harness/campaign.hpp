#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rf/harness/episode.hpp"
#include "rf/harness/learner.hpp"
#include "rf/scenario/scenario.hpp"

namespace rf::harness {

/// Goal x constraint partition of episodes.
struct QuadCounts {
  std::size_t goal_respected = 0;
  std::size_t goal_violated = 0;
  std::size_t no_goal_respected = 0;
  std::size_t no_goal_violated = 0;

  void add(bool goal, bool violated);
  std::size_t total() const { return goal_respected + goal_violated + no_goal_respected + no_goal_violated; }
};

struct EpisodeSummary {
  std::uint64_t index = 0;
  std::size_t epoch = 0;  // 1-based
  std::size_t steps = 0;
  bool goal = false;
  bool violated = false;
  std::optional<std::size_t> goal_step;
  double reward = 0.0;
  double sim_time = 0.0;
};

/// Cumulative statistics at the end of an epoch. "Success" counts goal
/// attainment whether or not constraints were violated.
struct EpochRow {
  std::size_t epoch = 0;
  std::size_t successes = 0;
  std::size_t episodes = 0;
  double success_rate = 0.0;  // successes / episodes * 100
  double sim_time = 0.0;
};

struct CampaignStats {
  std::vector<EpochRow> epochs;
  std::vector<EpisodeSummary> episodes;
  QuadCounts quad;
};

/// Rebuilds epoch rows and quadrant counters from episode summaries.
CampaignStats summarize(std::vector<EpisodeSummary> episodes, std::size_t episodes_per_epoch);

struct CampaignOptions {
  std::size_t epochs = 10;
  std::size_t episodes_per_epoch = 30;
  std::uint64_t seed = 1;
  /// Artifact directory; empty runs in memory only.
  std::filesystem::path out;
  bool write_traces = true;
  /// Keep only the traces of the last k episodes (0 keeps all).
  std::size_t keep_last_traces = 0;
  /// Episodes per quad.csv row; 0 uses the epoch size.
  std::size_t quad_window = 0;
  /// Continue from this epoch checkpoint instead of starting fresh.
  std::optional<std::filesystem::path> resume;
  /// Called after every episode (progress reporting).
  std::function<void(const EpisodeResult&)> on_episode;
};

/// Learner state after a whole epoch, with enough context to resume.
struct Checkpoint {
  std::string config_json;
  std::uint64_t seed = 0;
  std::size_t episodes_per_epoch = 0;
  std::size_t epochs_done = 0;
  std::vector<std::uint8_t> learner;
  std::vector<EpisodeSummary> episodes;
};

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ck);
Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes);

/// Sequential training campaign. With opts.out set, writes stats.csv,
/// quad.csv, episodes.csv, config.resolved.json, traces/ep_%06d.bin and
/// checkpoints/epoch_%03d.bin. Output is a pure function of (cfg, seed).
CampaignStats run_campaign(const scenario::ScenarioConfig& cfg, const CampaignOptions& opts);

void write_stats_csv(const CampaignStats& stats, std::ostream& out);
void write_quad_csv(const CampaignStats& stats, std::size_t window, std::ostream& out);
void write_episodes_csv(const CampaignStats& stats, std::ostream& out);
std::vector<EpisodeSummary> read_episodes_csv(std::istream& in);

/// Per-episode learning curves: cumulative success rate and quadrant counts.
void write_curves_csv(const std::vector<EpisodeSummary>& episodes, std::ostream& out);

/// Shortest decimal text that parses back to the same double.
std::string exact_number(double v);

}  // namespace rf::harness
