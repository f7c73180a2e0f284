#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rf/io/random.hpp"
#include "rf/neural/mlp.hpp"
#include "rf/rulebook/rulebook.hpp"
#include "rf/sim/world.hpp"
#include "rf/tabular/qtable.hpp"

namespace rf::scenario {

struct InitRange {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
};

/// Uniform initial-state distribution over a box.
class InitialStateSampler {
 public:
  explicit InitialStateSampler(std::vector<InitRange> ranges);

  const std::vector<InitRange>& ranges() const { return ranges_; }
  std::vector<double> sample(Rng& rng) const;

 private:
  std::vector<InitRange> ranges_;
};

enum class AgentType { Tabular, Neural };

const char* to_string(AgentType t);
/// Accepts "tabular"/"qtable" and "neural"/"dqn".
AgentType agent_type_from_string(const std::string& s);

struct TabularSpec {
  tabular::Hyperparameters hp;
  std::vector<tabular::Dimension> grid;
  /// Q-values start uniform in [-init_magnitude, init_magnitude]; 0 = zeros.
  double init_magnitude = 0.0;
};

struct NeuralSpec {
  std::vector<std::size_t> hidden{32, 32};
  neural::Activation activation = neural::Activation::Relu;
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
  std::size_t capacity = 10000;
  double gamma = 0.95;
  double epsilon = 0.1;
  std::size_t epsilon_decay_episodes = 0;
  double epsilon_floor = 0.01;
  /// Network input i is state[i] / scales[i].
  std::vector<double> scales;
  /// Rewards are multiplied by this before entering the replay buffer.
  double reward_scale = 1.0;
  /// Multiplies the initial output-layer weights; 0 starts with q = 0 everywhere.
  double output_init_scale = 1.0;
};

inline constexpr const char* kViolatedFeature = "violated";

struct AgentSpec {
  AgentType type = AgentType::Tabular;
  /// Observed signals, in order; tabular grid dimensions must name the same signals.
  /// The name kViolatedFeature observes 1 once any constraint is violated on the prefix, else 0.
  std::vector<std::string> state;
  TabularSpec tabular;
  NeuralSpec neural;
};

/// Initial condition: front-bumper gap d, ego and adversary speeds.
inline const std::vector<std::string> kInitKeys{"d", "v_ego", "v_adv"};

struct ScenarioConfig {
  std::string name;
  sim::WorldConfig world;
  std::size_t horizon = 600;
  std::shared_ptr<const rulebook::Rulebook> rulebook;
  std::vector<InitRange> init_ranges;  // keys in kInitKeys order
  /// Fixed initial condition (kInitKeys order); replaces sampling when set.
  std::optional<std::vector<double>> initial_state;
  /// Named physical constants; formula text may refer to them as $name.
  std::map<std::string, double> constants;
  AgentSpec agent;
  std::uint64_t seed = 1;

  double dt() const { return world.dt; }
  sim::ScenarioKind kind() const { return world.kind; }
};

/// Replaces every $name in text with the formatted constant. Throws ConfigError on unknown names.
std::string substitute_constants(const std::string& text, const std::map<std::string, double>& constants);

/// Structural and cross-reference checks: formula and agent signals must be
/// exported by the simulator, ranges must be proper boxes, etc. Throws ConfigError.
void validate(const ScenarioConfig& cfg);

/// Ego and adversary states for an initial condition (d, v_ego, v_adv).
std::pair<sim::VehicleState, sim::VehicleState> initial_vehicles(const ScenarioConfig& cfg,
                                                                 const std::vector<double>& init);

/// Initial world for one episode: the fixed initial state if configured, otherwise a draw from rng.
sim::WorldState sample_initial_world(const ScenarioConfig& cfg, Rng& rng);

ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig load_scenario(const std::string& path);

/// Driving in lane: ACC ego behind a braking/accelerating adversary.
ScenarioConfig build_case_I();
/// Case I with the relaxed safety distance d_min = 5.5 m.
ScenarioConfig build_case_I_relaxed();
/// Small case I instance (fixed start, short horizon, coarse grid) used for
/// exhaustive search and completeness runs.
ScenarioConfig build_case_I_micro();
/// Lane change: adversary merges from the left lane in front of a switching ego.
ScenarioConfig build_case_II();
/// Yellow light: adversary leads the ego towards a light that turns yellow.
ScenarioConfig build_case_III();

/// Preset by name: case1, case1_relaxed, case1_micro, case2, case3.
ScenarioConfig build_preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace rf::scenario
