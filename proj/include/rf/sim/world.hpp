#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rf/io/random.hpp"

namespace rf::sim {

enum class ScenarioKind { LaneFollow, LaneChange, YellowLight };

const char* to_string(ScenarioKind k);
ScenarioKind scenario_kind_from_string(const std::string& s);

/// Longitudinal position x is the front bumper; y is the lateral centre line.
struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;
  double v_lat = 0.0;
  double length = 4.54;
  double width = 2.0;

  double rear() const { return x - length; }
};

/// Throttle theta = clamp(Kp (d - d_set) + Kd (v_adv - v_ego), theta_min,
/// theta_max); acceleration = gain * theta.
struct AccPd {
  double kp = 0.5;
  double kd = 1.0;
  double d_set = 10.0;
  double theta_min = -1.0;
  double theta_max = 1.0;
  double gain = 4.0;
};

/// Cruising (speed tracking) while the lookahead D = d_lat - v_toward * tau
/// exceeds d_safety, constant braking otherwise.
struct LaneSwitch {
  double d_safety = 2.0;
  double lookahead_time = 1.0;
  double cruise_speed = 20.0;
  double speed_gain = 0.5;
  double max_accel = 2.0;
  double avoid_decel = 4.0;
};

/// Maximum braking when the stopping-distance test fires during yellow/red
/// before the stop line, ACC on the lead vehicle otherwise.
struct YellowLight {
  double max_decel = 6.0;
  AccPd acc;
  /// false: brake iff d_stop >= d_traffic_light (literal rule);
  /// true: brake iff d_stop <= d_traffic_light.
  bool brake_when_stoppable = false;
};

using EgoController = std::variant<AccPd, LaneSwitch, YellowLight>;

enum class LightColor : std::uint8_t { Green = 0, Yellow = 1, Red = 2 };

struct LightConfig {
  double stop_line = 30.0;
  double trigger_distance = 30.0;
  double yellow_duration = 2.0;
  double intersection_length = 15.0;
};

struct TrafficLight {
  LightColor color = LightColor::Green;
  std::uint64_t steps_in_state = 0;
};

/// Adversary command: longitudinal acceleration and lateral velocity.
struct Action {
  double accel = 0.0;
  double lateral_velocity = 0.0;
};

struct SpeedLimits {
  double min = 0.0;
  double max = 40.0;
};

enum class CollisionModel { BumperGap, Footprint };

struct WorldConfig {
  ScenarioKind kind = ScenarioKind::LaneFollow;
  double dt = 0.1;
  EgoController ego = AccPd{};
  std::vector<Action> actions;
  SpeedLimits ego_speed{0.0, 40.0};
  SpeedLimits adv_speed{0.0, 40.0};
  double y_min = 0.0;  // road edges for lateral motion
  double y_max = 3.5;
  CollisionModel collision = CollisionModel::BumperGap;
  double d_min = 4.74;
  std::optional<LightConfig> light;
  /// Std-dev of Gaussian noise on the adversary acceleration; 0 disables.
  double accel_noise = 0.0;
};

/// agents[0] is the ego vehicle, agents[1] the adversary.
struct WorldState {
  std::vector<VehicleState> agents;
  std::optional<TrafficLight> light;
  std::uint64_t step = 0;

  const VehicleState& ego() const { return agents.at(0); }
  const VehicleState& adversary() const { return agents.at(1); }
  double time(double dt) const { return static_cast<double>(step) * dt; }
};

class SimulationFault : public std::runtime_error {
 public:
  SimulationFault(const std::string& what, WorldState state) : std::runtime_error(what), state_(std::move(state)) {}
  const WorldState& state() const { return state_; }

 private:
  WorldState state_;
};

/// World at t = 0; the light (if any) is created green and immediately
/// checked against its trigger.
WorldState initial_world(const WorldConfig& cfg, const VehicleState& ego, const VehicleState& adversary);

/// Advance one timestep: adversary command, ego control from the current
/// world, explicit Euler integration, light update, contact resolution.
/// noise_rng is only consulted when cfg.accel_noise > 0.
WorldState step(const WorldState& world, std::size_t action, const WorldConfig& cfg, Rng* noise_rng = nullptr);

/// Ego acceleration (m/s^2) commanded from the current world.
double ego_control(const WorldState& world, const WorldConfig& cfg);

/// Front-bumper gap x_adv - x_ego.
double bumper_gap(const WorldState& world);
/// Centre-line lateral distance |y_adv - y_ego|.
double lateral_distance(const WorldState& world);
/// D = d_lat - v_toward * tau, with v_toward the adversary's lateral speed towards the ego.
double lookahead_distance(const WorldState& world, double lookahead_time);
/// Remaining yellow time in seconds (0 when red, the full duration when green).
double yellow_time_remaining(const TrafficLight& light, const LightConfig& cfg, double dt);
/// v t + 0.5 a t^2 as used by the yellow-light controller.
double stopping_distance(double v, double t, double max_decel);

bool footprints_overlap(const VehicleState& a, const VehicleState& b);
bool collision(const WorldState& world, const WorldConfig& cfg);

}  // namespace rf::sim
