#include "rf/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rf::sim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double acc_pd(const AccPd& c, const WorldState& w) {
  const double pd = c.kp * (bumper_gap(w) - c.d_set) + c.kd * (w.adversary().v - w.ego().v);
  return c.gain * std::clamp(pd, c.theta_min, c.theta_max);
}

std::uint64_t yellow_steps(const LightConfig& cfg, double dt) {
  return static_cast<std::uint64_t>(std::llround(cfg.yellow_duration / dt));
}

void advance_light(TrafficLight& light, const LightConfig& cfg, const VehicleState& adversary, double dt) {
  switch (light.color) {
    case LightColor::Green:
      if (cfg.stop_line - adversary.x <= cfg.trigger_distance) {
        light.color = LightColor::Yellow;
        light.steps_in_state = 0;
      }
      break;
    case LightColor::Yellow:
      if (++light.steps_in_state >= yellow_steps(cfg, dt)) {
        light.color = LightColor::Red;
        light.steps_in_state = 0;
      }
      break;
    case LightColor::Red:
      ++light.steps_in_state;
      break;
  }
}

double standard_normal(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

bool finite(const VehicleState& s) {
  return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.v) && std::isfinite(s.v_lat);
}

}  // namespace

const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::LaneFollow: return "lane_follow";
    case ScenarioKind::LaneChange: return "lane_change";
    case ScenarioKind::YellowLight: return "yellow_light";
  }
  return "?";
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
  if (s == "lane_follow") return ScenarioKind::LaneFollow;
  if (s == "lane_change") return ScenarioKind::LaneChange;
  if (s == "yellow_light") return ScenarioKind::YellowLight;
  throw std::invalid_argument("unknown scenario kind: " + s);
}

double bumper_gap(const WorldState& w) { return w.adversary().x - w.ego().x; }

double lateral_distance(const WorldState& w) { return std::fabs(w.adversary().y - w.ego().y); }

double lookahead_distance(const WorldState& w, double lookahead_time) {
  const double side = w.adversary().y - w.ego().y;
  // Positive when the adversary moves towards the ego's centre line.
  const double toward = side > 0.0 ? -w.adversary().v_lat : (side < 0.0 ? w.adversary().v_lat : 0.0);
  return std::fabs(side) - toward * lookahead_time;
}

double yellow_time_remaining(const TrafficLight& light, const LightConfig& cfg, double dt) {
  switch (light.color) {
    case LightColor::Green: return cfg.yellow_duration;
    case LightColor::Yellow:
      return std::max(0.0, cfg.yellow_duration - static_cast<double>(light.steps_in_state) * dt);
    case LightColor::Red: return 0.0;
  }
  return 0.0;
}

double stopping_distance(double v, double t, double max_decel) { return v * t + 0.5 * max_decel * t * t; }

double ego_control(const WorldState& w, const WorldConfig& cfg) {
  return std::visit(
      Overloaded{
          [&](const AccPd& c) { return acc_pd(c, w); },
          [&](const LaneSwitch& c) {
            if (lookahead_distance(w, c.lookahead_time) > c.d_safety) {
              return std::clamp(c.speed_gain * (c.cruise_speed - w.ego().v), -c.max_accel, c.max_accel);
            }
            return -c.avoid_decel;
          },
          [&](const YellowLight& c) {
            if (w.light && cfg.light && w.light->color != LightColor::Green) {
              const double to_line = cfg.light->stop_line - w.ego().x;
              if (to_line > 0.0) {
                const double t = yellow_time_remaining(*w.light, *cfg.light, cfg.dt);
                const double d_stop = stopping_distance(w.ego().v, t, c.max_decel);
                const bool brake = c.brake_when_stoppable ? d_stop <= to_line : d_stop >= to_line;
                if (brake) return -c.max_decel;
              }
            }
            return acc_pd(c.acc, w);
          },
      },
      cfg.ego);
}

bool footprints_overlap(const VehicleState& a, const VehicleState& b) {
  const bool lon = a.x >= b.rear() && b.x >= a.rear();
  const bool lat = std::fabs(a.y - b.y) <= 0.5 * (a.width + b.width);
  return lon && lat;
}

bool collision(const WorldState& w, const WorldConfig& cfg) {
  if (cfg.collision == CollisionModel::Footprint) return footprints_overlap(w.ego(), w.adversary());
  return bumper_gap(w) <= cfg.d_min;
}

WorldState initial_world(const WorldConfig& cfg, const VehicleState& ego, const VehicleState& adversary) {
  WorldState w;
  w.agents = {ego, adversary};
  if (cfg.light) {
    w.light = TrafficLight{};
    if (cfg.light->stop_line - adversary.x <= cfg.light->trigger_distance) w.light->color = LightColor::Yellow;
  }
  return w;
}

WorldState step(const WorldState& world, std::size_t action, const WorldConfig& cfg, Rng* noise_rng) {
  if (action >= cfg.actions.size()) throw std::out_of_range("adversary action index out of range");
  const Action& cmd = cfg.actions[action];

  double adv_accel = cmd.accel;
  if (cfg.accel_noise > 0.0 && noise_rng) adv_accel += cfg.accel_noise * standard_normal(*noise_rng);
  const double ego_accel = ego_control(world, cfg);

  WorldState next = world;
  auto& ego = next.agents[0];
  auto& adv = next.agents[1];

  adv.v_lat = cmd.lateral_velocity;
  ego.v_lat = 0.0;

  ego.x += ego.v * cfg.dt;
  adv.x += adv.v * cfg.dt;
  adv.y += adv.v_lat * cfg.dt;
  if (adv.y < cfg.y_min || adv.y > cfg.y_max) {
    adv.y = std::clamp(adv.y, cfg.y_min, cfg.y_max);
    adv.v_lat = 0.0;
  }
  ego.v = std::clamp(ego.v + ego_accel * cfg.dt, cfg.ego_speed.min, cfg.ego_speed.max);
  adv.v = std::clamp(adv.v + adv_accel * cfg.dt, cfg.adv_speed.min, cfg.adv_speed.max);

  if (next.light && cfg.light) advance_light(*next.light, *cfg.light, adv, cfg.dt);

  // Rear-end contact: the ego was behind the adversary's rear and the
  // footprints now overlap, so place the bumpers in contact.
  if (cfg.collision == CollisionModel::Footprint && world.adversary().rear() - world.ego().x >= 0.0 &&
      footprints_overlap(ego, adv)) {
    ego.x = adv.rear();
  }

  ++next.step;
  if (!finite(ego) || !finite(adv)) {
    throw SimulationFault("non-finite vehicle state at step " + std::to_string(next.step), next);
  }
  return next;
}

}  // namespace rf::sim
