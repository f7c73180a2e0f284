#include "rf/sim/signals.hpp"

namespace rf::sim {

std::vector<std::string> signal_names(const WorldConfig& cfg) {
  std::vector<std::string> names{"x_ego", "y_ego", "v_ego", "vlat_ego", "x_adv",       "y_adv",      "v_adv",
                                 "vlat_adv", "d", "d_lat", "x_ego_front", "x_adv_rear", "collision"};
  if (cfg.kind == ScenarioKind::LaneChange) names.push_back("lookahead");
  if (cfg.kind == ScenarioKind::YellowLight) {
    for (const char* n : {"light", "d_traffic_light", "adv_crossed_line", "adv_crossed_before_red",
                          "ego_crossed_line", "ego_in_intersection"}) {
      names.push_back(n);
    }
  }
  return names;
}

SignalDeriver::SignalDeriver(const WorldConfig& cfg) : cfg_(&cfg), names_(signal_names(cfg)) {}

std::vector<double> SignalDeriver::next(const WorldState& w) {
  const auto& ego = w.ego();
  const auto& adv = w.adversary();
  std::vector<double> row{ego.x,         ego.y,         ego.v,
                          ego.v_lat,     adv.x,         adv.y,
                          adv.v,         adv.v_lat,     bumper_gap(w),
                          lateral_distance(w), ego.x,   adv.rear(),
                          collision(w, *cfg_) ? 1.0 : 0.0};
  if (cfg_->kind == ScenarioKind::LaneChange) {
    const double tau = std::holds_alternative<LaneSwitch>(cfg_->ego) ? std::get<LaneSwitch>(cfg_->ego).lookahead_time
                                                                     : 0.0;
    row.push_back(lookahead_distance(w, tau));
  }
  if (cfg_->kind == ScenarioKind::YellowLight) {
    const LightConfig lc = cfg_->light.value_or(LightConfig{});
    const LightColor color = w.light ? w.light->color : LightColor::Green;
    if (!adv_crossed_ && adv.x > lc.stop_line) {
      adv_crossed_ = true;
      adv_crossed_before_red_ = color != LightColor::Red;
    }
    if (ego.x > lc.stop_line) ego_crossed_ = true;
    const bool in_intersection = ego.x > lc.stop_line && ego.rear() < lc.stop_line + lc.intersection_length;
    row.push_back(static_cast<double>(color));
    row.push_back(lc.stop_line - ego.x);
    row.push_back(adv_crossed_ ? 1.0 : 0.0);
    row.push_back(adv_crossed_before_red_ ? 1.0 : 0.0);
    row.push_back(ego_crossed_ ? 1.0 : 0.0);
    row.push_back(in_intersection ? 1.0 : 0.0);
  }
  return row;
}

}  // namespace rf::sim
