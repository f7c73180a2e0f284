#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rf/sim/world.hpp"

namespace rf::sim {

/// Exported signal names for a scenario kind, in trace column order.
///
/// All kinds: x_ego y_ego v_ego vlat_ego x_adv y_adv v_adv vlat_adv d d_lat
///            x_ego_front x_adv_rear collision
/// lane_change adds: lookahead
/// yellow_light adds: light d_traffic_light adv_crossed_line
///                    adv_crossed_before_red ego_crossed_line ego_in_intersection
std::vector<std::string> signal_names(const WorldConfig& cfg);

/// Derived-signal computation over a sequence of world states. Crossing
/// flags latch, so samples must be fed in order; identical primitive
/// sequences always produce identical signal rows.
class SignalDeriver {
 public:
  explicit SignalDeriver(const WorldConfig& cfg);

  std::vector<double> next(const WorldState& world);
  const std::vector<std::string>& names() const { return names_; }

 private:
  const WorldConfig* cfg_;
  std::vector<std::string> names_;
  bool adv_crossed_ = false;
  bool adv_crossed_before_red_ = false;
  bool ego_crossed_ = false;
};

}  // namespace rf::sim
