#include "rf/harness/replay.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>

#include "rf/io/binary.hpp"
#include "rf/rulebook/rulebook.hpp"
#include "rf/sim/signals.hpp"
#include "rf/stl/trace.hpp"

namespace rf::harness {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool same_vehicle(const sim::VehicleState& a, const sim::VehicleState& b) {
  auto eq = [](double x, double y) { return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y); };
  return eq(a.x, b.x) && eq(a.y, b.y) && eq(a.v, b.v) && eq(a.v_lat, b.v_lat);
}

bool same_world(const sim::WorldState& a, const sim::WorldState& b) {
  if (a.agents.size() != b.agents.size() || a.step != b.step) return false;
  for (std::size_t i = 0; i < a.agents.size(); ++i) {
    if (!same_vehicle(a.agents[i], b.agents[i])) return false;
  }
  if (a.light.has_value() != b.light.has_value()) return false;
  return !a.light || (a.light->color == b.light->color && a.light->steps_in_state == b.light->steps_in_state);
}

}  // namespace

ReplayReport replay(const EpisodeTrace& trace) {
  const auto cfg = scenario::scenario_from_json(nlohmann::json::parse(trace.config_json));
  const auto& rb = *cfg.rulebook;
  ReplayReport rep;
  rep.samples = trace.samples();

  const auto ids = rb.constraint_ids();
  if (ids != trace.constraint_ids) {
    rep.mismatches.push_back({0, "constraint_ids", "logged", "scenario"});
    return rep;
  }

  rep.dynamics_checked = cfg.world.accel_noise == 0.0;
  if (rep.dynamics_checked) {
    sim::WorldState w = trace.states.front();
    for (std::size_t k = 0; k < trace.actions.size(); ++k) {
      w = sim::step(w, trace.actions[k], cfg.world);
      if (!same_world(w, trace.states[k + 1])) {
        rep.mismatches.push_back({k + 1, "state", "logged", "re-simulated differs"});
        w = trace.states[k + 1];
      }
    }
  }

  sim::SignalDeriver deriver(cfg.world);
  stl::Trace signals(cfg.dt(), deriver.names());
  for (const auto& s : trace.states) signals.push_sample(deriver.next(s));

  for (std::size_t k = 0; k < trace.samples(); ++k) {
    const auto v = rulebook::step_reward(rb, signals, k);
    const auto& logged = trace.verdicts[k];
    if (std::bit_cast<std::uint64_t>(v.reward) != std::bit_cast<std::uint64_t>(logged.reward)) {
      rep.mismatches.push_back({k, "reward", num(logged.reward), num(v.reward)});
    }
    if (v.goal_attained != logged.goal_attained) {
      rep.mismatches.push_back({k, "goal", logged.goal_attained ? "1" : "0", v.goal_attained ? "1" : "0"});
    }
    for (std::size_t c = 0; c < v.violations.size(); ++c) {
      const bool got = v.violations[c].second;
      const bool had = c < logged.violations.size() && logged.violations[c].second;
      if (got != had) rep.mismatches.push_back({k, "viol_" + ids[c], had ? "1" : "0", got ? "1" : "0"});
      if (got && std::find(rep.violated_ids.begin(), rep.violated_ids.end(), ids[c]) == rep.violated_ids.end()) {
        rep.violated_ids.push_back(ids[c]);
      }
    }
    if (v.any_violation()) rep.constraints_violated = true;
    if (v.goal_attained && !rep.goal_attained) {
      rep.goal_attained = true;
      rep.goal_step = k;
    }
  }
  return rep;
}

ReplayReport replay_file(const std::string& path) { return replay(decode_trace(io::read_file(path))); }

void print_report(const ReplayReport& r, std::ostream& out) {
  out << "samples: " << r.samples << '\n';
  if (r.goal_attained) {
    out << "verdict: goal attained at step " << *r.goal_step << '\n';
  } else {
    out << "verdict: goal not attained\n";
  }
  out << "constraints: " << (r.constraints_violated ? "violated" : "respected");
  for (const auto& id : r.violated_ids) out << ' ' << id;
  out << '\n';
  out << "dynamics: " << (r.dynamics_checked ? "re-simulated" : "not checked (noise enabled)") << '\n';
  out << "mismatches: " << r.mismatches.size() << '\n';
  for (const auto& m : r.mismatches) {
    out << "  step " << m.step << ' ' << m.field << ": logged " << m.logged << ", recomputed " << m.recomputed << '\n';
  }
}

}  // namespace rf::harness
