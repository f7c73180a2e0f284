#include "rf/scenario/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

#include "rf/io/error.hpp"
#include "rf/sim/signals.hpp"
#include "rf/stl/formula.hpp"

namespace rf::scenario {

using nlohmann::json;

InitialStateSampler::InitialStateSampler(std::vector<InitRange> ranges) : ranges_(std::move(ranges)) {
  for (const auto& r : ranges_) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo < r.hi)) {
      throw ConfigError("init range '" + r.name + "' must satisfy lo < hi");
    }
  }
}

std::vector<double> InitialStateSampler::sample(Rng& rng) const {
  std::vector<double> out;
  out.reserve(ranges_.size());
  for (const auto& r : ranges_) out.push_back(uniform(rng, r.lo, r.hi));
  return out;
}

const char* to_string(AgentType t) { return t == AgentType::Tabular ? "tabular" : "neural"; }

AgentType agent_type_from_string(const std::string& s) {
  if (s == "tabular" || s == "qtable") return AgentType::Tabular;
  if (s == "neural" || s == "dqn") return AgentType::Neural;
  throw ConfigError("unknown agent type: " + s);
}

std::string substitute_constants(const std::string& text, const std::map<std::string, double>& constants) {
  std::string out;
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] != '$') {
      out += text[i++];
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
    const std::string name = text.substr(i + 1, j - i - 1);
    auto it = constants.find(name);
    if (name.empty() || it == constants.end()) throw ConfigError("unknown constant '$" + name + "' in: " + text);
    out += stl::format_number(it->second);
    i = j;
  }
  return out;
}

namespace {

double constant(const std::map<std::string, double>& c, const std::string& name, double fallback) {
  auto it = c.find(name);
  return it == c.end() ? fallback : it->second;
}

void require_signal(const std::set<std::string>& exported, const std::string& name, const std::string& where) {
  if (!exported.count(name)) throw ConfigError(where + " refers to unexported signal '" + name + "'");
}

json ego_to_json(const sim::EgoController& ego) {
  auto acc = [](const sim::AccPd& c) {
    return json{{"kp", c.kp},           {"kd", c.kd},       {"d_set", c.d_set},
                {"theta_min", c.theta_min}, {"theta_max", c.theta_max}, {"gain", c.gain}};
  };
  if (const auto* c = std::get_if<sim::AccPd>(&ego)) {
    json j = acc(*c);
    j["controller"] = "acc_pd";
    return j;
  }
  if (const auto* c = std::get_if<sim::LaneSwitch>(&ego)) {
    return json{{"controller", "lane_switch"},   {"d_safety", c->d_safety},       {"lookahead_time", c->lookahead_time},
                {"cruise_speed", c->cruise_speed}, {"speed_gain", c->speed_gain}, {"max_accel", c->max_accel},
                {"avoid_decel", c->avoid_decel}};
  }
  const auto& c = std::get<sim::YellowLight>(ego);
  return json{{"controller", "yellow_light"},
              {"max_decel", c.max_decel},
              {"yellow_brake_when_stoppable", c.brake_when_stoppable},
              {"acc", acc(c.acc)}};
}

sim::AccPd acc_from_json(const json& j) {
  sim::AccPd c;
  c.kp = j.value("kp", c.kp);
  c.kd = j.value("kd", c.kd);
  c.d_set = j.value("d_set", c.d_set);
  c.theta_min = j.value("theta_min", c.theta_min);
  c.theta_max = j.value("theta_max", c.theta_max);
  c.gain = j.value("gain", c.gain);
  if (!(c.theta_min < c.theta_max)) throw ConfigError("ego: theta_min must be < theta_max");
  return c;
}

sim::EgoController ego_from_json(const json& j) {
  const std::string kind = j.at("controller").get<std::string>();
  if (kind == "acc_pd") return acc_from_json(j);
  if (kind == "lane_switch") {
    sim::LaneSwitch c;
    c.d_safety = j.value("d_safety", c.d_safety);
    c.lookahead_time = j.value("lookahead_time", c.lookahead_time);
    c.cruise_speed = j.value("cruise_speed", c.cruise_speed);
    c.speed_gain = j.value("speed_gain", c.speed_gain);
    c.max_accel = j.value("max_accel", c.max_accel);
    c.avoid_decel = j.value("avoid_decel", c.avoid_decel);
    return c;
  }
  if (kind == "yellow_light") {
    sim::YellowLight c;
    c.max_decel = j.value("max_decel", c.max_decel);
    c.brake_when_stoppable = j.value("yellow_brake_when_stoppable", c.brake_when_stoppable);
    if (j.contains("acc")) c.acc = acc_from_json(j.at("acc"));
    if (!(c.max_decel > 0.0)) throw ConfigError("ego: max_decel must be > 0");
    return c;
  }
  throw ConfigError("unknown ego controller: " + kind);
}

/// World parameters that come from named constants.
void apply_constants(sim::WorldConfig& w, const std::map<std::string, double>& c) {
  w.d_min = constant(c, "d_min", w.d_min);
  w.ego_speed = {constant(c, "ego_v_floor", w.ego_speed.min), constant(c, "ego_v_ceiling", w.ego_speed.max)};
  w.adv_speed = {constant(c, "adv_v_floor", w.adv_speed.min), constant(c, "adv_v_ceiling", w.adv_speed.max)};
  w.y_min = constant(c, "y_min", w.y_min);
  w.y_max = constant(c, "y_max", w.y_max);
  w.accel_noise = constant(c, "accel_noise", w.accel_noise);
  w.collision = w.kind == sim::ScenarioKind::LaneChange ? sim::CollisionModel::Footprint : sim::CollisionModel::BumperGap;
  if (w.kind == sim::ScenarioKind::YellowLight) {
    sim::LightConfig l;
    l.stop_line = constant(c, "stop_line", l.stop_line);
    l.trigger_distance = constant(c, "x_trig", l.trigger_distance);
    l.yellow_duration = constant(c, "tau_y", l.yellow_duration);
    l.intersection_length = constant(c, "intersection_length", l.intersection_length);
    w.light = l;
  } else {
    w.light.reset();
  }
}

json agent_to_json(const AgentSpec& a) {
  json grid = json::array();
  for (const auto& d : a.tabular.grid) grid.push_back({{"signal", d.name}, {"lo", d.lo}, {"hi", d.hi}, {"bins", d.bins}});
  const auto& hp = a.tabular.hp;
  const auto& n = a.neural;
  return json{{"type", to_string(a.type)},
              {"state", a.state},
              {"tabular",
               {{"alpha", hp.alpha},
                {"gamma", hp.gamma},
                {"epsilon", hp.epsilon},
                {"alpha_decay_power", hp.alpha_decay_power},
                {"epsilon_decay_episodes", hp.epsilon_decay_episodes},
                {"epsilon_floor", hp.epsilon_floor},
                {"init_magnitude", a.tabular.init_magnitude},
                {"grid", grid}}},
              {"neural",
               {{"hidden", n.hidden},
                {"activation", neural::to_string(n.activation)},
                {"learning_rate", n.learning_rate},
                {"batch_size", n.batch_size},
                {"capacity", n.capacity},
                {"gamma", n.gamma},
                {"epsilon", n.epsilon},
                {"epsilon_decay_episodes", n.epsilon_decay_episodes},
                {"epsilon_floor", n.epsilon_floor},
                {"reward_scale", n.reward_scale},
                {"output_init_scale", n.output_init_scale},
                {"scales", n.scales}}}};
}

AgentSpec agent_from_json(const json& j) {
  AgentSpec a;
  a.type = agent_type_from_string(j.value("type", std::string("tabular")));
  a.state = j.at("state").get<std::vector<std::string>>();
  if (j.contains("tabular")) {
    const auto& t = j.at("tabular");
    auto& hp = a.tabular.hp;
    hp.alpha = t.value("alpha", hp.alpha);
    hp.gamma = t.value("gamma", hp.gamma);
    hp.epsilon = t.value("epsilon", hp.epsilon);
    hp.alpha_decay_power = t.value("alpha_decay_power", hp.alpha_decay_power);
    hp.epsilon_decay_episodes = t.value("epsilon_decay_episodes", hp.epsilon_decay_episodes);
    hp.epsilon_floor = t.value("epsilon_floor", hp.epsilon_floor);
    a.tabular.init_magnitude = t.value("init_magnitude", 0.0);
    for (const auto& d : t.value("grid", json::array())) {
      a.tabular.grid.push_back(
          {d.at("signal").get<std::string>(), d.at("lo").get<double>(), d.at("hi").get<double>(), d.at("bins").get<std::size_t>()});
    }
  }
  if (j.contains("neural")) {
    const auto& t = j.at("neural");
    auto& n = a.neural;
    n.hidden = t.value("hidden", n.hidden);
    n.activation = neural::activation_from_string(t.value("activation", std::string("relu")));
    n.learning_rate = t.value("learning_rate", n.learning_rate);
    n.batch_size = t.value("batch_size", n.batch_size);
    n.capacity = t.value("capacity", n.capacity);
    n.gamma = t.value("gamma", n.gamma);
    n.epsilon = t.value("epsilon", n.epsilon);
    n.epsilon_decay_episodes = t.value("epsilon_decay_episodes", n.epsilon_decay_episodes);
    n.epsilon_floor = t.value("epsilon_floor", n.epsilon_floor);
    n.reward_scale = t.value("reward_scale", n.reward_scale);
    n.output_init_scale = t.value("output_init_scale", n.output_init_scale);
    n.scales = t.value("scales", n.scales);
  }
  return a;
}

json substitute_rulebook(json rb, const std::map<std::string, double>& constants) {
  rb["goal"] = substitute_constants(rb.at("goal").get<std::string>(), constants);
  if (rb.contains("groups")) {
    for (auto& g : rb["groups"]) {
      for (auto& f : g.at("formulas")) f = substitute_constants(f.get<std::string>(), constants);
    }
  }
  return rb;
}

std::vector<InitRange> ranges_from_json(const json& j) {
  std::vector<InitRange> out;
  for (const auto& key : kInitKeys) {
    if (!j.contains(key)) throw ConfigError("init_ranges: missing '" + key + "'");
    const auto r = j.at(key).get<std::vector<double>>();
    if (r.size() != 2) throw ConfigError("init_ranges: '" + key + "' must be [lo, hi]");
    out.push_back({key, r[0], r[1]});
  }
  for (const auto& [k, v] : j.items()) {
    if (std::find(kInitKeys.begin(), kInitKeys.end(), k) == kInitKeys.end()) {
      throw ConfigError("init_ranges: unknown key '" + k + "'");
    }
  }
  return out;
}

}  // namespace

void validate(const ScenarioConfig& cfg) {
  const auto& w = cfg.world;
  if (!(w.dt > 0.0) || !std::isfinite(w.dt)) throw ConfigError("dt must be > 0");
  if (cfg.horizon < 1) throw ConfigError("horizon must be >= 1");
  if (w.actions.empty()) throw ConfigError("actions: at least one adversary action required");
  for (const auto& a : w.actions) {
    if (!std::isfinite(a.accel) || !std::isfinite(a.lateral_velocity)) throw ConfigError("actions must be finite");
  }
  if (!(w.ego_speed.min <= w.ego_speed.max) || !(w.adv_speed.min <= w.adv_speed.max)) {
    throw ConfigError("speed floors must not exceed ceilings");
  }
  if (!(w.y_min <= w.y_max)) throw ConfigError("y_min must not exceed y_max");
  const bool controller_ok =
      (w.kind == sim::ScenarioKind::LaneFollow && std::holds_alternative<sim::AccPd>(w.ego)) ||
      (w.kind == sim::ScenarioKind::LaneChange && std::holds_alternative<sim::LaneSwitch>(w.ego)) ||
      (w.kind == sim::ScenarioKind::YellowLight && std::holds_alternative<sim::YellowLight>(w.ego));
  if (!controller_ok) throw ConfigError(std::string("ego controller does not match scenario ") + sim::to_string(w.kind));
  if (!cfg.rulebook) throw ConfigError("missing rulebook");
  if (cfg.rulebook->horizon() != cfg.horizon) throw ConfigError("rulebook horizon differs from scenario horizon");

  const auto names = sim::signal_names(w);
  const std::set<std::string> exported(names.begin(), names.end());
  for (const auto& s : stl::signals_of(*cfg.rulebook->goal())) require_signal(exported, s, "goal");
  for (const auto& g : cfg.rulebook->groups()) {
    for (const auto& c : g.constraints) {
      for (const auto& s : stl::signals_of(*c.formula)) require_signal(exported, s, "constraint " + c.id);
    }
  }

  if (cfg.init_ranges.size() != kInitKeys.size()) throw ConfigError("init_ranges must cover d, v_ego, v_adv");
  for (std::size_t i = 0; i < kInitKeys.size(); ++i) {
    if (cfg.init_ranges[i].name != kInitKeys[i]) throw ConfigError("init_ranges must be ordered d, v_ego, v_adv");
  }
  InitialStateSampler{cfg.init_ranges};
  if (cfg.initial_state) {
    if (cfg.initial_state->size() != kInitKeys.size()) throw ConfigError("initial_state must give d, v_ego, v_adv");
    for (double v : *cfg.initial_state) {
      if (!std::isfinite(v)) throw ConfigError("initial_state must be finite");
    }
  }

  const auto& a = cfg.agent;
  if (a.state.empty()) throw ConfigError("agent.state must list at least one signal");
  for (const auto& s : a.state) {
    if (s != kViolatedFeature) require_signal(exported, s, "agent.state");
  }
  const auto& g = a.tabular.grid;
  if (g.size() != a.state.size()) throw ConfigError("agent.tabular.grid must have one entry per state signal");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i].name != a.state[i]) throw ConfigError("agent.tabular.grid order must follow agent.state");
    if (g[i].bins < 1 || !(g[i].lo < g[i].hi)) throw ConfigError("agent.tabular.grid: need bins >= 1 and lo < hi");
  }
  const auto& hp = a.tabular.hp;
  if (!(hp.alpha > 0.0 && hp.alpha <= 1.0)) throw ConfigError("agent.tabular.alpha must be in (0, 1]");
  if (!(hp.gamma >= 0.0 && hp.gamma <= 1.0)) throw ConfigError("agent.tabular.gamma must be in [0, 1]");
  if (!(hp.epsilon >= 0.0 && hp.epsilon <= 1.0)) throw ConfigError("agent.tabular.epsilon must be in [0, 1]");
  const auto& n = a.neural;
  if (n.scales.size() != a.state.size()) throw ConfigError("agent.neural.scales must have one entry per state signal");
  for (double s : n.scales) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("agent.neural.scales must be > 0");
  }
  if (!(n.output_init_scale >= 0.0) || !std::isfinite(n.output_init_scale)) {
    throw ConfigError("agent.neural.output_init_scale must be >= 0");
  }
  if (!(n.reward_scale > 0.0) || !std::isfinite(n.reward_scale)) throw ConfigError("agent.neural.reward_scale must be > 0");
  if (n.batch_size < 1 || n.capacity < n.batch_size) throw ConfigError("agent.neural: need 1 <= batch_size <= capacity");
  if (!(n.learning_rate > 0.0)) throw ConfigError("agent.neural.learning_rate must be > 0");
  if (!(n.gamma >= 0.0 && n.gamma <= 1.0)) throw ConfigError("agent.neural.gamma must be in [0, 1]");
  if (!(n.epsilon >= 0.0 && n.epsilon <= 1.0)) throw ConfigError("agent.neural.epsilon must be in [0, 1]");
  for (std::size_t h : n.hidden) {
    if (h == 0) throw ConfigError("agent.neural.hidden sizes must be positive");
  }
}

std::pair<sim::VehicleState, sim::VehicleState> initial_vehicles(const ScenarioConfig& cfg,
                                                                 const std::vector<double>& init) {
  if (init.size() != kInitKeys.size()) throw ConfigError("initial condition must give d, v_ego, v_adv");
  const auto& c = cfg.constants;
  sim::VehicleState ego, adv;
  ego.length = adv.length = constant(c, "vehicle_length", ego.length);
  ego.width = adv.width = constant(c, "vehicle_width", ego.width);
  const double d = init[0];
  ego.v = init[1];
  adv.v = init[2];
  switch (cfg.kind()) {
    case sim::ScenarioKind::LaneFollow:
      adv.x = d;
      break;
    case sim::ScenarioKind::LaneChange:
      ego.y = constant(c, "ego_lane_y", 0.0);
      adv.y = constant(c, "adv_lane_y", cfg.world.y_max);
      adv.x = d;
      break;
    case sim::ScenarioKind::YellowLight:
      adv.x = constant(c, "adv_start", 0.0);
      ego.x = adv.x - d;
      break;
  }
  return {ego, adv};
}

sim::WorldState sample_initial_world(const ScenarioConfig& cfg, Rng& rng) {
  const auto init = cfg.initial_state ? *cfg.initial_state : InitialStateSampler(cfg.init_ranges).sample(rng);
  const auto [ego, adv] = initial_vehicles(cfg, init);
  return sim::initial_world(cfg.world, ego, adv);
}

ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig cfg;
  try {
    cfg.name = j.value("name", std::string());
    cfg.world.kind = sim::scenario_kind_from_string(j.at("scenario").get<std::string>());
    cfg.world.dt = j.at("dt").get<double>();
    cfg.horizon = j.at("horizon").get<std::size_t>();
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.constants = j.value("constants", std::map<std::string, double>{});
    for (const auto& aj : j.at("actions")) {
      cfg.world.actions.push_back({aj.value("accel", 0.0), aj.value("lateral_velocity", 0.0)});
    }
    cfg.world.ego = ego_from_json(j.at("ego"));
    apply_constants(cfg.world, cfg.constants);
    if (cfg.horizon < 1) throw ConfigError("horizon must be >= 1");
    cfg.rulebook = std::make_shared<const rulebook::Rulebook>(
        rulebook::rulebook_from_json(substitute_rulebook(j.at("rulebook"), cfg.constants), cfg.horizon));
    cfg.init_ranges = ranges_from_json(j.at("init_ranges"));
    if (j.contains("initial_state") && !j.at("initial_state").is_null()) {
      const auto& s = j.at("initial_state");
      std::vector<double> v;
      for (const auto& key : kInitKeys) v.push_back(s.at(key).get<double>());
      cfg.initial_state = v;
    }
    cfg.agent = agent_from_json(j.at("agent"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
  json actions = json::array();
  for (const auto& a : cfg.world.actions) actions.push_back({{"accel", a.accel}, {"lateral_velocity", a.lateral_velocity}});
  json ranges;
  for (const auto& r : cfg.init_ranges) ranges[r.name] = {r.lo, r.hi};
  json j{{"name", cfg.name},
         {"scenario", sim::to_string(cfg.kind())},
         {"dt", cfg.world.dt},
         {"horizon", cfg.horizon},
         {"seed", cfg.seed},
         {"actions", actions},
         {"ego", ego_to_json(cfg.world.ego)},
         {"constants", cfg.constants},
         {"rulebook", rulebook::rulebook_to_json(*cfg.rulebook)},
         {"init_ranges", ranges},
         {"agent", agent_to_json(cfg.agent)}};
  if (cfg.initial_state) {
    json s;
    for (std::size_t i = 0; i < kInitKeys.size(); ++i) s[kInitKeys[i]] = (*cfg.initial_state)[i];
    j["initial_state"] = s;
  }
  return j;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("scenario " + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

namespace {

/// Assembles a config from JSON pieces so presets and files go through the same path.
ScenarioConfig assemble(json j) { return scenario_from_json(j); }

json tabular_section(const std::vector<tabular::Dimension>& grid, double init_magnitude) {
  json g = json::array();
  for (const auto& d : grid) g.push_back({{"signal", d.name}, {"lo", d.lo}, {"hi", d.hi}, {"bins", d.bins}});
  return {{"alpha", 0.1}, {"gamma", 0.95}, {"epsilon", 0.1}, {"init_magnitude", init_magnitude}, {"grid", g}};
}

json neural_section(const std::vector<double>& scales) {
  return {{"hidden", {32, 32}}, {"activation", "relu"}, {"learning_rate", 1e-3}, {"batch_size", 32},
          {"capacity", 10000},  {"gamma", 0.95},        {"epsilon", 0.1},        {"scales", scales},
          {"reward_scale", 0.01}};
}

/// Linear epsilon decay to the floor over the first 60 episodes.
json decaying(json section) {
  section["epsilon_decay_episodes"] = 60;
  section["epsilon_floor"] = 0.01;
  return section;
}

json case_I_json() {
  return {
      {"name", "case1"},
      {"scenario", "lane_follow"},
      {"dt", 0.1},
      {"horizon", 600},
      {"seed", 1},
      {"actions", {{{"accel", -3.0}}, {{"accel", 0.0}}, {{"accel", 3.0}}}},
      {"ego", {{"controller", "acc_pd"}, {"kp", 0.5}, {"kd", 1.0}, {"d_set", 10.0}, {"theta_min", -1.0}, {"theta_max", 1.0}, {"gain", 4.0}}},
      {"constants",
       {{"d_min", 4.74},
        {"v_lim", 30.0},
        {"v_min", 2.0},
        {"T", 60.0},
        {"vehicle_length", 4.54},
        {"vehicle_width", 2.0},
        {"ego_v_floor", 0.0},
        {"ego_v_ceiling", 40.0},
        {"adv_v_floor", 0.0},
        {"adv_v_ceiling", 40.0}}},
      {"rulebook",
       {{"goal", "F[0,$T](d <= $d_min)"},
        {"goal_reward", 10.0},
        {"groups", {{{"priority", 0}, {"lambda", 100.0}, {"formulas", {"G(v_adv <= $v_lim)", "G(v_adv >= $v_min)"}}, {"ids", {"v_max", "v_min"}}}}}}},
      {"init_ranges", {{"d", {6.0, 30.0}}, {"v_ego", {5.0, 25.0}}, {"v_adv", {5.0, 25.0}}}},
      {"agent",
       {{"type", "tabular"},
        {"state", {"d", "v_ego", "v_adv", kViolatedFeature}},
        {"tabular",
         decaying(tabular_section(
             {{"d", 0.0, 50.0, 25}, {"v_ego", 0.0, 40.0, 20}, {"v_adv", 0.0, 40.0, 20}, {kViolatedFeature, 0.0, 2.0, 2}},
             0.0))},
        {"neural", decaying(neural_section({50.0, 40.0, 40.0, 1.0}))}}},
  };
}

}  // namespace

ScenarioConfig build_case_I() { return assemble(case_I_json()); }

ScenarioConfig build_case_I_relaxed() {
  json j = case_I_json();
  j["name"] = "case1_relaxed";
  j["constants"]["d_min"] = 5.5;
  return assemble(j);
}

ScenarioConfig build_case_I_micro() {
  json j = case_I_json();
  j["name"] = "case1_micro";
  j["horizon"] = 60;
  j["constants"]["T"] = 6.0;
  j["initial_state"] = {{"d", 12.0}, {"v_ego", 16.0}, {"v_adv", 12.0}};
  j["agent"]["state"] = {"d", "v_ego", "v_adv"};
  j["agent"]["tabular"] =
      tabular_section({{"d", 0.0, 20.0, 10}, {"v_ego", 0.0, 24.0, 6}, {"v_adv", 0.0, 24.0, 6}}, 0.0);
  j["agent"]["neural"] = neural_section({20.0, 24.0, 24.0});
  return assemble(j);
}

ScenarioConfig build_case_II() {
  json j{
      {"name", "case2"},
      {"scenario", "lane_change"},
      {"dt", 0.1},
      {"horizon", 300},
      {"seed", 1},
      {"actions",
       {{{"accel", -2.0}, {"lateral_velocity", -1.0}},
        {{"accel", 0.0}, {"lateral_velocity", -1.0}},
        {{"accel", 2.0}, {"lateral_velocity", -1.0}},
        {{"accel", -2.0}, {"lateral_velocity", 0.0}},
        {{"accel", 0.0}, {"lateral_velocity", 0.0}},
        {{"accel", 2.0}, {"lateral_velocity", 0.0}}}},
      {"ego",
       {{"controller", "lane_switch"},
        {"d_safety", 2.0},
        {"lookahead_time", 1.0},
        {"cruise_speed", 15.0},
        {"speed_gain", 0.5},
        {"max_accel", 2.0},
        {"avoid_decel", 4.0}}},
      {"constants",
       {{"vehicle_length", 4.54},
        {"vehicle_width", 2.0},
        {"ego_v_floor", 0.0},
        {"ego_v_ceiling", 40.0},
        {"adv_v_floor", 0.0},
        {"adv_v_ceiling", 40.0},
        {"y_min", 0.0},
        {"y_max", 3.5},
        {"ego_lane_y", 0.0},
        {"adv_lane_y", 3.5}}},
      {"rulebook",
       {{"goal", "F(collision >= 1)"},
        {"goal_reward", 10.0},
        {"groups", {{{"priority", 0}, {"lambda", 100.0}, {"formulas", {"G(x_adv_rear - x_ego_front >= 0)"}}, {"ids", {"ahead"}}}}}}},
      {"init_ranges", {{"d", {6.0, 25.0}}, {"v_ego", {8.0, 15.0}}, {"v_adv", {8.0, 15.0}}}},
      {"agent",
       {{"type", "tabular"},
        {"state", {"d", "d_lat", "v_ego", "v_adv"}},
        {"tabular",
         tabular_section({{"d", -5.0, 35.0, 20}, {"d_lat", 0.0, 3.5, 7}, {"v_ego", 0.0, 30.0, 10}, {"v_adv", 0.0, 30.0, 10}},
                         0.01)},
        {"neural", neural_section({30.0, 3.5, 30.0, 30.0})}}},
  };
  return assemble(j);
}

ScenarioConfig build_case_III() {
  json j{
      {"name", "case3"},
      {"scenario", "yellow_light"},
      {"dt", 0.1},
      {"horizon", 150},
      {"seed", 1},
      {"actions", {{{"accel", -3.0}}, {{"accel", 0.0}}, {{"accel", 3.0}}}},
      {"ego",
       {{"controller", "yellow_light"},
        {"max_decel", 6.0},
        {"yellow_brake_when_stoppable", false},
        {"acc", {{"kp", 0.5}, {"kd", 1.0}, {"d_set", 10.0}, {"theta_min", -1.0}, {"theta_max", 1.0}, {"gain", 4.0}}}}},
      {"constants",
       {{"d_min", 4.74},
        {"vehicle_length", 4.54},
        {"vehicle_width", 2.0},
        {"ego_v_floor", 0.0},
        {"ego_v_ceiling", 40.0},
        {"adv_v_floor", -5.0},
        {"adv_v_ceiling", 40.0},
        {"stop_line", 30.0},
        {"x_trig", 30.0},
        {"tau_y", 2.0},
        {"intersection_length", 15.0},
        {"adv_start", 0.0}}},
      {"rulebook",
       {{"goal", "F(ego_in_intersection >= 1 && light >= 2) || F(d <= $d_min)"},
        {"goal_reward", 10.0},
        {"groups",
         {{{"priority", 0},
           {"lambda", 100.0},
           {"formulas", {"G(v_adv >= 0)", "G(!(adv_crossed_line >= 1 && light >= 2) || adv_crossed_before_red >= 1)"}},
           {"ids", {"no_reverse", "no_red"}}}}}}},
      {"init_ranges", {{"d", {8.0, 20.0}}, {"v_ego", {8.0, 14.0}}, {"v_adv", {8.0, 14.0}}}},
      {"agent",
       {{"type", "tabular"},
        {"state", {"x_adv", "v_adv", "d", "light"}},
        {"tabular",
         tabular_section({{"x_adv", -5.0, 45.0, 25}, {"v_adv", -5.0, 25.0, 15}, {"d", 0.0, 40.0, 20}, {"light", 0.0, 3.0, 3}},
                         0.01)},
        {"neural", neural_section({50.0, 30.0, 40.0, 2.0})}}},
  };
  return assemble(j);
}

ScenarioConfig build_preset(const std::string& name) {
  if (name == "case1") return build_case_I();
  if (name == "case1_relaxed") return build_case_I_relaxed();
  if (name == "case1_micro") return build_case_I_micro();
  if (name == "case2") return build_case_II();
  if (name == "case3") return build_case_III();
  throw ConfigError("unknown preset: " + name);
}

std::vector<std::string> preset_names() { return {"case1", "case1_relaxed", "case1_micro", "case2", "case3"}; }

}  // namespace rf::scenario
