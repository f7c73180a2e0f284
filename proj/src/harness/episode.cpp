#include "rf/harness/episode.hpp"

#include <chrono>
#include <cstdio>

#include "rf/io/binary.hpp"
#include "rf/sim/signals.hpp"
#include "rf/stl/trace.hpp"

namespace rf::harness {

namespace {

constexpr io::Magic kTraceMagic{'R', 'F', 'T', 'R'};
constexpr std::uint32_t kTraceVersion = 1;

std::string g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::vector<std::uint8_t> encode_trace(const EpisodeTrace& tr) {
  if (tr.verdicts.size() != tr.states.size() || tr.actions.size() + 1 != tr.states.size()) {
    throw std::invalid_argument("encode_trace: inconsistent sample/action/verdict counts");
  }
  io::ByteWriter w(kTraceMagic, kTraceVersion);
  w.str(tr.config_json);
  w.u64(tr.seed);
  w.u64(tr.episode);
  w.u32(static_cast<std::uint32_t>(tr.constraint_ids.size()));
  for (const auto& id : tr.constraint_ids) w.str(id);
  w.u64(tr.states.size());
  const std::size_t agents = tr.states.empty() ? 0 : tr.states.front().agents.size();
  w.u32(static_cast<std::uint32_t>(agents));
  for (std::size_t i = 0; i < agents; ++i) {
    w.f64(tr.states.front().agents[i].length);
    w.f64(tr.states.front().agents[i].width);
  }
  for (const auto& s : tr.states) {
    if (s.agents.size() != agents) throw std::invalid_argument("encode_trace: agent count changed mid-trace");
    for (const auto& a : s.agents) {
      w.f64(a.x);
      w.f64(a.y);
      w.f64(a.v);
      w.f64(a.v_lat);
    }
    w.u8(s.light ? static_cast<std::uint8_t>(1 + static_cast<int>(s.light->color)) : 0);
    w.u64(s.light ? s.light->steps_in_state : 0);
    w.u64(s.step);
  }
  for (std::size_t a : tr.actions) w.u64(a);
  for (const auto& v : tr.verdicts) {
    if (v.violations.size() != tr.constraint_ids.size()) throw std::invalid_argument("encode_trace: verdict width");
    w.f64(v.reward);
    w.u8(v.goal_attained ? 1 : 0);
    for (const auto& [id, violated] : v.violations) w.u8(violated ? 1 : 0);
  }
  return std::move(w).finish();
}

EpisodeTrace decode_trace(std::span<const std::uint8_t> bytes) {
  io::ByteReader r(bytes, kTraceMagic, kTraceVersion, "trace");
  EpisodeTrace tr;
  tr.config_json = r.str();
  tr.seed = r.u64();
  tr.episode = r.u64();
  const std::uint32_t nc = r.u32();
  for (std::uint32_t i = 0; i < nc; ++i) tr.constraint_ids.push_back(r.str());
  const std::uint64_t n = r.u64();
  if (n == 0) throw FormatError("trace: no samples");
  const std::uint32_t agents = r.u32();
  std::vector<sim::VehicleState> shapes(agents);
  for (auto& a : shapes) {
    a.length = r.f64();
    a.width = r.f64();
  }
  tr.states.resize(n);
  for (auto& s : tr.states) {
    s.agents = shapes;
    for (auto& a : s.agents) {
      a.x = r.f64();
      a.y = r.f64();
      a.v = r.f64();
      a.v_lat = r.f64();
    }
    const std::uint8_t light = r.u8();
    const std::uint64_t in_state = r.u64();
    if (light > 3) throw FormatError("trace: bad light code");
    if (light) s.light = sim::TrafficLight{static_cast<sim::LightColor>(light - 1), in_state};
    s.step = r.u64();
  }
  tr.actions.resize(n - 1);
  for (auto& a : tr.actions) a = r.u64();
  tr.verdicts.resize(n);
  for (auto& v : tr.verdicts) {
    v.reward = r.f64();
    v.goal_attained = r.u8() != 0;
    for (const auto& id : tr.constraint_ids) v.violations.emplace_back(id, r.u8() != 0);
  }
  r.expect_end();
  return tr;
}

void write_trace_csv(const EpisodeTrace& tr, std::ostream& out) {
  out << "t,x_ego,y_ego,v_ego,x_adv,y_adv,v_adv,d,d_lat,light,action,reward,goal_ind";
  for (const auto& id : tr.constraint_ids) out << ",viol_" << id;
  out << '\n';
  double dt = 0.1;
  if (!tr.config_json.empty()) dt = nlohmann::json::parse(tr.config_json).value("dt", dt);
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const auto& s = tr.states[k];
    const auto& e = s.ego();
    const auto& a = s.adversary();
    out << g9(s.time(dt)) << ',' << g9(e.x) << ',' << g9(e.y) << ',' << g9(e.v) << ',' << g9(a.x) << ',' << g9(a.y)
        << ',' << g9(a.v) << ',' << g9(sim::bumper_gap(s)) << ',' << g9(sim::lateral_distance(s)) << ',';
    if (s.light) out << static_cast<int>(s.light->color);
    out << ',';
    if (k < tr.actions.size()) out << tr.actions[k];
    const auto& v = tr.verdicts[k];
    out << ',' << g9(v.reward) << ',' << (v.goal_attained ? 1 : 0);
    for (const auto& [id, violated] : v.violations) out << ',' << (violated ? 1 : 0);
    out << '\n';
  }
}

Rng episode_rng(std::uint64_t seed, std::uint64_t index) { return make_rng(seed, index + 1); }

Observer::Observer(const scenario::ScenarioConfig& cfg, const std::vector<std::string>& signal_names) {
  for (const auto& s : cfg.agent.state) {
    if (s == scenario::kViolatedFeature) {
      columns_.push_back(kViolatedColumn);
      continue;
    }
    std::size_t i = 0;
    while (i < signal_names.size() && signal_names[i] != s) ++i;
    if (i == signal_names.size()) throw ConfigError("agent.state refers to unexported signal '" + s + "'");
    columns_.push_back(i);
  }
}

std::vector<double> Observer::operator()(std::span<const double> row, bool violated) const {
  std::vector<double> out;
  out.reserve(columns_.size());
  for (std::size_t c : columns_) out.push_back(c == kViolatedColumn ? (violated ? 1.0 : 0.0) : row[c]);
  return out;
}

EpisodeResult run_episode(const scenario::ScenarioConfig& cfg, Learner& learner, Rng& rng,
                          const EpisodeOptions& opts) {
  const auto initial = scenario::sample_initial_world(cfg, rng);
  return run_episode_from(cfg, initial, learner, rng, opts);
}

EpisodeResult run_episode_from(const scenario::ScenarioConfig& cfg, const sim::WorldState& initial, Learner& learner,
                               Rng& rng, const EpisodeOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const auto& rb = *cfg.rulebook;
  sim::SignalDeriver deriver(cfg.world);
  const auto& names = deriver.names();
  const Observer observe(cfg, names);
  stl::Trace trace(cfg.dt(), names);
  rulebook::RewardMonitor monitor(rb, names, cfg.dt());

  EpisodeResult res;
  res.index = opts.index;
  auto& log = res.trace;
  log.config_json = scenario::scenario_to_json(cfg).dump();
  log.seed = opts.seed;
  log.episode = opts.index;
  log.constraint_ids = rb.constraint_ids();

  auto record = [&](const sim::WorldState& w) {
    auto row = deriver.next(w);
    trace.push_sample(row);
    auto verdict = monitor.push(trace);
    if (verdict.any_violation()) res.constraints_violated = true;
    if (verdict.goal_attained && !res.goal_attained) {
      res.goal_attained = true;
      res.goal_step = log.states.size();
    }
    log.states.push_back(w);
    log.verdicts.push_back(verdict);
    return std::pair{observe(row, res.constraints_violated), verdict};
  };

  learner.reset_episode();
  sim::WorldState world = initial;
  auto [obs, verdict] = record(world);
  for (std::size_t k = 0; k < cfg.horizon && !verdict.goal_attained; ++k) {
    const std::size_t action = opts.greedy ? learner.greedy(obs) : learner.act(obs, rng);
    try {
      world = sim::step(world, action, cfg.world, &rng);
    } catch (const sim::SimulationFault& e) {
      throw EpisodeFault(e.what(), log);
    }
    log.actions.push_back(action);
    auto [next_obs, next_verdict] = record(world);
    if (opts.learn) learner.observe(obs, action, next_verdict.reward, next_obs, next_verdict.goal_attained, rng);
    res.cumulative_reward += next_verdict.reward;
    ++res.steps;
    obs = std::move(next_obs);
    verdict = std::move(next_verdict);
  }
  res.sim_time = static_cast<double>(res.steps) * cfg.dt();
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace rf::harness
