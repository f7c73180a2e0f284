#include "rf/harness/search.hpp"

#include <string>

#include "rf/io/error.hpp"
#include "rf/rulebook/rulebook.hpp"
#include "rf/sim/signals.hpp"
#include "rf/stl/trace.hpp"

namespace rf::harness {

namespace {

struct Search {
  const scenario::ScenarioConfig& cfg;
  const SearchOptions& opts;
  stl::Trace trace;
  rulebook::RewardMonitor monitor;
  std::vector<std::size_t> path;
  std::uint64_t rollouts = 0;
  std::optional<SearchResult> found;

  Search(const scenario::ScenarioConfig& c, const SearchOptions& o, const std::vector<std::string>& names)
      : cfg(c), opts(o), trace(c.dt(), names), monitor(*c.rulebook, names, c.dt()) {}

  /// Explores from a world whose sample is the last one in trace.
  bool dfs(const sim::WorldState& world, const sim::SignalDeriver& deriver, std::size_t steps) {
    if (path.size() == opts.depth || steps >= cfg.horizon) return false;
    const std::size_t mark = trace.length();
    for (std::size_t a = 0; a < cfg.world.actions.size(); ++a) {
      ++rollouts;
      sim::WorldState w = world;
      sim::SignalDeriver d = deriver;
      path.push_back(a);
      bool violated = false;
      bool goal = false;
      std::size_t k = steps;
      for (std::size_t h = 0; h < opts.hold && k < cfg.horizon && !violated && !goal; ++h, ++k) {
        w = sim::step(w, a, cfg.world);
        trace.push_sample(d.next(w));
        const auto v = monitor.push(trace);
        violated = v.any_violation();
        goal = v.goal_attained;
      }
      if (goal && !violated) {
        SearchResult r;
        r.macro_actions = path;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) r.actions.insert(r.actions.end(), opts.hold, path[i]);
        r.actions.insert(r.actions.end(), k - steps, a);
        r.goal_step = k;
        found = r;
        return true;
      }
      if (!violated && dfs(w, d, k)) return true;
      path.pop_back();
      trace.truncate(mark);
      monitor.truncate(mark);
    }
    return false;
  }
};

}  // namespace

sim::WorldState search_start(const scenario::ScenarioConfig& cfg) {
  Rng rng = make_rng(cfg.seed, 0);
  return scenario::sample_initial_world(cfg, rng);
}

std::optional<SearchResult> brute_force(const scenario::ScenarioConfig& cfg, const sim::WorldState& initial,
                                        const SearchOptions& opts) {
  if (opts.hold == 0) throw ConfigError("bruteforce: hold must be >= 1");
  double space = 1.0;
  for (std::size_t i = 0; i < opts.depth; ++i) space *= static_cast<double>(cfg.world.actions.size());
  if (space > static_cast<double>(opts.budget)) {
    throw BudgetExceeded("bruteforce: " + std::to_string(cfg.world.actions.size()) + "^" + std::to_string(opts.depth) +
                         " sequences exceed the budget of " + std::to_string(opts.budget));
  }
  sim::SignalDeriver deriver(cfg.world);
  Search s(cfg, opts, deriver.names());
  s.trace.push_sample(deriver.next(initial));
  const auto v0 = s.monitor.push(s.trace);
  if (v0.any_violation()) return std::nullopt;
  if (v0.goal_attained) return SearchResult{};
  s.dfs(initial, deriver, 0);
  if (s.found) s.found->rollouts = s.rollouts;
  return s.found;
}

}  // namespace rf::harness
