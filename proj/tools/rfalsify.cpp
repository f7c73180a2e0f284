// rfalsify: train constrained adversaries against driving controllers,
// evaluate checkpoints, search for falsifying action sequences and re-check
// stored traces.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "rf/harness/campaign.hpp"
#include "rf/harness/episode.hpp"
#include "rf/harness/replay.hpp"
#include "rf/harness/search.hpp"
#include "rf/io/binary.hpp"
#include "rf/io/error.hpp"
#include "rf/neural/mlp.hpp"
#include "rf/rulebook/rulebook.hpp"
#include "rf/scenario/scenario.hpp"
#include "rf/sim/world.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kRuntime = 3 };

namespace fs = std::filesystem;
using namespace rf;

void setup_logging() {
  spdlog::set_default_logger(spdlog::stderr_color_mt("rfalsify"));
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("RF_LOG")) {
    const std::string v = env;
    if (v == "error") spdlog::set_level(spdlog::level::err);
    else if (v == "debug") spdlog::set_level(spdlog::level::debug);
    else if (v != "info") spdlog::warn("RF_LOG={} not recognised (error, info, debug); using info", v);
  }
}

void warn_rulebook(const scenario::ScenarioConfig& cfg) {
  for (const auto& w : rulebook::validate(*cfg.rulebook)) spdlog::warn("rulebook: {}", w);
}

struct TrainArgs {
  std::string scenario;
  std::string agent;
  std::size_t epochs = 10;
  std::size_t per_epoch = 30;
  std::uint64_t seed = 1;
  std::string out;
  std::size_t keep_last = 0;
  bool no_traces = false;
  std::size_t quad_window = 0;
  std::string resume;
};

int train(const TrainArgs& a) {
  auto cfg = scenario::load_scenario(a.scenario);
  if (!a.agent.empty()) cfg.agent.type = scenario::agent_type_from_string(a.agent);
  cfg.seed = a.seed;
  warn_rulebook(cfg);
  harness::CampaignOptions opts;
  opts.epochs = a.epochs;
  opts.episodes_per_epoch = a.per_epoch;
  opts.seed = a.seed;
  opts.out = a.out;
  opts.write_traces = !a.no_traces;
  opts.keep_last_traces = a.keep_last;
  opts.quad_window = a.quad_window;
  if (!a.resume.empty()) opts.resume = fs::path(a.resume);
  opts.on_episode = [](const harness::EpisodeResult& r) {
    spdlog::debug("episode {}: steps={} goal={} violated={} reward={} wall={:.3f}s", r.index, r.steps,
                  r.goal_attained, r.constraints_violated, r.cumulative_reward, r.wall_time);
  };
  spdlog::info("training {} agent on {} for {} epochs x {} episodes (seed {})", scenario::to_string(cfg.agent.type),
               cfg.name, a.epochs, a.per_epoch, a.seed);
  const auto stats = harness::run_campaign(cfg, opts);
  for (const auto& row : stats.epochs) {
    spdlog::info("epoch {:>3}: {}/{} successes ({:.2f}%), sim time {:.1f}s", row.epoch, row.successes, row.episodes,
                 row.success_rate, row.sim_time);
  }
  const auto& q = stats.quad;
  spdlog::info("quadrants: goal+respected={} goal+violated={} no-goal+respected={} no-goal+violated={}",
               q.goal_respected, q.goal_violated, q.no_goal_respected, q.no_goal_violated);
  harness::write_stats_csv(stats, std::cout);
  return kOk;
}

int eval(const std::string& checkpoint, std::size_t episodes, std::uint64_t seed, bool explore) {
  const auto ck = harness::decode_checkpoint(io::read_file(checkpoint));
  const auto cfg = scenario::scenario_from_json(nlohmann::json::parse(ck.config_json));
  auto learner = harness::load_learner(cfg, ck.learner);
  harness::QuadCounts quad;
  std::size_t successes = 0;
  double sim_time = 0.0;
  for (std::size_t i = 0; i < episodes; ++i) {
    Rng rng = harness::episode_rng(seed, i);
    harness::EpisodeOptions eo;
    eo.learn = false;
    eo.greedy = !explore;
    eo.seed = seed;
    eo.index = i;
    const auto r = harness::run_episode(cfg, *learner, rng, eo);
    quad.add(r.goal_attained, r.constraints_violated);
    successes += r.goal_attained ? 1 : 0;
    sim_time += r.sim_time;
  }
  std::cout << "episodes,successes,success_rate,sim_time_s,goal_respected,goal_violated,no_goal_respected,"
               "no_goal_violated\n"
            << episodes << ',' << successes << ','
            << harness::exact_number(episodes ? 100.0 * static_cast<double>(successes) / static_cast<double>(episodes) : 0.0)
            << ',' << harness::exact_number(sim_time) << ',' << quad.goal_respected << ',' << quad.goal_violated << ','
            << quad.no_goal_respected << ',' << quad.no_goal_violated << '\n';
  return kOk;
}

int bruteforce(const std::string& path, std::size_t depth, std::size_t hold, std::uint64_t budget,
               const std::vector<double>& init, const std::string& trace_out) {
  auto cfg = scenario::load_scenario(path);
  if (!init.empty()) {
    if (init.size() != 3) throw ConfigError("--init takes d v_ego v_adv");
    cfg.initial_state = init;
  }
  const auto start = harness::search_start(cfg);
  spdlog::info("search from d={} v_ego={} v_adv={}", sim::bumper_gap(start), start.ego().v, start.adversary().v);
  const auto found = harness::brute_force(cfg, start, {depth, hold, budget});
  if (!found) {
    std::cout << "none\n";
    return kOk;
  }
  std::cout << "macro_actions:";
  for (auto m : found->macro_actions) std::cout << ' ' << m;
  std::cout << "\ngoal_step: " << found->goal_step << "\nnodes: " << found->rollouts << '\n';
  if (!trace_out.empty()) {
    harness::ScriptedLearner script(found->actions);
    Rng rng = make_rng(cfg.seed, 0);
    harness::EpisodeOptions eo;
    eo.learn = false;
    const auto r = harness::run_episode_from(cfg, start, script, rng, eo);
    io::write_file(trace_out, harness::encode_trace(r.trace));
    spdlog::info("replayed sequence: goal={} violated={} -> {}", r.goal_attained, r.constraints_violated, trace_out);
  }
  return kOk;
}

int replay(const std::string& path, const std::string& csv) {
  const auto trace = harness::decode_trace(io::read_file(path));
  const auto report = harness::replay(trace);
  harness::print_report(report, std::cout);
  if (!csv.empty()) {
    std::ofstream out(csv);
    harness::write_trace_csv(trace, out);
    if (!out) throw std::runtime_error("cannot write " + csv);
  }
  return report.ok() ? kOk : kRuntime;
}

int export_curves(const std::string& campaign, const std::string& csv) {
  std::ifstream in(fs::path(campaign) / "episodes.csv");
  if (!in) throw ConfigError("no episodes.csv in " + campaign);
  const auto episodes = harness::read_episodes_csv(in);
  std::ofstream out(csv);
  harness::write_curves_csv(episodes, out);
  if (!out) throw std::runtime_error("cannot write " + csv);
  return kOk;
}

int preset(const std::string& name, const std::string& out) {
  const auto text = scenario::scenario_to_json(scenario::build_preset(name)).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return kOk;
  }
  std::ofstream f(out);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Falsification of driving controllers with rulebook-constrained adversaries"};
  app.require_subcommand(1);

  TrainArgs ta;
  auto* train_cmd = app.add_subcommand("train", "Train an adversary and write campaign artifacts");
  train_cmd->add_option("--scenario", ta.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--agent", ta.agent, "Override agent type")->check(CLI::IsMember({"qtable", "dqn"}));
  train_cmd->add_option("--epochs", ta.epochs, "Number of epochs")->check(CLI::PositiveNumber);
  train_cmd->add_option("--episodes-per-epoch", ta.per_epoch, "Episodes per epoch")->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", ta.seed, "Campaign seed");
  train_cmd->add_option("--out", ta.out, "Output directory")->required();
  train_cmd->add_option("--keep-last", ta.keep_last, "Keep only the last K traces (0 = all)");
  train_cmd->add_flag("--no-traces", ta.no_traces, "Do not write episode traces");
  train_cmd->add_option("--quad-window", ta.quad_window, "Episodes per quad.csv row (default: epoch size)");
  train_cmd->add_option("--resume", ta.resume, "Resume from an epoch checkpoint")->check(CLI::ExistingFile);

  std::string ck;
  std::size_t eval_episodes = 100;
  std::uint64_t eval_seed = 1;
  bool explore = false;
  auto* eval_cmd = app.add_subcommand("eval", "Roll out a checkpointed policy without learning");
  eval_cmd->add_option("--checkpoint", ck, "Checkpoint file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--episodes", eval_episodes, "Episodes to run")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval_seed, "Seed for initial states");
  eval_cmd->add_flag("--explore", explore, "Use the epsilon-soft policy instead of greedy actions");

  std::string bf_scenario, bf_trace;
  std::size_t depth = 6, hold = 10;
  std::uint64_t budget = 10'000'000;
  std::vector<double> init;
  auto* bf_cmd = app.add_subcommand("bruteforce", "Exhaustive search for a falsifying macro-action sequence");
  bf_cmd->add_option("--scenario", bf_scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  bf_cmd->add_option("--depth", depth, "Number of macro-actions")->check(CLI::PositiveNumber);
  bf_cmd->add_option("--hold", hold, "Steps each macro-action is held")->check(CLI::PositiveNumber);
  bf_cmd->add_option("--budget", budget, "Maximum |A|^depth");
  bf_cmd->add_option("--init", init, "Initial state: d v_ego v_adv")->expected(3);
  bf_cmd->add_option("--trace", bf_trace, "Write the rollout of the found sequence to this trace file");

  std::string trace_path, csv_path;
  auto* replay_cmd = app.add_subcommand("replay", "Recompute indicators and rewards of a stored trace");
  replay_cmd->add_option("--trace", trace_path, "Trace file")->required()->check(CLI::ExistingFile);
  replay_cmd->add_option("--csv", csv_path, "Also export the trace as CSV");

  std::string campaign, curves_csv;
  auto* curves_cmd = app.add_subcommand("export-curves", "Write per-episode learning curves of a campaign");
  curves_cmd->add_option("--campaign", campaign, "Campaign output directory")->required()->check(CLI::ExistingDirectory);
  curves_cmd->add_option("--csv", curves_csv, "Output CSV")->required();

  std::string preset_name, preset_out;
  auto* preset_cmd = app.add_subcommand("preset", "Print a built-in scenario as JSON");
  preset_cmd->add_option("name", preset_name, "Preset name")->required()->check(CLI::IsMember(scenario::preset_names()));
  preset_cmd->add_option("--out", preset_out, "Write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*train_cmd) return train(ta);
    if (*eval_cmd) return eval(ck, eval_episodes, eval_seed, explore);
    if (*bf_cmd) return bruteforce(bf_scenario, depth, hold, budget, init, bf_trace);
    if (*replay_cmd) return replay(trace_path, csv_path);
    if (*curves_cmd) return export_curves(campaign, curves_csv);
    if (*preset_cmd) return preset(preset_name, preset_out);
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kConfig;
  } catch (const harness::BudgetExceeded& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const harness::EpisodeFault& e) {
    spdlog::error("simulation fault: {} (after {} samples)", e.what(), e.partial().samples());
    return kRuntime;
  } catch (const neural::NumericalFault& e) {
    spdlog::error("numerical fault: {}", e.what());
    return kRuntime;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kRuntime;
  }
  return kUsage;
}
