#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rf/harness/campaign.hpp"
#include "rf/harness/episode.hpp"
#include "rf/harness/learner.hpp"
#include "rf/harness/replay.hpp"
#include "rf/harness/search.hpp"
#include "rf/io/binary.hpp"
#include "rf/io/error.hpp"
#include "rf/scenario/scenario.hpp"

using namespace rf;
using namespace rf::harness;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::path(testing::TempDir()) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

EpisodeTrace micro_trace() {
  auto cfg = scenario::build_case_I_micro();
  auto found = brute_force(cfg, search_start(cfg), SearchOptions{});
  EXPECT_TRUE(found.has_value());
  ScriptedLearner script(found->actions, 1);
  Rng rng = make_rng(1);
  return run_episode_from(cfg, search_start(cfg), script, rng, {.learn = false}).trace;
}

}  // namespace

TEST(Episode, InertAdversaryNeverReachesGoal) {
  auto cfg = scenario::build_case_I();
  ScriptedLearner hold({}, 1);
  Rng rng = make_rng(4);
  auto r = run_episode(cfg, hold, rng, {.learn = false});
  EXPECT_FALSE(r.goal_attained);
  EXPECT_EQ(r.steps, cfg.horizon);
  EXPECT_EQ(r.trace.samples(), cfg.horizon + 1);
  EXPECT_EQ(r.trace.actions.size(), cfg.horizon);
  if (!r.constraints_violated) EXPECT_EQ(r.cumulative_reward, 0.0);
}

TEST(Episode, StopsAtGoal) {
  auto cfg = scenario::build_case_I_micro();
  auto found = brute_force(cfg, search_start(cfg), SearchOptions{});
  ASSERT_TRUE(found.has_value());
  ScriptedLearner script(found->actions, 1);
  Rng rng = make_rng(1);
  auto r = run_episode_from(cfg, search_start(cfg), script, rng, {.learn = false});
  EXPECT_TRUE(r.goal_attained);
  EXPECT_FALSE(r.constraints_violated);
  ASSERT_TRUE(r.goal_step.has_value());
  EXPECT_EQ(*r.goal_step, found->goal_step);
  EXPECT_EQ(r.steps, found->goal_step);
  EXPECT_EQ(r.cumulative_reward, cfg.rulebook->goal_reward());
}

TEST(Episode, SeededRunsAreIdentical) {
  auto cfg = scenario::build_case_I();
  auto run = [&] {
    auto learner = make_learner(cfg, 9);
    Rng rng = episode_rng(9, 0);
    return encode_trace(run_episode(cfg, *learner, rng).trace);
  };
  EXPECT_EQ(run(), run());
}

TEST(Search, InertScenarioHasNoSolution) {
  auto cfg = scenario::build_case_I_micro();
  for (auto& a : cfg.world.actions) a.accel = 0.0;
  EXPECT_FALSE(brute_force(cfg, search_start(cfg), SearchOptions{.depth = 4}).has_value());
}

TEST(Search, BudgetIsEnforced) {
  auto cfg = scenario::build_case_I_micro();
  EXPECT_THROW(brute_force(cfg, search_start(cfg), SearchOptions{.depth = 20, .budget = 1000}), BudgetExceeded);
}

TEST(Search, SolutionExpandsMacroActions) {
  auto cfg = scenario::build_case_I_micro();
  SearchOptions opts;
  auto found = brute_force(cfg, search_start(cfg), opts);
  ASSERT_TRUE(found.has_value());
  EXPECT_LE(found->macro_actions.size(), opts.depth);
  EXPECT_GE(found->actions.size(), found->goal_step);
  for (std::size_t k = 0; k < found->goal_step; ++k) EXPECT_EQ(found->actions[k], found->macro_actions[k / opts.hold]);
}

TEST(Replay, CleanTraceHasNoMismatches) {
  auto tr = micro_trace();
  auto rep = replay(tr);
  EXPECT_TRUE(rep.ok());
  EXPECT_TRUE(rep.dynamics_checked);
  EXPECT_TRUE(rep.goal_attained);
  EXPECT_FALSE(rep.constraints_violated);
  EXPECT_EQ(rep.samples, tr.samples());
}

TEST(Replay, TamperedRewardIsReportedAtItsStep) {
  auto tr = micro_trace();
  tr.verdicts[5].reward += 1.0;
  auto rep = replay(tr);
  ASSERT_EQ(rep.mismatches.size(), 1u);
  EXPECT_EQ(rep.mismatches[0].step, 5u);
  EXPECT_EQ(rep.mismatches[0].field, "reward");
}

TEST(Replay, TamperedStateIsReported) {
  auto tr = micro_trace();
  tr.states[3].agents[1].v += 0.5;
  auto rep = replay(tr);
  EXPECT_FALSE(rep.ok());
  bool saw_state = false;
  for (const auto& m : rep.mismatches) saw_state |= m.field == "state";
  EXPECT_TRUE(saw_state);
}

TEST(TraceCodec, RoundTripAndCorruption) {
  auto tr = micro_trace();
  auto bytes = encode_trace(tr);
  EXPECT_EQ(encode_trace(decode_trace(bytes)), bytes);
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(decode_trace(bad), FormatError);
  bad = bytes;
  bad[4] ^= 0x7f;
  EXPECT_THROW(decode_trace(bad), VersionError);
  bad = bytes;
  bad[bytes.size() / 2] ^= 1;
  EXPECT_THROW(decode_trace(bad), ChecksumError);
  bad = bytes;
  bad.resize(6);
  EXPECT_THROW(decode_trace(bad), FormatError);
}

TEST(TraceCsv, HeaderAndRows) {
  auto tr = micro_trace();
  std::ostringstream out;
  write_trace_csv(tr, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("t,x_ego,y_ego,v_ego,x_adv,y_adv,v_adv,d,d_lat,light,action,reward,goal_ind,viol_", 0), 0u);
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, tr.samples());
}

TEST(Campaign, QuadrantsPartitionEpisodes) {
  auto cfg = scenario::build_case_I();
  auto stats = run_campaign(cfg, {.epochs = 2, .episodes_per_epoch = 5, .seed = 3});
  EXPECT_EQ(stats.quad.total(), 10u);
  EXPECT_EQ(stats.episodes.size(), 10u);
  ASSERT_EQ(stats.epochs.size(), 2u);
  EXPECT_EQ(stats.epochs[1].episodes, 10u);
  std::size_t goals = 0;
  for (const auto& e : stats.episodes) goals += e.goal;
  EXPECT_EQ(stats.epochs[1].successes, goals);
  EXPECT_EQ(stats.quad.goal_respected + stats.quad.goal_violated, goals);
}

TEST(Campaign, SummarizeCumulativeRates) {
  std::vector<EpisodeSummary> eps(106);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    eps[i].index = i;
    eps[i].goal = i < 76;
  }
  auto stats = summarize(eps, 53);
  ASSERT_EQ(stats.epochs.size(), 2u);
  EXPECT_EQ(stats.epochs[0].successes, 53u);
  EXPECT_EQ(stats.epochs[1].episodes, 106u);
  EXPECT_EQ(stats.epochs[1].successes, 76u);
  std::ostringstream out;
  write_stats_csv(stats, out);
  EXPECT_NE(out.str().find("71.69"), std::string::npos) << out.str();
}

TEST(Campaign, ArtifactsAreDeterministic) {
  auto cfg = scenario::build_case_I();
  auto a = fresh_dir("camp_a"), b = fresh_dir("camp_b");
  run_campaign(cfg, {.epochs = 2, .episodes_per_epoch = 4, .seed = 8, .out = a});
  run_campaign(cfg, {.epochs = 2, .episodes_per_epoch = 4, .seed = 8, .out = b});
  for (const char* f : {"stats.csv", "quad.csv", "episodes.csv", "traces/ep_000000.bin", "traces/ep_000007.bin"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  EXPECT_TRUE(replay_file((a / "traces/ep_000003.bin").string()).ok());
}

TEST(Campaign, ResumeMatchesUninterruptedRun) {
  auto cfg = scenario::build_case_I();
  auto full = fresh_dir("camp_full"), part = fresh_dir("camp_part");
  auto all = run_campaign(cfg, {.epochs = 3, .episodes_per_epoch = 4, .seed = 5, .out = full});
  CampaignOptions first{.epochs = 1, .episodes_per_epoch = 4, .seed = 5, .out = part};
  run_campaign(cfg, first);
  CampaignOptions rest{.epochs = 3, .episodes_per_epoch = 4, .seed = 5, .out = part};
  rest.resume = part / "checkpoints/epoch_001.bin";
  auto resumed = run_campaign(cfg, rest);
  EXPECT_EQ(slurp(full / "stats.csv"), slurp(part / "stats.csv"));
  EXPECT_EQ(slurp(full / "episodes.csv"), slurp(part / "episodes.csv"));
  EXPECT_EQ(slurp(full / "checkpoints/epoch_003.bin"), slurp(part / "checkpoints/epoch_003.bin"));
  ASSERT_EQ(resumed.episodes.size(), all.episodes.size());
}

TEST(Campaign, KeepLastPrunesTraces) {
  auto cfg = scenario::build_case_I();
  auto dir = fresh_dir("camp_keep");
  run_campaign(cfg, {.epochs = 1, .episodes_per_epoch = 6, .seed = 2, .out = dir, .keep_last_traces = 2});
  std::size_t n = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "traces")) ++n;
  EXPECT_EQ(n, 2u);
  EXPECT_TRUE(fs::exists(dir / "traces/ep_000005.bin"));
}

TEST(Campaign, EpisodesCsvRoundTrip) {
  auto cfg = scenario::build_case_I();
  auto stats = run_campaign(cfg, {.epochs = 1, .episodes_per_epoch = 6, .seed = 4});
  std::stringstream ss;
  write_episodes_csv(stats, ss);
  auto back = read_episodes_csv(ss);
  ASSERT_EQ(back.size(), stats.episodes.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].goal, stats.episodes[i].goal);
    EXPECT_EQ(back[i].violated, stats.episodes[i].violated);
    EXPECT_EQ(back[i].reward, stats.episodes[i].reward);
    EXPECT_EQ(back[i].steps, stats.episodes[i].steps);
  }
  std::istringstream junk("index,epoch\n1,notanumber\n");
  EXPECT_THROW(read_episodes_csv(junk), FormatError);
}

TEST(Learner, SaveLoadKeepsGreedyPolicy) {
  for (auto type : {scenario::AgentType::Tabular, scenario::AgentType::Neural}) {
    auto cfg = scenario::build_case_I();
    cfg.agent.type = type;
    auto learner = make_learner(cfg, 6);
    Rng rng = episode_rng(6, 0);
    run_episode(cfg, *learner, rng);
    auto back = load_learner(cfg, learner->save());
    EXPECT_EQ(back->save(), learner->save());
    const std::vector<double> obs{10.0, 12.0, 9.0, 0.0};
    EXPECT_EQ(back->greedy(obs), learner->greedy(obs));
  }
}

TEST(Numbers, ExactNumberRoundTrips) {
  for (double v : {0.1, 71.69811320754717, 1e-300, -2.5, 100.0}) {
    EXPECT_EQ(std::stod(exact_number(v)), v);
  }
  EXPECT_EQ(exact_number(0.1), "0.1");
}
