#include <gtest/gtest.h>

#include <fstream>

#include "rf/io/error.hpp"
#include "rf/rulebook/rulebook.hpp"
#include "rf/scenario/scenario.hpp"

using namespace rf;
using namespace rf::scenario;

namespace {

nlohmann::json preset_json(const std::string& name) { return scenario_to_json(build_preset(name)); }

void expect_rejected(nlohmann::json j, const std::string& fragment) {
  try {
    validate(scenario_from_json(j));
    ADD_FAILURE() << "accepted a config that should fail with '" << fragment << "'";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(Presets, AllValidate) {
  for (const auto& name : preset_names()) {
    SCOPED_TRACE(name);
    auto cfg = build_preset(name);
    EXPECT_NO_THROW(validate(cfg));
    EXPECT_EQ(cfg.name, name);
  }
  EXPECT_THROW(build_preset("case9"), ConfigError);
}

TEST(Presets, CaseOneRulebook) {
  auto cfg = build_case_I();
  const auto& rb = *cfg.rulebook;
  EXPECT_EQ(rb.goal_text(), "F[0,60](d <= 4.74)");
  EXPECT_EQ(rb.goal_reward(), 10.0);
  ASSERT_EQ(rb.groups().size(), 1u);
  EXPECT_EQ(rb.groups()[0].penalty, 100.0);
  EXPECT_EQ(rb.groups()[0].constraints[0].text, "G(v_adv <= 30)");
  EXPECT_EQ(rb.groups()[0].constraints[1].text, "G(v_adv >= 2)");
  EXPECT_EQ(cfg.horizon, 600u);
  EXPECT_EQ(cfg.dt(), 0.1);
  ASSERT_EQ(cfg.world.actions.size(), 3u);
  EXPECT_EQ(cfg.world.actions[0].accel, -3.0);
  EXPECT_EQ(cfg.world.actions[2].accel, 3.0);
  EXPECT_EQ(cfg.world.d_min, 4.74);
  EXPECT_EQ(cfg.agent.state[0], "d");
  EXPECT_EQ(cfg.agent.state[1], "v_ego");
  EXPECT_EQ(cfg.agent.state[2], "v_adv");
  EXPECT_EQ(build_case_I_relaxed().rulebook->goal_text(), "F[0,60](d <= 5.5)");
}

TEST(Presets, CaseTwoAndThreeFormulas) {
  auto two = build_case_II();
  EXPECT_EQ(two.rulebook->groups()[0].constraints[0].text, "G(x_adv_rear - x_ego_front >= 0)");
  EXPECT_EQ(two.world.collision, sim::CollisionModel::Footprint);
  EXPECT_TRUE(std::holds_alternative<sim::LaneSwitch>(two.world.ego));
  auto three = build_case_III();
  ASSERT_TRUE(three.world.light.has_value());
  EXPECT_EQ(three.world.light->trigger_distance, 30.0);
  EXPECT_EQ(three.world.light->yellow_duration, 2.0);
  EXPECT_EQ(three.rulebook->constraint_ids(), (std::vector<std::string>{"no_reverse", "no_red"}));
}

TEST(Json, RoundTripIsStable) {
  for (const auto& name : preset_names()) {
    SCOPED_TRACE(name);
    auto j = preset_json(name);
    auto again = scenario_to_json(scenario_from_json(j));
    EXPECT_EQ(again, j);
  }
}

TEST(Json, LoadFromFile) {
  const std::string path = testing::TempDir() + "case3.json";
  std::ofstream(path) << preset_json("case3").dump(2);
  auto cfg = load_scenario(path);
  EXPECT_EQ(cfg.kind(), sim::ScenarioKind::YellowLight);
  EXPECT_THROW(load_scenario(path + ".missing"), ConfigError);
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(load_scenario(path), ConfigError);
}

TEST(Constants, Substitution) {
  std::map<std::string, double> c{{"d_min", 4.74}, {"T", 60}, {"d", 1}};
  EXPECT_EQ(substitute_constants("F[0,$T](d <= $d_min)", c), "F[0,60](d <= 4.74)");
  EXPECT_EQ(substitute_constants("no constants", c), "no constants");
  EXPECT_THROW(substitute_constants("d <= $missing", c), ConfigError);
}

TEST(Validation, RejectsUnexportedSignal) {
  auto j = preset_json("case1");
  j["rulebook"]["goal"] = "F(d_traffic_light <= 1)";
  expect_rejected(j, "d_traffic_light");
}

TEST(Validation, RejectsMismatchedController) {
  auto j = preset_json("case1");
  j["ego"] = preset_json("case2")["ego"];
  expect_rejected(j, "controller");
}

TEST(Validation, RejectsBadAgentState) {
  auto j = preset_json("case1");
  j["agent"]["state"][0] = "nope";
  expect_rejected(j, "nope");
  j = preset_json("case1");
  std::swap(j["agent"]["tabular"]["grid"][0], j["agent"]["tabular"]["grid"][1]);
  expect_rejected(j, "order");
  j = preset_json("case1");
  j["agent"]["neural"]["scales"] = {1.0};
  expect_rejected(j, "scales");
}

TEST(Validation, RejectsBadHyperparametersAndRanges) {
  auto j = preset_json("case1");
  j["agent"]["tabular"]["alpha"] = 0.0;
  expect_rejected(j, "alpha");
  j = preset_json("case1");
  j["agent"]["tabular"]["epsilon"] = 1.5;
  expect_rejected(j, "epsilon");
  j = preset_json("case1");
  j["init_ranges"]["d"] = {10.0, 10.0};
  expect_rejected(j, "d");
  j = preset_json("case1");
  j["horizon"] = 0;
  expect_rejected(j, "horizon");
}

TEST(Sampler, InsideBoxAndReproducible) {
  auto cfg = build_case_I();
  InitialStateSampler s(cfg.init_ranges);
  Rng a = make_rng(3), b = make_rng(3);
  for (int i = 0; i < 1000; ++i) {
    auto x = s.sample(a);
    EXPECT_EQ(x, s.sample(b));
    for (std::size_t k = 0; k < x.size(); ++k) {
      EXPECT_GE(x[k], cfg.init_ranges[k].lo);
      EXPECT_LE(x[k], cfg.init_ranges[k].hi);
    }
  }
  EXPECT_THROW(InitialStateSampler({{"d", 2.0, 1.0}}), ConfigError);
}

TEST(InitialWorld, PlacementPerKind) {
  auto one = build_case_I();
  auto [e1, a1] = initial_vehicles(one, {12, 8, 9});
  EXPECT_EQ(a1.x - e1.x, 12.0);
  EXPECT_EQ(e1.v, 8.0);
  EXPECT_EQ(a1.v, 9.0);
  auto two = build_case_II();
  auto [e2, a2] = initial_vehicles(two, {12, 8, 9});
  EXPECT_NE(e2.y, a2.y);
  EXPECT_EQ(a2.x - e2.x, 12.0);
  auto three = build_case_III();
  auto [e3, a3] = initial_vehicles(three, {12, 8, 9});
  EXPECT_EQ(a3.x, 0.0);
  EXPECT_EQ(e3.x, -12.0);
}

TEST(InitialWorld, FixedStateOverridesSampling) {
  auto cfg = build_case_I_micro();
  ASSERT_TRUE(cfg.initial_state.has_value());
  Rng a = make_rng(1), b = make_rng(2);
  auto wa = sample_initial_world(cfg, a);
  auto wb = sample_initial_world(cfg, b);
  EXPECT_EQ(wa.adversary().x, wb.adversary().x);
  EXPECT_EQ(bumper_gap(wa), (*cfg.initial_state)[0]);
}

TEST(AgentType, Aliases) {
  EXPECT_EQ(agent_type_from_string("qtable"), AgentType::Tabular);
  EXPECT_EQ(agent_type_from_string("tabular"), AgentType::Tabular);
  EXPECT_EQ(agent_type_from_string("dqn"), AgentType::Neural);
  EXPECT_EQ(agent_type_from_string("neural"), AgentType::Neural);
  EXPECT_THROW(agent_type_from_string("ppo"), ConfigError);
}
