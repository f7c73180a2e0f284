#include "rf/rulebook/rulebook.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rf/io/error.hpp"
#include "rf/stl/eval.hpp"
#include "rf/stl/parser.hpp"

namespace rf::rulebook {

namespace {

// The single place the reward is combined, shared by the batch and streaming
// paths so both round identically.
StepVerdict combine(const Rulebook& rb, bool goal, const std::vector<bool>& respected) {
  StepVerdict v;
  v.goal_attained = goal;
  v.reward = goal ? rb.goal_reward() : 0.0;
  std::size_t k = 0;
  for (const auto& g : rb.groups()) {
    for (const auto& c : g.constraints) {
      const bool violated = !respected[k++];
      v.violations.emplace_back(c.id, violated);
      if (violated) v.reward -= g.penalty;
    }
  }
  return v;
}

}  // namespace

Rulebook::Rulebook(stl::FormulaPtr goal, std::string goal_text, double goal_reward,
                   std::vector<ConstraintGroup> groups, std::size_t horizon)
    : goal_(std::move(goal)),
      goal_text_(std::move(goal_text)),
      goal_reward_(goal_reward),
      groups_(std::move(groups)),
      horizon_(horizon) {
  if (!goal_) throw ConfigError("rulebook: missing goal formula");
  if (!(goal_reward_ > 0.0) || !std::isfinite(goal_reward_)) throw ConfigError("rulebook: goal reward must be > 0");
  if (horizon_ < 1) throw ConfigError("rulebook: horizon must be >= 1");
  std::sort(groups_.begin(), groups_.end(),
            [](const ConstraintGroup& a, const ConstraintGroup& b) { return a.priority < b.priority; });
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    const auto& g = groups_[i];
    if (g.priority < 0) throw ConfigError("rulebook: priorities must be non-negative");
    if (i > 0 && groups_[i - 1].priority == g.priority) {
      throw ConfigError("rulebook: duplicate priority " + std::to_string(g.priority));
    }
    if (!(g.penalty > 0.0) || !std::isfinite(g.penalty)) throw ConfigError("rulebook: penalties must be > 0");
    if (g.constraints.empty()) throw ConfigError("rulebook: empty constraint group");
  }
  std::size_t n = 0;
  std::vector<std::string> seen;
  for (auto& g : groups_) {
    for (auto& c : g.constraints) {
      ++n;
      if (!c.formula) throw ConfigError("rulebook: missing constraint formula");
      if (c.id.empty()) c.id = "c" + std::to_string(n);
      if (std::find(seen.begin(), seen.end(), c.id) != seen.end()) {
        throw ConfigError("rulebook: duplicate constraint id " + c.id);
      }
      seen.push_back(c.id);
      if (c.text.empty()) c.text = stl::to_string(*c.formula);
    }
  }
  if (goal_text_.empty()) goal_text_ = stl::to_string(*goal_);
}

std::vector<std::string> Rulebook::constraint_ids() const {
  std::vector<std::string> ids;
  for (const auto& g : groups_) {
    for (const auto& c : g.constraints) ids.push_back(c.id);
  }
  return ids;
}

std::size_t Rulebook::constraint_count() const {
  std::size_t n = 0;
  for (const auto& g : groups_) n += g.constraints.size();
  return n;
}

Rulebook Rulebook::scaled(double k) const {
  auto groups = groups_;
  for (auto& g : groups) g.penalty *= k;
  return Rulebook(goal_, goal_text_, goal_reward_ * k, std::move(groups), horizon_);
}

bool StepVerdict::any_violation() const {
  return std::any_of(violations.begin(), violations.end(), [](const auto& p) { return p.second; });
}

std::vector<std::string> validate(const Rulebook& rb) {
  std::vector<std::string> warnings;
  const auto& groups = rb.groups();
  if (groups.empty()) return warnings;

  const double budget = static_cast<double>(rb.horizon()) * rb.goal_reward();
  if (!(groups.front().penalty > budget)) {
    std::ostringstream os;
    os << "lowest-priority penalty " << groups.front().penalty << " (priority " << groups.front().priority
       << ") does not exceed horizon * goal reward = " << rb.horizon() << " * " << rb.goal_reward() << " = "
       << budget;
    warnings.push_back(os.str());
  }
  for (std::size_t i = 1; i < groups.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (!(groups[i].penalty > groups[j].penalty)) {
        std::ostringstream os;
        os << "priority " << groups[i].priority << " penalty " << groups[i].penalty
           << " is not greater than lower priority " << groups[j].priority << " penalty " << groups[j].penalty;
        warnings.push_back(os.str());
      }
    }
  }
  return warnings;
}

StepVerdict step_reward(const Rulebook& rb, const stl::Trace& tr, std::size_t t) {
  const bool goal = stl::indicator(*rb.goal(), tr, t);
  std::vector<bool> respected;
  for (const auto& g : rb.groups()) {
    for (const auto& c : g.constraints) respected.push_back(stl::indicator(*c.formula, tr, t));
  }
  return combine(rb, goal, respected);
}

RewardMonitor::RewardMonitor(const Rulebook& rb, const std::vector<std::string>& signal_names, double timestep)
    : rb_(&rb), goal_(rb.goal(), signal_names, timestep) {
  for (const auto& g : rb.groups()) {
    for (const auto& c : g.constraints) constraints_.emplace_back(c.formula, signal_names, timestep);
  }
}

StepVerdict RewardMonitor::push(const stl::Trace& tr) {
  const bool goal = goal_.push(tr);
  std::vector<bool> respected;
  respected.reserve(constraints_.size());
  for (auto& m : constraints_) respected.push_back(m.push(tr));
  return combine(*rb_, goal, respected);
}

void RewardMonitor::truncate(std::size_t samples) {
  goal_.truncate(samples);
  for (auto& m : constraints_) m.truncate(samples);
}

Rulebook rulebook_from_json(const nlohmann::json& j, std::size_t horizon) {
  try {
    const std::string goal_text = j.at("goal").get<std::string>();
    auto goal = stl::parse_formula(goal_text);
    const double goal_reward = j.at("goal_reward").get<double>();
    std::vector<ConstraintGroup> groups;
    for (const auto& gj : j.value("groups", nlohmann::json::array())) {
      ConstraintGroup g;
      g.priority = gj.at("priority").get<int>();
      g.penalty = gj.at("lambda").get<double>();
      const auto& formulas = gj.at("formulas");
      const auto ids = gj.value("ids", std::vector<std::string>{});
      if (!ids.empty() && ids.size() != formulas.size()) throw ConfigError("rulebook: ids/formulas length mismatch");
      for (std::size_t i = 0; i < formulas.size(); ++i) {
        Constraint c;
        c.text = formulas[i].get<std::string>();
        c.formula = stl::parse_formula(c.text);
        if (!ids.empty()) c.id = ids[i];
        g.constraints.push_back(std::move(c));
      }
      groups.push_back(std::move(g));
    }
    return Rulebook(std::move(goal), goal_text, goal_reward, std::move(groups), horizon);
  } catch (const stl::ParseError& e) {
    throw ConfigError(std::string("rulebook: formula: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("rulebook: ") + e.what());
  }
}

nlohmann::json rulebook_to_json(const Rulebook& rb) {
  nlohmann::json j;
  j["goal"] = rb.goal_text();
  j["goal_reward"] = rb.goal_reward();
  j["groups"] = nlohmann::json::array();
  for (const auto& g : rb.groups()) {
    nlohmann::json gj;
    gj["priority"] = g.priority;
    gj["lambda"] = g.penalty;
    gj["formulas"] = nlohmann::json::array();
    gj["ids"] = nlohmann::json::array();
    for (const auto& c : g.constraints) {
      gj["formulas"].push_back(c.text);
      gj["ids"].push_back(c.id);
    }
    j["groups"].push_back(std::move(gj));
  }
  return j;
}

}  // namespace rf::rulebook
