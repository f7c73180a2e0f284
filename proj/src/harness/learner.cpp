#include "rf/harness/learner.hpp"

#include "rf/io/binary.hpp"

namespace rf::harness {

namespace {

constexpr io::Magic kDqnMagic{'R', 'F', 'D', 'Q'};
constexpr std::uint32_t kDqnVersion = 1;

tabular::Hyperparameters schedule_of(const scenario::NeuralSpec& s) {
  tabular::Hyperparameters hp;
  hp.epsilon = s.epsilon;
  hp.epsilon_decay_episodes = s.epsilon_decay_episodes;
  hp.epsilon_floor = s.epsilon_floor;
  return hp;
}

}  // namespace

void TabularLearner::observe(std::span<const double> obs, std::size_t action, double reward,
                             std::span<const double> next_obs, bool terminal, Rng&) {
  table_.update(obs, action, reward, next_obs, terminal);
}

void TabularLearner::end_episode(std::size_t episodes_done) {
  table_.set_epsilon(tabular::scheduled_epsilon(table_.hyperparameters(), episodes_done));
}

DqnLearner::DqnLearner(neural::Mlp net, neural::ReplayBuffer buffer, scenario::NeuralSpec spec)
    : net_(std::move(net)), buffer_(std::move(buffer)), spec_(std::move(spec)), epsilon_(spec_.epsilon) {
  if (spec_.scales.size() != net_.input_size()) throw ConfigError("dqn: one input scale per state signal required");
}

std::vector<double> DqnLearner::scaled(std::span<const double> obs) const {
  std::vector<double> x(obs.begin(), obs.end());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] /= spec_.scales[i];
  return x;
}

std::size_t DqnLearner::act(std::span<const double> obs, Rng& rng) {
  return tabular::epsilon_soft(net_.forward(scaled(obs)), epsilon_, rng);
}

std::size_t DqnLearner::greedy(std::span<const double> obs) const { return tabular::argmax(net_.forward(scaled(obs))); }

void DqnLearner::observe(std::span<const double> obs, std::size_t action, double reward,
                         std::span<const double> next_obs, bool terminal, Rng& rng) {
  buffer_.push({scaled(obs), action, reward * spec_.reward_scale, scaled(next_obs), terminal});
  if (auto batch = buffer_.sample(spec_.batch_size, rng)) last_loss_ = neural::td_step(net_, *batch, spec_.gamma);
}

void DqnLearner::end_episode(std::size_t episodes_done) {
  epsilon_ = tabular::scheduled_epsilon(schedule_of(spec_), episodes_done);
}

std::vector<std::uint8_t> DqnLearner::save() const {
  io::ByteWriter w(kDqnMagic, kDqnVersion);
  w.bytes(net_.save());
  w.bytes(buffer_.save());
  w.f64(epsilon_);
  return std::move(w).finish();
}

DqnLearner DqnLearner::load(std::span<const std::uint8_t> bytes, scenario::NeuralSpec spec) {
  io::ByteReader r(bytes, kDqnMagic, kDqnVersion, "dqn learner");
  auto net = neural::Mlp::load(r.bytes());
  auto buffer = neural::ReplayBuffer::load(r.bytes());
  const double eps = r.f64();
  r.expect_end();
  DqnLearner out(std::move(net), std::move(buffer), std::move(spec));
  out.epsilon_ = eps;
  return out;
}

std::unique_ptr<Learner> make_learner(const scenario::ScenarioConfig& cfg, std::uint64_t seed) {
  const auto& a = cfg.agent;
  const std::size_t actions = cfg.world.actions.size();
  if (a.type == scenario::AgentType::Tabular) {
    tabular::QTable table(tabular::Discretizer(a.tabular.grid), actions, a.tabular.hp);
    if (a.tabular.init_magnitude > 0.0) {
      Rng rng = make_rng(seed, 0x7174626cULL);
      table.randomize(rng, a.tabular.init_magnitude);
    }
    return std::make_unique<TabularLearner>(std::move(table));
  }
  std::vector<std::size_t> sizes{a.state.size()};
  sizes.insert(sizes.end(), a.neural.hidden.begin(), a.neural.hidden.end());
  sizes.push_back(actions);
  neural::Mlp net(sizes, a.neural.activation, a.neural.learning_rate, seed);
  const std::size_t last = net.layer_count() - 1;
  auto params = net.parameters();
  for (std::size_t i = net.weight_offset(last); i < net.bias_offset(last); ++i) params[i] *= a.neural.output_init_scale;
  return std::make_unique<DqnLearner>(std::move(net), neural::ReplayBuffer(a.neural.capacity), a.neural);
}

std::unique_ptr<Learner> load_learner(const scenario::ScenarioConfig& cfg, std::span<const std::uint8_t> bytes) {
  if (cfg.agent.type == scenario::AgentType::Tabular) {
    auto table = tabular::QTable::load(bytes);
    if (table.action_count() != cfg.world.actions.size()) throw ConfigError("q-table action count differs from scenario");
    return std::make_unique<TabularLearner>(std::move(table));
  }
  auto dqn = DqnLearner::load(bytes, cfg.agent.neural);
  if (dqn.network().output_size() != cfg.world.actions.size() || dqn.network().input_size() != cfg.agent.state.size()) {
    throw ConfigError("network shape differs from scenario");
  }
  return std::make_unique<DqnLearner>(std::move(dqn));
}

}  // namespace rf::harness
