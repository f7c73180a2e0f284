#include "rf/tabular/qtable.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rf/io/binary.hpp"

namespace rf::tabular {

namespace {

constexpr io::Magic kMagic{'R', 'F', 'Q', 'T'};
constexpr std::uint32_t kVersion = 1;

void check_hyperparameters(const Hyperparameters& hp) {
  if (!(hp.alpha > 0.0 && hp.alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
  if (!(hp.gamma >= 0.0 && hp.gamma <= 1.0)) throw std::invalid_argument("gamma must be in [0, 1]");
  if (!(hp.epsilon >= 0.0 && hp.epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in [0, 1]");
  if (!(hp.alpha_decay_power >= 0.0 && hp.alpha_decay_power <= 1.0)) {
    throw std::invalid_argument("alpha_decay_power must be in [0, 1]");
  }
  if (!(hp.epsilon_floor >= 0.0 && hp.epsilon_floor <= hp.epsilon)) {
    throw std::invalid_argument("epsilon_floor must be in [0, epsilon]");
  }
}

}  // namespace

Discretizer::Discretizer(std::vector<Dimension> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("discretizer needs at least one dimension");
  for (const auto& d : dims_) {
    if (d.bins < 1) throw std::invalid_argument("discretizer: bins must be >= 1 for " + d.name);
    if (!std::isfinite(d.lo) || !std::isfinite(d.hi) || !(d.lo < d.hi)) {
      throw std::invalid_argument("discretizer: need finite lo < hi for " + d.name);
    }
    count_ *= d.bins;
  }
}

std::size_t Discretizer::bin(std::size_t dim, double value) const {
  const auto& d = dims_[dim];
  if (!(value > d.lo)) return 0;  // also catches NaN
  if (value >= d.hi) return d.bins - 1;
  const auto b = static_cast<std::size_t>((value - d.lo) / (d.hi - d.lo) * static_cast<double>(d.bins));
  return std::min(b, d.bins - 1);
}

std::size_t Discretizer::index(std::span<const double> state) const {
  if (state.size() != dims_.size()) throw std::invalid_argument("state dimension does not match discretizer");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) idx = idx * dims_[i].bins + bin(i, state[i]);
  return idx;
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::size_t epsilon_soft(std::span<const double> q_row, double epsilon, Rng& rng) {
  if (uniform01(rng) < epsilon) return uniform_index(rng, q_row.size());
  return argmax(q_row);
}

double scheduled_epsilon(const Hyperparameters& hp, std::size_t episode) {
  if (hp.epsilon_decay_episodes == 0) return hp.epsilon;
  const double frac = std::min(1.0, static_cast<double>(episode) / static_cast<double>(hp.epsilon_decay_episodes));
  return hp.epsilon + (hp.epsilon_floor - hp.epsilon) * frac;
}

QTable::QTable(Discretizer discretizer, std::size_t action_count, Hyperparameters hp)
    : disc_(std::move(discretizer)),
      actions_(action_count),
      hp_(hp),
      epsilon_(hp.epsilon),
      values_(disc_.state_count() * action_count, 0.0),
      visits_(values_.size(), 0) {
  if (actions_ < 1) throw std::invalid_argument("q-table needs at least one action");
  check_hyperparameters(hp_);
}

void QTable::randomize(Rng& rng, double magnitude) {
  for (auto& v : values_) v = uniform(rng, -magnitude, magnitude);
}

void QTable::set_epsilon(double e) {
  if (!(e >= 0.0 && e <= 1.0)) throw std::invalid_argument("epsilon must be in [0, 1]");
  epsilon_ = e;
}

std::size_t QTable::select_action(std::span<const double> state, Rng& rng) const {
  return epsilon_soft(row(disc_.index(state)), epsilon_, rng);
}

std::size_t QTable::greedy_action(std::span<const double> state) const { return argmax(row(disc_.index(state))); }

void QTable::update(std::span<const double> state, std::size_t action, double reward,
                    std::span<const double> next_state, bool terminal) {
  update_index(disc_.index(state), action, reward, disc_.index(next_state), terminal);
}

void QTable::update_index(std::size_t s, std::size_t action, double reward, std::size_t next_s, bool terminal) {
  if (action >= actions_) throw std::out_of_range("action index out of range");
  const std::size_t k = s * actions_ + action;
  const std::uint64_t n = ++visits_[k];
  const double alpha =
      hp_.alpha_decay_power > 0.0 ? hp_.alpha / std::pow(static_cast<double>(n), hp_.alpha_decay_power) : hp_.alpha;
  const double bootstrap = terminal ? 0.0 : hp_.gamma * row(next_s)[argmax(row(next_s))];
  values_[k] += alpha * (reward + bootstrap - values_[k]);
}

std::vector<std::uint8_t> QTable::save() const {
  io::ByteWriter w(kMagic, kVersion);
  w.u64(disc_.dims().size());
  for (const auto& d : disc_.dims()) {
    w.str(d.name);
    w.f64(d.lo);
    w.f64(d.hi);
    w.u64(d.bins);
  }
  w.u64(actions_);
  w.f64(hp_.alpha);
  w.f64(hp_.gamma);
  w.f64(hp_.epsilon);
  w.f64(hp_.alpha_decay_power);
  w.u64(hp_.epsilon_decay_episodes);
  w.f64(hp_.epsilon_floor);
  w.f64(epsilon_);
  w.f64s(values_);
  w.u64(visits_.size());
  for (auto v : visits_) w.u64(v);
  return std::move(w).finish();
}

QTable QTable::load(std::span<const std::uint8_t> bytes) {
  io::ByteReader r(bytes, kMagic, kVersion, "q-table");
  std::vector<Dimension> dims(r.u64());
  for (auto& d : dims) {
    d.name = r.str();
    d.lo = r.f64();
    d.hi = r.f64();
    d.bins = r.u64();
  }
  const std::size_t actions = r.u64();
  Hyperparameters hp;
  hp.alpha = r.f64();
  hp.gamma = r.f64();
  hp.epsilon = r.f64();
  hp.alpha_decay_power = r.f64();
  hp.epsilon_decay_episodes = r.u64();
  hp.epsilon_floor = r.f64();
  const double eps = r.f64();
  QTable qt(Discretizer(std::move(dims)), actions, hp);
  qt.epsilon_ = eps;
  auto values = r.f64s();
  if (values.size() != qt.values_.size()) throw FormatError("q-table: value count does not match shape");
  qt.values_ = std::move(values);
  if (r.u64() != qt.visits_.size()) throw FormatError("q-table: visit count does not match shape");
  for (auto& v : qt.visits_) v = r.u64();
  r.expect_end();
  return qt;
}

}  // namespace rf::tabular
