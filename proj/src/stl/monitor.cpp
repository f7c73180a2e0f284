#include "rf/stl/monitor.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace rf::stl {

namespace {

// Temporal-free formula compiled against column indices.
class StateEval {
 public:
  StateEval(const Formula& f, const std::unordered_map<std::string, std::size_t>& cols) { compile(f, cols); }

  bool at(const Trace& tr, std::size_t t) const { return run(0, tr, t); }

 private:
  enum class Op { Pred, Not, And, Or };
  struct Ins {
    Op op;
    std::size_t a = 0, b = 0;  // child instruction indices
    const Predicate* pred = nullptr;
    std::vector<std::size_t> cols;
  };

  std::size_t compile(const Formula& f, const std::unordered_map<std::string, std::size_t>& cols) {
    const std::size_t me = code_.size();
    code_.emplace_back();
    if (auto p = f.as<Predicate>()) {
      code_[me].op = Op::Pred;
      code_[me].pred = p;
      for (const auto& term : p->lhs.terms) {
        auto it = cols.find(term.signal);
        if (it == cols.end()) throw EvalError(EvalError::Kind::UnknownSignal, "unknown signal: " + term.signal);
        code_[me].cols.push_back(it->second);
      }
    } else if (auto p = f.as<Not>()) {
      code_[me].op = Op::Not;
      code_[me].a = compile(*p->arg, cols);
    } else if (auto p = f.as<And>()) {
      code_[me].op = Op::And;
      const std::size_t a = compile(*p->lhs, cols);
      const std::size_t b = compile(*p->rhs, cols);
      code_[me].a = a;
      code_[me].b = b;
    } else if (auto p = f.as<Or>()) {
      code_[me].op = Op::Or;
      const std::size_t a = compile(*p->lhs, cols);
      const std::size_t b = compile(*p->rhs, cols);
      code_[me].a = a;
      code_[me].b = b;
    } else {
      throw std::logic_error("temporal operator in state formula");
    }
    return me;
  }

  bool run(std::size_t i, const Trace& tr, std::size_t t) const {
    const Ins& ins = code_[i];
    switch (ins.op) {
      case Op::Pred: {
        // Same accumulation order as the batch evaluator: offset, then terms.
        double acc = ins.pred->lhs.offset;
        for (std::size_t k = 0; k < ins.cols.size(); ++k) acc += ins.pred->lhs.terms[k].coef * tr.column(ins.cols[k])[t];
        switch (ins.pred->op) {
          case Comparator::Less: return acc < ins.pred->rhs;
          case Comparator::LessEqual: return acc <= ins.pred->rhs;
          case Comparator::Greater: return acc > ins.pred->rhs;
          case Comparator::GreaterEqual: return acc >= ins.pred->rhs;
        }
        return false;
      }
      case Op::Not: return !run(ins.a, tr, t);
      case Op::And: return run(ins.a, tr, t) && run(ins.b, tr, t);
      case Op::Or: return run(ins.a, tr, t) || run(ins.b, tr, t);
    }
    return false;
  }

  std::vector<Ins> code_;
};

bool in_window(std::size_t t, const SampleWindow& w) {
  return t >= w.first && (w.last == std::numeric_limits<std::size_t>::max() || t <= w.last);
}

}  // namespace

struct PrefixMonitor::Node {
  enum class Kind { State, Always, Eventually, Until, Not, And, Or, Slow };

  Kind kind = Kind::Slow;
  const Formula* formula = nullptr;
  std::unique_ptr<StateEval> lhs_state, rhs_state;
  std::unique_ptr<Node> lhs, rhs;
  SampleWindow window;
  std::vector<std::uint8_t> history;
  // Until: whether the left operand held at every sample so far.
  std::vector<std::uint8_t> left_held;

  bool push(const Trace& tr, std::size_t t) {
    const bool prev = t > 0 ? history[t - 1] : false;
    bool v = false;
    switch (kind) {
      case Kind::State:
        v = t > 0 ? prev : lhs_state->at(tr, 0);
        break;
      case Kind::Always: {
        const bool p = t > 0 ? prev : true;
        v = p && (!in_window(t, window) || lhs_state->at(tr, t));
        break;
      }
      case Kind::Eventually:
        v = prev || (in_window(t, window) && lhs_state->at(tr, t));
        break;
      case Kind::Until: {
        const bool held_before = t > 0 ? left_held[t - 1] : true;
        v = prev || (held_before && in_window(t, window) && rhs_state->at(tr, t));
        left_held.push_back(held_before && lhs_state->at(tr, t));
        break;
      }
      case Kind::Not:
        v = !lhs->push(tr, t);
        break;
      case Kind::And: {
        const bool a = lhs->push(tr, t);
        const bool b = rhs->push(tr, t);
        v = a && b;
        break;
      }
      case Kind::Or: {
        const bool a = lhs->push(tr, t);
        const bool b = rhs->push(tr, t);
        v = a || b;
        break;
      }
      case Kind::Slow:
        v = eval_at(*formula, TraceView(tr, t + 1), 0);
        break;
    }
    history.push_back(v);
    return v;
  }

  void truncate(std::size_t n) {
    history.resize(std::min(history.size(), n));
    if (left_held.size() > n) left_held.resize(n);
    if (lhs) lhs->truncate(n);
    if (rhs) rhs->truncate(n);
  }

  bool incremental() const {
    if (kind == Kind::Slow) return false;
    return (!lhs || lhs->incremental()) && (!rhs || rhs->incremental());
  }
};

namespace {

std::unique_ptr<PrefixMonitor::Node> build(const Formula& f,
                                                   const std::unordered_map<std::string, std::size_t>& cols,
                                                   double dt) {
  using Kind = PrefixMonitor::Node::Kind;
  auto node = std::make_unique<PrefixMonitor::Node>();
  node->formula = &f;
  if (f.is_state_formula()) {
    node->kind = Kind::State;
    node->lhs_state = std::make_unique<StateEval>(f, cols);
  } else if (auto p = f.as<Always>(); p && p->arg->is_state_formula()) {
    node->kind = Kind::Always;
    node->window = to_samples(p->window, dt);
    node->lhs_state = std::make_unique<StateEval>(*p->arg, cols);
  } else if (auto p = f.as<Eventually>(); p && p->arg->is_state_formula()) {
    node->kind = Kind::Eventually;
    node->window = to_samples(p->window, dt);
    node->lhs_state = std::make_unique<StateEval>(*p->arg, cols);
  } else if (auto p = f.as<Until>(); p && p->lhs->is_state_formula() && p->rhs->is_state_formula()) {
    node->kind = Kind::Until;
    node->window = to_samples(p->window, dt);
    node->lhs_state = std::make_unique<StateEval>(*p->lhs, cols);
    node->rhs_state = std::make_unique<StateEval>(*p->rhs, cols);
  } else if (auto p = f.as<Not>()) {
    node->kind = Kind::Not;
    node->lhs = build(*p->arg, cols, dt);
  } else if (auto p = f.as<And>()) {
    node->kind = Kind::And;
    node->lhs = build(*p->lhs, cols, dt);
    node->rhs = build(*p->rhs, cols, dt);
  } else if (auto p = f.as<Or>()) {
    node->kind = Kind::Or;
    node->lhs = build(*p->lhs, cols, dt);
    node->rhs = build(*p->rhs, cols, dt);
  } else {
    node->kind = Kind::Slow;
  }
  return node;
}

}  // namespace

PrefixMonitor::PrefixMonitor(FormulaPtr formula, const std::vector<std::string>& signal_names, double timestep)
    : formula_(std::move(formula)) {
  std::unordered_map<std::string, std::size_t> cols;
  for (std::size_t i = 0; i < signal_names.size(); ++i) cols.emplace(signal_names[i], i);
  for (const auto& name : signals_of(*formula_)) {
    if (!cols.count(name)) throw EvalError(EvalError::Kind::UnknownSignal, "unknown signal: " + name);
  }
  root_ = build(*formula_, cols, timestep);
}

PrefixMonitor::~PrefixMonitor() = default;
PrefixMonitor::PrefixMonitor(PrefixMonitor&&) noexcept = default;
PrefixMonitor& PrefixMonitor::operator=(PrefixMonitor&&) noexcept = default;

bool PrefixMonitor::push(const Trace& tr) {
  if (tr.length() <= size_) throw EvalError(EvalError::Kind::OutOfRange, "monitor is ahead of the trace");
  const bool v = root_->push(tr, size_);
  ++size_;
  return v;
}

void PrefixMonitor::truncate(std::size_t samples) {
  if (samples > size_) throw std::out_of_range("truncate beyond monitor history");
  root_->truncate(samples);
  size_ = samples;
}

bool PrefixMonitor::value() const {
  if (size_ == 0) throw std::logic_error("monitor has no samples");
  return root_->history[size_ - 1] != 0;
}

bool PrefixMonitor::value_at(std::size_t t) const {
  if (t >= size_) throw std::out_of_range("monitor sample out of range");
  return root_->history[t] != 0;
}

bool PrefixMonitor::incremental() const { return root_->incremental(); }

}  // namespace rf::stl
