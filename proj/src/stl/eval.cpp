#include "rf/stl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rf::stl {

namespace {

constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

std::size_t floor_steps(double seconds, double timestep) {
  const double q = seconds / timestep;
  double k = std::floor(q);
  if (q - k > 1.0 - 1e-9) k += 1.0;
  return static_cast<std::size_t>(k);
}

bool compare(double lhs, Comparator op, double rhs) {
  switch (op) {
    case Comparator::Less: return lhs < rhs;
    case Comparator::LessEqual: return lhs <= rhs;
    case Comparator::Greater: return lhs > rhs;
    case Comparator::GreaterEqual: return lhs >= rhs;
  }
  return false;
}

// Counts of ones in s[0..i), so count(lo..hi inclusive) = c[hi+1] - c[lo].
std::vector<std::size_t> prefix_counts(const std::vector<std::uint8_t>& s) {
  std::vector<std::size_t> c(s.size() + 1, 0);
  for (std::size_t i = 0; i < s.size(); ++i) c[i + 1] = c[i] + s[i];
  return c;
}

// Clipped absolute range [lo, hi] for evaluation instant t; empty when lo > hi.
std::pair<std::size_t, std::size_t> window_at(std::size_t t, const SampleWindow& w, std::size_t n) {
  const std::size_t lo = t + w.first;
  std::size_t hi = n - 1;
  if (w.last != kUnbounded && w.last <= n - 1 - t) hi = t + w.last;
  return {lo, hi};
}

class Evaluator {
 public:
  explicit Evaluator(TraceView tr) : tr_(tr), n_(tr.length()) {}

  std::vector<std::uint8_t> eval(const Formula& f) {
    if (auto p = f.as<Predicate>()) return predicate(*p);
    if (auto p = f.as<Not>()) {
      auto s = eval(*p->arg);
      for (auto& v : s) v = !v;
      return s;
    }
    if (auto p = f.as<And>()) {
      auto a = eval(*p->lhs);
      auto b = eval(*p->rhs);
      for (std::size_t i = 0; i < n_; ++i) a[i] = a[i] && b[i];
      return a;
    }
    if (auto p = f.as<Or>()) {
      auto a = eval(*p->lhs);
      auto b = eval(*p->rhs);
      for (std::size_t i = 0; i < n_; ++i) a[i] = a[i] || b[i];
      return a;
    }
    if (auto p = f.as<Always>()) return always(*p);
    if (auto p = f.as<Eventually>()) return eventually(*p);
    return until(*f.as<Until>());
  }

 private:
  std::vector<std::uint8_t> predicate(const Predicate& p) {
    std::vector<double> acc(n_, p.lhs.offset);
    for (const auto& term : p.lhs.terms) {
      auto idx = tr_.trace().signal_index(term.signal);
      if (!idx) throw EvalError(EvalError::Kind::UnknownSignal, "unknown signal: " + term.signal);
      auto col = tr_.trace().column(*idx);
      for (std::size_t i = 0; i < n_; ++i) acc[i] += term.coef * col[i];
    }
    std::vector<std::uint8_t> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = compare(acc[i], p.op, p.rhs);
    return out;
  }

  std::vector<std::uint8_t> always(const Always& a) {
    const auto s = eval(*a.arg);
    const auto c = prefix_counts(s);
    const SampleWindow w = to_samples(a.window, tr_.timestep());
    std::vector<std::uint8_t> out(n_, 1);
    for (std::size_t t = 0; t < n_; ++t) {
      auto [lo, hi] = window_at(t, w, n_);
      if (lo > hi) continue;
      out[t] = (c[hi + 1] - c[lo]) == (hi - lo + 1);
    }
    return out;
  }

  std::vector<std::uint8_t> eventually(const Eventually& e) {
    const auto s = eval(*e.arg);
    const auto c = prefix_counts(s);
    const SampleWindow w = to_samples(e.window, tr_.timestep());
    std::vector<std::uint8_t> out(n_, 0);
    for (std::size_t t = 0; t < n_; ++t) {
      auto [lo, hi] = window_at(t, w, n_);
      if (lo > hi) continue;
      out[t] = c[hi + 1] > c[lo];
    }
    return out;
  }

  std::vector<std::uint8_t> until(const Until& u) {
    const auto s1 = eval(*u.lhs);
    const auto s2 = eval(*u.rhs);
    const auto c2 = prefix_counts(s2);
    // First index >= t where the left operand fails (n when it never does).
    std::vector<std::size_t> next_fail(n_ + 1, n_);
    for (std::size_t t = n_; t-- > 0;) next_fail[t] = s1[t] ? next_fail[t + 1] : t;
    const SampleWindow w = to_samples(u.window, tr_.timestep());
    std::vector<std::uint8_t> out(n_, 0);
    for (std::size_t t = 0; t < n_; ++t) {
      auto [lo, hi] = window_at(t, w, n_);
      // The witness may sit on the first failure of the left operand.
      hi = std::min(hi, next_fail[t]);
      if (lo > hi) continue;
      out[t] = c2[hi + 1] > c2[lo];
    }
    return out;
  }

  TraceView tr_;
  std::size_t n_;
};

}  // namespace

SampleWindow to_samples(const Interval& window, double timestep) {
  SampleWindow w;
  w.first = floor_steps(window.lo, timestep);
  w.last = window.hi ? floor_steps(*window.hi, timestep) : kUnbounded;
  return w;
}

std::vector<std::uint8_t> satisfaction(const Formula& f, TraceView tr) {
  if (tr.length() == 0) return {};
  return Evaluator(tr).eval(f);
}

bool eval_at(const Formula& f, TraceView tr, std::size_t t) {
  if (t >= tr.length()) {
    throw EvalError(EvalError::Kind::OutOfRange,
                    "sample " + std::to_string(t) + " outside trace of length " + std::to_string(tr.length()));
  }
  return satisfaction(f, tr)[t] != 0;
}

bool indicator(const Formula& f, const Trace& tr, std::size_t t) {
  if (t >= tr.length()) {
    throw EvalError(EvalError::Kind::OutOfRange,
                    "sample " + std::to_string(t) + " outside trace of length " + std::to_string(tr.length()));
  }
  return eval_at(f, TraceView(tr, t + 1), 0);
}

void check_signals(const Formula& f, const Trace& tr) {
  for (const auto& name : signals_of(f)) {
    if (!tr.has_signal(name)) throw EvalError(EvalError::Kind::UnknownSignal, "unknown signal: " + name);
  }
}

}  // namespace rf::stl
