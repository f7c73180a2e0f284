#pragma once

// Straight-line recursive evaluator written against the textbook
// finite-trace definitions, used as an oracle for rf::stl::eval_at.
// Interval bounds in tests are whole multiples of the timestep, so a bound is
// converted to a sample offset by rounding to the nearest integer.

#include <cmath>
#include <cstddef>
#include <limits>

#include "rf/stl/formula.hpp"
#include "rf/stl/trace.hpp"

namespace naive {

inline long ticks(double seconds, double dt) { return std::lround(seconds / dt); }

inline bool in_window(const rf::stl::Interval& w, long offset, double dt) {
  if (offset < ticks(w.lo, dt)) return false;
  return !w.hi || offset <= ticks(*w.hi, dt);
}

inline bool eval(const rf::stl::Formula& f, const rf::stl::Trace& tr, std::size_t len, std::size_t t) {
  using namespace rf::stl;
  const double dt = tr.timestep();
  if (auto p = f.as<Predicate>()) {
    double lhs = p->lhs.offset;
    for (const auto& term : p->lhs.terms) lhs += term.coef * tr.signal(term.signal)[t];
    switch (p->op) {
      case Comparator::Less: return lhs < p->rhs;
      case Comparator::LessEqual: return lhs <= p->rhs;
      case Comparator::Greater: return lhs > p->rhs;
      case Comparator::GreaterEqual: return lhs >= p->rhs;
    }
  }
  if (auto n = f.as<Not>()) return !eval(*n->arg, tr, len, t);
  if (auto a = f.as<And>()) return eval(*a->lhs, tr, len, t) && eval(*a->rhs, tr, len, t);
  if (auto o = f.as<Or>()) return eval(*o->lhs, tr, len, t) || eval(*o->rhs, tr, len, t);
  if (auto g = f.as<Always>()) {
    for (std::size_t u = t; u < len; ++u) {
      if (in_window(g->window, static_cast<long>(u - t), dt) && !eval(*g->arg, tr, len, u)) return false;
    }
    return true;
  }
  if (auto e = f.as<Eventually>()) {
    for (std::size_t u = t; u < len; ++u) {
      if (in_window(e->window, static_cast<long>(u - t), dt) && eval(*e->arg, tr, len, u)) return true;
    }
    return false;
  }
  if (auto un = f.as<Until>()) {
    for (std::size_t u = t; u < len; ++u) {
      if (!in_window(un->window, static_cast<long>(u - t), dt) || !eval(*un->rhs, tr, len, u)) continue;
      bool held = true;
      for (std::size_t v = t; v < u && held; ++v) held = eval(*un->lhs, tr, len, v);
      if (held) return true;
    }
    return false;
  }
  return false;
}

inline bool eval(const rf::stl::Formula& f, const rf::stl::Trace& tr, std::size_t t) {
  return eval(f, tr, tr.length(), t);
}

}  // namespace naive
