#include "rf/stl/formula.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace rf::stl {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_interval(const Interval& w) {
  if (!std::isfinite(w.lo) || w.lo < 0.0) throw std::invalid_argument("interval lower bound must be >= 0");
  if (w.hi && (!std::isfinite(*w.hi) || *w.hi < w.lo)) {
    throw std::invalid_argument("interval upper bound must be finite and >= lower bound");
  }
}

std::string interval_suffix(const Interval& w) {
  if (w.is_unbounded()) return "";
  return "[" + format_number(w.lo) + "," + format_number(*w.hi) + "]";
}

std::string expr_to_string(const SignalExpr& e) {
  std::string out;
  bool first = true;
  auto emit_sign = [&](bool negative) {
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
  };
  for (const auto& t : e.terms) {
    emit_sign(std::signbit(t.coef));
    const double mag = std::fabs(t.coef);
    if (mag != 1.0) out += format_number(mag) + "*";
    out += t.signal;
  }
  if (e.terms.empty()) {
    out += format_number(e.offset);
  } else if (e.offset != 0.0) {
    emit_sign(e.offset < 0.0);
    out += format_number(std::fabs(e.offset));
  }
  return out;
}

}  // namespace

const char* to_string(Comparator op) {
  switch (op) {
    case Comparator::Less: return "<";
    case Comparator::LessEqual: return "<=";
    case Comparator::Greater: return ">";
    case Comparator::GreaterEqual: return ">=";
  }
  return "?";
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int Formula::depth() const {
  return std::visit(Overloaded{
                        [](const Predicate&) { return 1; },
                        [](const Not& n) { return 1 + n.arg->depth(); },
                        [](const And& n) { return 1 + std::max(n.lhs->depth(), n.rhs->depth()); },
                        [](const Or& n) { return 1 + std::max(n.lhs->depth(), n.rhs->depth()); },
                        [](const Always& n) { return 1 + n.arg->depth(); },
                        [](const Eventually& n) { return 1 + n.arg->depth(); },
                        [](const Until& n) { return 1 + std::max(n.lhs->depth(), n.rhs->depth()); },
                    },
                    node_);
}

bool Formula::is_state_formula() const {
  return std::visit(Overloaded{
                        [](const Predicate&) { return true; },
                        [](const Not& n) { return n.arg->is_state_formula(); },
                        [](const And& n) { return n.lhs->is_state_formula() && n.rhs->is_state_formula(); },
                        [](const Or& n) { return n.lhs->is_state_formula() && n.rhs->is_state_formula(); },
                        [](const Always&) { return false; },
                        [](const Eventually&) { return false; },
                        [](const Until&) { return false; },
                    },
                    node_);
}

FormulaPtr predicate(SignalExpr lhs, Comparator op, double rhs) {
  for (const auto& t : lhs.terms) {
    if (!std::isfinite(t.coef)) throw std::invalid_argument("non-finite coefficient");
  }
  if (!std::isfinite(lhs.offset) || !std::isfinite(rhs)) throw std::invalid_argument("non-finite constant");
  return std::make_shared<const Formula>(Predicate{std::move(lhs), op, rhs});
}

FormulaPtr predicate(const std::string& signal, Comparator op, double rhs) {
  return predicate(SignalExpr{{Term{1.0, signal}}, 0.0}, op, rhs);
}

FormulaPtr negation(FormulaPtr arg) { return std::make_shared<const Formula>(Not{std::move(arg)}); }

FormulaPtr conjunction(FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<const Formula>(And{std::move(lhs), std::move(rhs)});
}

FormulaPtr disjunction(FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<const Formula>(Or{std::move(lhs), std::move(rhs)});
}

FormulaPtr always(Interval window, FormulaPtr arg) {
  check_interval(window);
  return std::make_shared<const Formula>(Always{window, std::move(arg)});
}

FormulaPtr eventually(Interval window, FormulaPtr arg) {
  check_interval(window);
  return std::make_shared<const Formula>(Eventually{window, std::move(arg)});
}

FormulaPtr until(Interval window, FormulaPtr lhs, FormulaPtr rhs) {
  check_interval(window);
  return std::make_shared<const Formula>(Until{window, std::move(lhs), std::move(rhs)});
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      Overloaded{
          [&](const Predicate& p) {
            const auto& q = *b.as<Predicate>();
            return p.lhs == q.lhs && p.op == q.op && p.rhs == q.rhs;
          },
          [&](const Not& p) { return structurally_equal(*p.arg, *b.as<Not>()->arg); },
          [&](const And& p) {
            const auto& q = *b.as<And>();
            return structurally_equal(*p.lhs, *q.lhs) && structurally_equal(*p.rhs, *q.rhs);
          },
          [&](const Or& p) {
            const auto& q = *b.as<Or>();
            return structurally_equal(*p.lhs, *q.lhs) && structurally_equal(*p.rhs, *q.rhs);
          },
          [&](const Always& p) {
            const auto& q = *b.as<Always>();
            return p.window == q.window && structurally_equal(*p.arg, *q.arg);
          },
          [&](const Eventually& p) {
            const auto& q = *b.as<Eventually>();
            return p.window == q.window && structurally_equal(*p.arg, *q.arg);
          },
          [&](const Until& p) {
            const auto& q = *b.as<Until>();
            return p.window == q.window && structurally_equal(*p.lhs, *q.lhs) &&
                   structurally_equal(*p.rhs, *q.rhs);
          },
      },
      a.node());
}

std::string to_string(const Formula& f) {
  return std::visit(Overloaded{
                        [](const Predicate& p) {
                          return expr_to_string(p.lhs) + " " + to_string(p.op) + " " + format_number(p.rhs);
                        },
                        [](const Not& n) { return "!(" + to_string(*n.arg) + ")"; },
                        [](const And& n) { return "(" + to_string(*n.lhs) + " && " + to_string(*n.rhs) + ")"; },
                        [](const Or& n) { return "(" + to_string(*n.lhs) + " || " + to_string(*n.rhs) + ")"; },
                        [](const Always& n) { return "G" + interval_suffix(n.window) + "(" + to_string(*n.arg) + ")"; },
                        [](const Eventually& n) {
                          return "F" + interval_suffix(n.window) + "(" + to_string(*n.arg) + ")";
                        },
                        [](const Until& n) {
                          return "(" + to_string(*n.lhs) + " U" + interval_suffix(n.window) + " " +
                                 to_string(*n.rhs) + ")";
                        },
                    },
                    f.node());
}

std::vector<std::string> signals_of(const Formula& f) {
  std::vector<std::string> out;
  auto walk = [&](auto&& self, const Formula& g) -> void {
    std::visit(Overloaded{
                   [&](const Predicate& p) {
                     for (const auto& t : p.lhs.terms) {
                       if (std::find(out.begin(), out.end(), t.signal) == out.end()) out.push_back(t.signal);
                     }
                   },
                   [&](const Not& n) { self(self, *n.arg); },
                   [&](const And& n) {
                     self(self, *n.lhs);
                     self(self, *n.rhs);
                   },
                   [&](const Or& n) {
                     self(self, *n.lhs);
                     self(self, *n.rhs);
                   },
                   [&](const Always& n) { self(self, *n.arg); },
                   [&](const Eventually& n) { self(self, *n.arg); },
                   [&](const Until& n) {
                     self(self, *n.lhs);
                     self(self, *n.rhs);
                   },
               },
               g.node());
  };
  walk(walk, f);
  return out;
}

}  // namespace rf::stl
