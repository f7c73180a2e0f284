#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rf::stl {

/// Time window in seconds relative to the evaluation instant. An unbounded
/// interval is [0, inf).
struct Interval {
  double lo = 0.0;
  std::optional<double> hi;

  static Interval unbounded() { return {}; }
  static Interval bounded(double lo, double hi) { return {lo, hi}; }
  bool is_unbounded() const { return !hi.has_value(); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Term {
  double coef = 1.0;
  std::string signal;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Affine combination sum(coef_i * signal_i) + offset.
struct SignalExpr {
  std::vector<Term> terms;
  double offset = 0.0;

  friend bool operator==(const SignalExpr&, const SignalExpr&) = default;
};

enum class Comparator { Less, LessEqual, Greater, GreaterEqual };

const char* to_string(Comparator op);

class Formula;

struct Predicate {
  SignalExpr lhs;
  Comparator op;
  double rhs;
};
struct Not {
  std::shared_ptr<const Formula> arg;
};
struct And {
  std::shared_ptr<const Formula> lhs, rhs;
};
struct Or {
  std::shared_ptr<const Formula> lhs, rhs;
};
struct Always {
  Interval window;
  std::shared_ptr<const Formula> arg;
};
struct Eventually {
  Interval window;
  std::shared_ptr<const Formula> arg;
};
struct Until {
  Interval window;
  std::shared_ptr<const Formula> lhs, rhs;
};

/// Immutable STL abstract syntax tree. Children are shared, so copies are cheap
/// and subtrees may appear in several parents.
class Formula {
 public:
  using Node = std::variant<Predicate, Not, And, Or, Always, Eventually, Until>;

  explicit Formula(Node node) : node_(std::move(node)) {}

  const Node& node() const { return node_; }

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node_);
  }

  /// Number of nodes on the longest root-to-leaf path; a predicate has depth 1.
  int depth() const;

  /// True when no temporal operator occurs anywhere in the tree.
  bool is_state_formula() const;

 private:
  Node node_;
};

using FormulaPtr = std::shared_ptr<const Formula>;

// Builders.
FormulaPtr predicate(SignalExpr lhs, Comparator op, double rhs);
FormulaPtr predicate(const std::string& signal, Comparator op, double rhs);
FormulaPtr negation(FormulaPtr arg);
FormulaPtr conjunction(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr disjunction(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr always(Interval window, FormulaPtr arg);
FormulaPtr eventually(Interval window, FormulaPtr arg);
FormulaPtr until(Interval window, FormulaPtr lhs, FormulaPtr rhs);

/// Structural equality (same tree shape, operators, constants and names).
bool structurally_equal(const Formula& a, const Formula& b);

/// Canonical text that parse_formula maps back to a structurally equal tree.
std::string to_string(const Formula& f);

/// Distinct signal names referenced by the formula, in first-occurrence order.
std::vector<std::string> signals_of(const Formula& f);

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double v);

}  // namespace rf::stl
