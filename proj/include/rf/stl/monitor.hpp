#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "rf/stl/eval.hpp"
#include "rf/stl/formula.hpp"
#include "rf/stl/trace.hpp"

namespace rf::stl {

/// Incremental prefix indicator: after push() for samples 0..t, value() equals
/// indicator(f, trace, t). Formulas built from state formulas under Always,
/// Eventually and Until (and boolean combinations of those) update in O(|f|)
/// per sample; any other subformula is re-evaluated over the prefix.
///
/// The monitor keeps the full per-sample history, so truncate() can rewind it
/// in lockstep with a trace (used by depth-first search).
class PrefixMonitor {
 public:
  PrefixMonitor(FormulaPtr formula, const std::vector<std::string>& signal_names, double timestep);
  ~PrefixMonitor();
  PrefixMonitor(PrefixMonitor&&) noexcept;
  PrefixMonitor& operator=(PrefixMonitor&&) noexcept;

  /// Consumes sample size() of tr and returns the indicator for that prefix.
  bool push(const Trace& tr);
  void truncate(std::size_t samples);

  std::size_t size() const { return size_; }
  bool value() const;
  bool value_at(std::size_t t) const;
  /// True when no subformula needs prefix re-evaluation.
  bool incremental() const;
  const Formula& formula() const { return *formula_; }

  struct Node;  // evaluation tree; defined in monitor.cpp

 private:
  FormulaPtr formula_;
  std::unique_ptr<Node> root_;
  std::size_t size_ = 0;
};

}  // namespace rf::stl
