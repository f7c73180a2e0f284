#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rf/stl/formula.hpp"
#include "rf/stl/trace.hpp"

namespace rf::stl {

class EvalError : public std::runtime_error {
 public:
  enum class Kind { UnknownSignal, OutOfRange };
  EvalError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Sample offsets [first, last] covered by a window at the given timestep.
/// Bounds are floored after dividing by the timestep; quotients within 1e-9
/// of the next integer are rounded up so that e.g. 0.3 s / 0.1 s maps to 3.
struct SampleWindow {
  std::size_t first = 0;
  std::size_t last = 0;  // SIZE_MAX when unbounded
};
SampleWindow to_samples(const Interval& window, double timestep);

/// Truth value of f at every sample of the view (finite-trace semantics:
/// windows are clipped to the view; Always is weak and Eventually/Until are
/// strong at the end).
std::vector<std::uint8_t> satisfaction(const Formula& f, TraceView tr);

/// Truth value of f at sample t.
bool eval_at(const Formula& f, TraceView tr, std::size_t t);

/// I(f, s_{0:t}): f evaluated at time 0 over the prefix ending at sample t.
bool indicator(const Formula& f, const Trace& tr, std::size_t t);

/// Throws EvalError if any signal referenced by f is missing from the trace.
void check_signals(const Formula& f, const Trace& tr);

}  // namespace rf::stl
