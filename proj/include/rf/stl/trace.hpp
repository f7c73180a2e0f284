#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace rf::stl {

/// Fixed-timestep multi-signal record. Sample index t is wall time t * timestep.
class Trace {
 public:
  Trace(double timestep, std::vector<std::string> signal_names);

  double timestep() const { return timestep_; }
  std::size_t length() const { return length_; }
  const std::vector<std::string>& signal_names() const { return names_; }

  std::optional<std::size_t> signal_index(const std::string& name) const;
  bool has_signal(const std::string& name) const { return signal_index(name).has_value(); }

  /// Column of one signal; throws std::out_of_range for an unknown name.
  std::span<const double> signal(const std::string& name) const;
  std::span<const double> column(std::size_t index) const { return {columns_[index].data(), length_}; }

  /// Appends one sample; values are ordered as signal_names().
  void push_sample(std::span<const double> values);

  /// Replaces a whole column. Every column must end up with the same length.
  void set_signal(const std::string& name, std::vector<double> values);

  void truncate(std::size_t length);

 private:
  double timestep_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<double>> columns_;
  std::size_t length_ = 0;
};

/// Read-only prefix of a trace: samples 0..length-1.
class TraceView {
 public:
  TraceView(const Trace& trace) : trace_(&trace), length_(trace.length()) {}  // NOLINT
  TraceView(const Trace& trace, std::size_t length);

  const Trace& trace() const { return *trace_; }
  std::size_t length() const { return length_; }
  double timestep() const { return trace_->timestep(); }

  TraceView prefix(std::size_t length) const { return TraceView(*trace_, length); }

 private:
  const Trace* trace_;
  std::size_t length_;
};

/// Convenience for tests and tools: build a trace from named columns.
Trace make_trace(double timestep, const std::vector<std::pair<std::string, std::vector<double>>>& columns);

}  // namespace rf::stl
