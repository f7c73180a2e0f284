#include "rf/stl/trace.hpp"

#include <stdexcept>

namespace rf::stl {

Trace::Trace(double timestep, std::vector<std::string> signal_names)
    : timestep_(timestep), names_(std::move(signal_names)), columns_(names_.size()) {
  if (!(timestep_ > 0.0)) throw std::invalid_argument("trace timestep must be positive");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second) {
      throw std::invalid_argument("duplicate signal name: " + names_[i]);
    }
  }
}

std::optional<std::size_t> Trace::signal_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> Trace::signal(const std::string& name) const {
  auto idx = signal_index(name);
  if (!idx) throw std::out_of_range("unknown signal: " + name);
  return column(*idx);
}

void Trace::push_sample(std::span<const double> values) {
  if (values.size() != names_.size()) throw std::invalid_argument("sample width does not match signal count");
  for (std::size_t i = 0; i < values.size(); ++i) {
    columns_[i].resize(length_);
    columns_[i].push_back(values[i]);
  }
  ++length_;
}

void Trace::set_signal(const std::string& name, std::vector<double> values) {
  auto idx = signal_index(name);
  if (!idx) throw std::out_of_range("unknown signal: " + name);
  if (length_ == 0) {
    // First column defines the length; the others are zero-filled until set.
    length_ = values.size();
    for (auto& c : columns_) c.assign(length_, 0.0);
  } else if (values.size() != length_) {
    throw std::invalid_argument("signal arrays must have identical length");
  }
  columns_[*idx] = std::move(values);
}

void Trace::truncate(std::size_t length) {
  if (length > length_) throw std::out_of_range("truncate beyond trace length");
  for (auto& c : columns_) c.resize(length);
  length_ = length;
}

TraceView::TraceView(const Trace& trace, std::size_t length) : trace_(&trace), length_(length) {
  if (length > trace.length()) throw std::out_of_range("trace view longer than trace");
}

Trace make_trace(double timestep, const std::vector<std::pair<std::string, std::vector<double>>>& columns) {
  std::vector<std::string> names;
  for (const auto& [name, values] : columns) names.push_back(name);
  Trace tr(timestep, names);
  for (const auto& [name, values] : columns) tr.set_signal(name, values);
  return tr;
}

}  // namespace rf::stl
