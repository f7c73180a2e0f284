#include "rf/neural/replay.hpp"

#include <stdexcept>

#include "rf/io/binary.hpp"

namespace rf::neural {

namespace {
constexpr io::Magic kMagic{'R', 'F', 'R', 'B'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("replay capacity must be positive");
}

void ReplayBuffer::push(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
    return;
  }
  items_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= items_.size()) throw std::out_of_range("replay index out of range");
  return items_[(head_ + i) % items_.size()];
}

std::optional<std::vector<Transition>> ReplayBuffer::sample(std::size_t batch_size, Rng& rng) const {
  if (batch_size == 0 || items_.size() < batch_size) return std::nullopt;
  std::vector<Transition> out;
  out.reserve(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) out.push_back(items_[uniform_index(rng, items_.size())]);
  return out;
}

std::vector<std::uint8_t> ReplayBuffer::save() const {
  io::ByteWriter w(kMagic, kVersion);
  w.u64(capacity_);
  w.u64(items_.size());
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const auto& t = at(i);
    w.f64s(t.state);
    w.u64(t.action);
    w.f64(t.reward);
    w.f64s(t.next_state);
    w.u8(t.terminal ? 1 : 0);
  }
  return std::move(w).finish();
}

ReplayBuffer ReplayBuffer::load(std::span<const std::uint8_t> bytes) {
  io::ByteReader r(bytes, kMagic, kVersion, "replay buffer");
  ReplayBuffer buf(r.u64());
  const std::size_t n = r.u64();
  if (n > buf.capacity_) throw FormatError("replay buffer: more items than capacity");
  for (std::size_t i = 0; i < n; ++i) {
    Transition t;
    t.state = r.f64s();
    t.action = r.u64();
    t.reward = r.f64();
    t.next_state = r.f64s();
    t.terminal = r.u8() != 0;
    buf.push(std::move(t));
  }
  r.expect_end();
  return buf;
}

}  // namespace rf::neural
