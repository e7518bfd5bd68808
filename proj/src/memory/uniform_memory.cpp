#include "restart/memory/uniform_memory.hpp"

#include <algorithm>

namespace restart::memory {

namespace {
constexpr std::uint8_t kTag = 'U';
}

UniformMemory::UniformMemory(std::size_t capacity, int t_aug) : capacity_(capacity), t_aug_(t_aug) {
  if (capacity == 0) throw std::invalid_argument("memory capacity must be positive");
  if (t_aug < 1) throw std::invalid_argument("t_aug must be positive");
  items_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void UniformMemory::push(StateSnapshot s) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(s));
  } else {
    items_[cursor_] = std::move(s);
  }
  cursor_ = (cursor_ + 1) % capacity_;
}

RestartSample UniformMemory::sample(Rng& rng) {
  if (items_.empty()) throw EmptyMemory();
  ++reads_;
  const auto slot = std::uniform_int_distribution<std::size_t>(0, items_.size() - 1)(rng);
  return RestartSample{items_[slot], t_aug_, OriginKind::Uniform, slot, std::nullopt};
}

Bytes UniformMemory::serialize() const {
  ByteWriter w;
  w.u8(kTag);
  w.u64(capacity_);
  w.i32(t_aug_);
  w.u64(cursor_);
  w.u64(items_.size());
  for (const auto& s : items_) write_snapshot(w, s);
  return encode_frame(kSnapshotVersion, w.data());
}

UniformMemory UniformMemory::deserialize(std::span<const std::uint8_t> frame) {
  const Bytes body = decode_frame(frame, kSnapshotVersion);
  ByteReader r(body);
  if (r.u8() != kTag) throw FramingError("not a uniform memory file");
  const auto capacity = r.u64();
  UniformMemory m(capacity, r.i32());
  const auto cursor = r.u64();
  const auto n = r.u64();
  if (n > capacity || cursor >= capacity) throw FramingError("inconsistent uniform memory header");
  for (std::uint64_t i = 0; i < n; ++i) m.items_.push_back(read_snapshot(r));
  m.cursor_ = cursor;
  r.expect_done("uniform memory");
  return m;
}

}  // namespace restart::memory
