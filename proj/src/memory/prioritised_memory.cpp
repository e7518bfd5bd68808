#include "restart/memory/prioritised_memory.hpp"

#include <cmath>
#include <string>

namespace restart::memory {

namespace {
constexpr std::uint8_t kTag = 'P';
}

PrioritisedMemory::PrioritisedMemory(std::size_t capacity, double alpha, double epsilon, int t_aug)
    : capacity_(capacity), alpha_(alpha), epsilon_(epsilon), t_aug_(t_aug), tree_(capacity) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be a finite non-negative number");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be positive");
  if (t_aug < 1) throw std::invalid_argument("t_aug must be positive");
}

double PrioritisedMemory::leaf_weight(double delta, double* priority) const {
  if (!std::isfinite(delta)) throw NonFiniteDelta();
  const double p = std::abs(delta) + epsilon_;
  if (priority) *priority = p;
  return std::pow(p, alpha_);
}

std::size_t PrioritisedMemory::push(StateSnapshot s, double delta) {
  double p = 0.0;
  const double w = leaf_weight(delta, &p);
  const std::size_t slot = cursor_;
  if (items_.size() < capacity_) {
    items_.push_back(std::move(s));
    priorities_.push_back(p);
  } else {
    items_[slot] = std::move(s);
    priorities_[slot] = p;
  }
  tree_.set(slot, w);
  cursor_ = (cursor_ + 1) % capacity_;
  return slot;
}

RestartSample PrioritisedMemory::sample(Rng& rng) {
  if (items_.empty()) throw EmptyMemory();
  ++reads_;
  const double mass = std::uniform_real_distribution<double>(0.0, tree_.total())(rng);
  const std::size_t slot = tree_.find(mass);
  return RestartSample{items_[slot], t_aug_, OriginKind::Prioritised, slot, std::nullopt};
}

void PrioritisedMemory::update(std::size_t slot, double delta) {
  if (slot >= items_.size()) {
    throw IndexOutOfRange("prioritised memory slot " + std::to_string(slot) + " out of range");
  }
  double p = 0.0;
  const double w = leaf_weight(delta, &p);
  priorities_[slot] = p;
  tree_.set(slot, w);
}

double PrioritisedMemory::priority(std::size_t slot) const {
  if (slot >= items_.size()) throw IndexOutOfRange("prioritised memory slot out of range");
  return priorities_[slot];
}

double PrioritisedMemory::probability(std::size_t slot) const {
  if (slot >= items_.size()) throw IndexOutOfRange("prioritised memory slot out of range");
  return tree_.weight(slot) / tree_.total();
}

Bytes PrioritisedMemory::serialize() const {
  ByteWriter w;
  w.u8(kTag);
  w.u64(capacity_);
  w.f64(alpha_);
  w.f64(epsilon_);
  w.i32(t_aug_);
  w.u64(cursor_);
  w.u64(items_.size());
  for (std::size_t i = 0; i < items_.size(); ++i) {
    write_snapshot(w, items_[i]);
    w.f64(priorities_[i]);
  }
  return encode_frame(kSnapshotVersion, w.data());
}

PrioritisedMemory PrioritisedMemory::deserialize(std::span<const std::uint8_t> frame) {
  const Bytes body = decode_frame(frame, kSnapshotVersion);
  ByteReader r(body);
  if (r.u8() != kTag) throw FramingError("not a prioritised memory file");
  const auto capacity = r.u64();
  const double alpha = r.f64();
  const double epsilon = r.f64();
  PrioritisedMemory m(capacity, alpha, epsilon, r.i32());
  const auto cursor = r.u64();
  const auto n = r.u64();
  if (n > capacity || cursor >= capacity) throw FramingError("inconsistent prioritised memory header");
  for (std::uint64_t i = 0; i < n; ++i) {
    m.items_.push_back(read_snapshot(r));
    const double p = r.f64();
    if (!(p >= epsilon) || !std::isfinite(p)) throw FramingError("stored priority below epsilon");
    m.priorities_.push_back(p);
    m.tree_.set(i, std::pow(p, alpha));
  }
  m.cursor_ = cursor;
  r.expect_done("prioritised memory");
  return m;
}

}  // namespace restart::memory
