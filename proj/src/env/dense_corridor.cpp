#include "restart/env/dense_corridor.hpp"

namespace restart::env {

DenseCorridor::DenseCorridor(int length, TimeLimitConfig limits)
    : Environment(limits), length_(length) {
  if (length < 2) throw std::invalid_argument("corridor length must be at least 2");
}

void DenseCorridor::sample_initial_state(Rng&) { position_ = 0; }

Environment::Dynamics DenseCorridor::apply(int action) {
  const int before = position_;
  if (action == kLeft && position_ > 0) --position_;
  if (action == kRight && position_ < length_ - 1) ++position_;
  return {static_cast<double>(position_ - before), false};
}

void DenseCorridor::write_observation(std::span<double> out) const {
  out[0] = 2.0 * position_ / (length_ - 1) - 1.0;
}

void DenseCorridor::encode_state(ByteWriter& w) const { w.i32(position_); }

void DenseCorridor::decode_state(ByteReader& r) {
  const int p = r.i32();
  if (p < 0 || p >= length_) throw MalformedSnapshot("corridor position out of range");
  position_ = p;
}

std::uint32_t DenseCorridor::params_fingerprint() const {
  ByteWriter w;
  w.i32(length_);
  return crc32_of(w.data());
}

}  // namespace restart::env
