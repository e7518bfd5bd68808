#pragma once

#include "restart/env/environment.hpp"

namespace restart::env {

// 1-D corridor of `length` cells starting at cell 0. Actions: 0 = left,
// 1 = right, 2 = stay. Reward is the signed displacement of the step, so a
// blocked move at either end earns 0. No terminal states.
class DenseCorridor final : public Environment {
 public:
  static constexpr int kLeft = 0;
  static constexpr int kRight = 1;
  static constexpr int kStay = 2;

  DenseCorridor(int length, TimeLimitConfig limits);

  int num_actions() const override { return 3; }
  int observation_size() const override { return 1; }
  bool at_success() const override { return position_ == length_ - 1; }
  std::string_view name() const override { return "dense-corridor"; }

  int position() const { return position_; }
  int length() const { return length_; }

 protected:
  void sample_initial_state(Rng& rng) override;
  Dynamics apply(int action) override;
  void write_observation(std::span<double> out) const override;
  void encode_state(ByteWriter& w) const override;
  void decode_state(ByteReader& r) override;
  std::uint8_t kind_tag() const override { return 1; }
  std::uint32_t params_fingerprint() const override;

 private:
  int length_;
  int position_ = 0;
};

}  // namespace restart::env
