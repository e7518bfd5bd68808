#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "restart/env/binary_io.hpp"

namespace restart {

/// Complete Markov state of an environment plus its in-episode time step.
///
/// The payload is opaque outside the environment that produced it. `t` is 0
/// for states drawn from the environment's initial-state distribution.
struct StateSnapshot {
  Bytes payload;
  std::uint32_t t = 0;

  friend bool operator==(const StateSnapshot&, const StateSnapshot&) = default;
};

class MalformedSnapshot : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint16_t kSnapshotVersion = 1;

// Wire form: [u16 version][u32 length][u32 t, payload][u32 CRC].
Bytes encode_snapshot(const StateSnapshot& s);
StateSnapshot decode_snapshot(std::span<const std::uint8_t> frame);

// Unframed helpers for embedding snapshots inside larger framed files.
void write_snapshot(ByteWriter& w, const StateSnapshot& s);
StateSnapshot read_snapshot(ByteReader& r);

}  // namespace restart
