#include "restart/env/snapshot.hpp"

namespace restart {

Bytes encode_snapshot(const StateSnapshot& s) {
  ByteWriter body;
  body.u32(s.t);
  body.bytes(s.payload);
  return encode_frame(kSnapshotVersion, body.data());
}

StateSnapshot decode_snapshot(std::span<const std::uint8_t> frame) {
  try {
    const Bytes body = decode_frame(frame, kSnapshotVersion);
    ByteReader r(body);
    StateSnapshot s;
    s.t = r.u32();
    auto rest = r.bytes(r.remaining());
    s.payload.assign(rest.begin(), rest.end());
    return s;
  } catch (const FramingError& e) {
    throw MalformedSnapshot(e.what());
  }
}

void write_snapshot(ByteWriter& w, const StateSnapshot& s) {
  w.u32(s.t);
  w.blob(s.payload);
}

StateSnapshot read_snapshot(ByteReader& r) {
  StateSnapshot s;
  s.t = r.u32();
  s.payload = r.blob();
  return s;
}

}  // namespace restart
