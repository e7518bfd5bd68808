#include "restart/env/binary_io.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace restart {

void ByteWriter::u16(std::uint16_t v) {
  u8(static_cast<std::uint8_t>(v));
  u8(static_cast<std::uint8_t>(v >> 8));
}

void ByteWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::bytes(std::span<const std::uint8_t> b) {
  buf_.insert(buf_.end(), b.begin(), b.end());
}

void ByteWriter::blob(std::span<const std::uint8_t> b) {
  u32(static_cast<std::uint32_t>(b.size()));
  bytes(b);
}

std::uint8_t ByteReader::u8() {
  if (pos_ >= data_.size()) throw FramingError("unexpected end of data");
  return data_[pos_++];
}

std::uint16_t ByteReader::u16() {
  std::uint16_t lo = u8();
  std::uint16_t hi = u8();
  return static_cast<std::uint16_t>(lo | (hi << 8));
}

std::uint32_t ByteReader::u32() {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
  return v;
}

std::uint64_t ByteReader::u64() {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
  return v;
}

double ByteReader::f64() { return std::bit_cast<double>(u64()); }

std::span<const std::uint8_t> ByteReader::bytes(std::size_t n) {
  if (n > remaining()) throw FramingError("unexpected end of data");
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

Bytes ByteReader::blob() {
  const auto n = u32();
  auto b = bytes(n);
  return Bytes(b.begin(), b.end());
}

void ByteReader::expect_done(const char* what) const {
  if (!done()) throw FramingError(std::string("trailing bytes after ") + what);
}

std::uint32_t crc32_of(std::span<const std::uint8_t> data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, data.data(), static_cast<uInt>(data.size()));
  return static_cast<std::uint32_t>(crc);
}

Bytes encode_frame(std::uint16_t version, std::span<const std::uint8_t> body) {
  ByteWriter w;
  w.u16(version);
  w.u32(static_cast<std::uint32_t>(body.size()));
  w.bytes(body);
  const auto crc = crc32_of(w.data());
  w.u32(crc);
  return std::move(w).data();
}

Bytes decode_frame(std::span<const std::uint8_t> frame, std::uint16_t expected_version) {
  constexpr std::size_t kOverhead = 2 + 4 + 4;
  if (frame.size() < kOverhead) throw FramingError("frame shorter than header");
  ByteReader r(frame);
  const auto version = r.u16();
  const auto length = r.u32();
  if (length != frame.size() - kOverhead) throw FramingError("frame length mismatch");
  const auto stored = ByteReader(frame.subspan(frame.size() - 4)).u32();
  if (stored != crc32_of(frame.first(frame.size() - 4))) throw FramingError("frame checksum mismatch");
  if (version != expected_version) {
    throw FramingError("unsupported frame version " + std::to_string(version));
  }
  auto body = r.bytes(length);
  return Bytes(body.begin(), body.end());
}

void write_file(const std::string& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace restart
