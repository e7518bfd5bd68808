#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace restart {

using Bytes = std::vector<std::uint8_t>;

// Raised when a framed blob or its body cannot be decoded.
class FramingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Little-endian append-only writer.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v);
  void bytes(std::span<const std::uint8_t> b);
  // u32 length prefix followed by the bytes
  void blob(std::span<const std::uint8_t> b);

  const Bytes& data() const& { return buf_; }
  Bytes data() && { return std::move(buf_); }

 private:
  Bytes buf_;
};

// Bounds-checked reader; every accessor throws FramingError on underrun.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64();
  std::span<const std::uint8_t> bytes(std::size_t n);
  Bytes blob();

  std::size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }
  void expect_done(const char* what) const;

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::span<const std::uint8_t> data);

// Frame layout: [u16 version][u32 body length][body][u32 CRC32 of everything before it].
Bytes encode_frame(std::uint16_t version, std::span<const std::uint8_t> body);

// Returns the body; throws FramingError on version mismatch, bad length or CRC.
Bytes decode_frame(std::span<const std::uint8_t> frame, std::uint16_t expected_version);

void write_file(const std::string& path, std::span<const std::uint8_t> data);
Bytes read_file(const std::string& path);

}  // namespace restart
