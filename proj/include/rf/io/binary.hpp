#pragma once

// Little-endian framed binary encoding shared by every artifact format:
//   magic[4] | u32 version | payload ... | u32 crc32(magic..payload)

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rf/io/error.hpp"

namespace rf::io {

using Magic = std::array<char, 4>;

class ByteWriter {
 public:
  ByteWriter(Magic magic, std::uint32_t version);

  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v);
  void str(std::string_view s);
  void f64s(std::span<const double> v);
  void bytes(std::span<const std::uint8_t> v);

  /// Appends the checksum and returns the finished stream.
  std::vector<std::uint8_t> finish() &&;

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  /// Validates magic, then version, then the trailing checksum, in that order.
  ByteReader(std::span<const std::uint8_t> data, Magic magic,
             std::uint32_t version, std::string_view what);

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64();
  std::string str();
  std::vector<double> f64s();
  std::vector<std::uint8_t> bytes();

  bool at_end() const { return pos_ == end_; }
  /// Throws FormatError unless the payload was fully consumed.
  void expect_end() const;

 private:
  void need(std::size_t n) const;

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
  std::string what_;
};

std::uint32_t crc32(std::span<const std::uint8_t> data);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> data);

}  // namespace rf::io
