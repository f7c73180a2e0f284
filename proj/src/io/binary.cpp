#include "rf/io/binary.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <iterator>

#include <zlib.h>

namespace rf::io {

namespace {

constexpr std::size_t kHeaderSize = 8;
constexpr std::size_t kCrcSize = 4;

std::uint32_t load_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> data) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks for very large buffers.
  std::size_t off = 0;
  while (off < data.size()) {
    const std::size_t n = std::min<std::size_t>(data.size() - off, 1u << 30);
    crc = ::crc32(crc, data.data() + off, static_cast<uInt>(n));
    off += n;
  }
  return static_cast<std::uint32_t>(crc);
}

ByteWriter::ByteWriter(Magic magic, std::uint32_t version) {
  buf_.insert(buf_.end(), magic.begin(), magic.end());
  u32(version);
}

void ByteWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::str(std::string_view s) {
  u64(s.size());
  buf_.insert(buf_.end(), s.begin(), s.end());
}

void ByteWriter::f64s(std::span<const double> v) {
  u64(v.size());
  for (double x : v) f64(x);
}

void ByteWriter::bytes(std::span<const std::uint8_t> v) {
  u64(v.size());
  buf_.insert(buf_.end(), v.begin(), v.end());
}

std::vector<std::uint8_t> ByteWriter::finish() && {
  u32(crc32(buf_));
  return std::move(buf_);
}

ByteReader::ByteReader(std::span<const std::uint8_t> data, Magic magic,
                       std::uint32_t version, std::string_view what)
    : data_(data), what_(what) {
  if (data.size() < 4 || std::memcmp(data.data(), magic.data(), 4) != 0) {
    throw FormatError(what_ + ": bad magic");
  }
  if (data.size() < kHeaderSize) throw ChecksumError(what_ + ": truncated header");
  const std::uint32_t found = load_u32(data.data() + 4);
  if (found != version) {
    throw VersionError(what_ + ": unsupported format version " + std::to_string(found) +
                           " (expected " + std::to_string(version) + ")",
                       found, version);
  }
  if (data.size() < kHeaderSize + kCrcSize) throw ChecksumError(what_ + ": truncated stream");
  end_ = data.size() - kCrcSize;
  const std::uint32_t stored = load_u32(data.data() + end_);
  if (stored != crc32(data.first(end_))) throw ChecksumError(what_ + ": checksum mismatch");
  pos_ = kHeaderSize;
}

void ByteReader::need(std::size_t n) const {
  if (n > end_ - pos_) throw FormatError(what_ + ": payload shorter than declared");
}

std::uint8_t ByteReader::u8() {
  need(1);
  return data_[pos_++];
}

std::uint32_t ByteReader::u32() {
  need(4);
  const std::uint32_t v = load_u32(data_.data() + pos_);
  pos_ += 4;
  return v;
}

std::uint64_t ByteReader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
  pos_ += 8;
  return v;
}

double ByteReader::f64() { return std::bit_cast<double>(u64()); }

std::string ByteReader::str() {
  const std::uint64_t n = u64();
  need(n);
  std::string s(reinterpret_cast<const char*>(data_.data() + pos_), n);
  pos_ += n;
  return s;
}

std::vector<double> ByteReader::f64s() {
  const std::uint64_t n = u64();
  if (n > (end_ - pos_) / 8) throw FormatError(what_ + ": payload shorter than declared");
  std::vector<double> v(n);
  for (auto& x : v) x = f64();
  return v;
}

std::vector<std::uint8_t> ByteReader::bytes() {
  const std::uint64_t n = u64();
  need(n);
  std::vector<std::uint8_t> v(data_.begin() + pos_, data_.begin() + pos_ + n);
  pos_ += n;
  return v;
}

void ByteReader::expect_end() const {
  if (pos_ != end_) throw FormatError(what_ + ": trailing bytes after payload");
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace rf::io
