#include <gtest/gtest.h>

#include <string>

#include "rf/io/binary.hpp"
#include "rf/io/error.hpp"
#include "rf/io/random.hpp"

using namespace rf;
using namespace rf::io;

namespace {

constexpr Magic kMagic{'T', 'E', 'S', 'T'};

std::vector<std::uint8_t> sample_stream() {
  ByteWriter w(kMagic, 3);
  w.u8(7);
  w.u32(0xdeadbeef);
  w.i64(-5);
  w.f64(0.1);
  w.str("hello");
  w.f64s(std::vector<double>{1.5, -2.0});
  return std::move(w).finish();
}

}  // namespace

TEST(Crc32, KnownCheckValue) {
  const std::string s = "123456789";
  EXPECT_EQ(crc32({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}), 0xCBF43926u);
}

TEST(Binary, RoundTrip) {
  auto bytes = sample_stream();
  ByteReader r(bytes, kMagic, 3, "test");
  EXPECT_EQ(r.u8(), 7);
  EXPECT_EQ(r.u32(), 0xdeadbeefu);
  EXPECT_EQ(r.i64(), -5);
  EXPECT_EQ(r.f64(), 0.1);
  EXPECT_EQ(r.str(), "hello");
  EXPECT_EQ(r.f64s(), (std::vector<double>{1.5, -2.0}));
  EXPECT_TRUE(r.at_end());
  EXPECT_NO_THROW(r.expect_end());
  EXPECT_THROW(r.u8(), FormatError);
}

TEST(Binary, MagicCheckedBeforeVersionAndChecksum) {
  auto bytes = sample_stream();
  bytes[0] = 'X';
  bytes[4] = 99;
  bytes[bytes.size() - 1] ^= 1;
  try {
    ByteReader r(bytes, kMagic, 3, "test");
    FAIL();
  } catch (const VersionError&) {
    FAIL() << "version reported before magic";
  } catch (const ChecksumError&) {
    FAIL() << "checksum reported before magic";
  } catch (const FormatError&) {
  }
}

TEST(Binary, VersionCheckedBeforeChecksum) {
  auto bytes = sample_stream();
  bytes[4] = 9;
  bytes[bytes.size() - 1] ^= 1;
  try {
    ByteReader r(bytes, kMagic, 3, "test");
    FAIL();
  } catch (const VersionError& e) {
    EXPECT_EQ(e.found(), 9u);
    EXPECT_EQ(e.expected(), 3u);
  }
}

TEST(Binary, ChecksumCatchesPayloadFlip) {
  auto bytes = sample_stream();
  bytes[12] ^= 0x10;
  EXPECT_THROW(ByteReader(bytes, kMagic, 3, "test"), ChecksumError);
}

TEST(Binary, TruncatedAndTrailing) {
  auto bytes = sample_stream();
  std::vector<std::uint8_t> tiny(bytes.begin(), bytes.begin() + 5);
  EXPECT_THROW(ByteReader(tiny, kMagic, 3, "test"), FormatError);
  ByteReader r(bytes, kMagic, 3, "test");
  r.u8();
  EXPECT_THROW(r.expect_end(), FormatError);
}

TEST(Binary, StringLengthBeyondPayload) {
  ByteWriter w(kMagic, 1);
  w.u64(1000);
  auto bytes = std::move(w).finish();
  ByteReader r(bytes, kMagic, 1, "test");
  EXPECT_THROW(r.str(), FormatError);
}

TEST(Files, WriteReadAndMissing) {
  const std::string path = testing::TempDir() + "io_roundtrip.bin";
  auto bytes = sample_stream();
  write_file(path, bytes);
  EXPECT_EQ(read_file(path), bytes);
  EXPECT_ANY_THROW(read_file(path + ".missing"));
}

TEST(Random, StreamsAreIndependentAndReproducible) {
  Rng a = make_rng(1, 0), b = make_rng(1, 0), c = make_rng(1, 1);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  Rng u = make_rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double v = uniform01(u);
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
    EXPECT_LT(uniform_index(u, 3), 3u);
  }
}
