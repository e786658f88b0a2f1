#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cminject/can.hpp"
#include "cminject/rng.hpp"

using namespace cminject;

namespace {

// Independent CRC oracle: plain polynomial long division of the message
// followed by 15 zero bits, generator x^15+x^14+x^10+x^8+x^7+x^4+x^3+1.
std::uint16_t crc15_long_division(const std::vector<int>& message) {
  static const int generator[16] = {1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1};
  std::vector<int> dividend = message;
  dividend.insert(dividend.end(), 15, 0);
  for (std::size_t i = 0; i + 15 < dividend.size(); ++i) {
    if (dividend[i] == 1) {
      for (int j = 0; j < 16; ++j) dividend[i + j] ^= generator[j];
    }
  }
  std::uint16_t crc = 0;
  for (std::size_t i = dividend.size() - 15; i < dividend.size(); ++i) {
    crc = static_cast<std::uint16_t>((crc << 1) | dividend[i]);
  }
  return crc;
}

CanFrame random_frame(SplitMix64& rng) {
  CanFrame f;
  f.id = static_cast<std::uint16_t>(rng.next_u64() % 2048);
  f.dlc = static_cast<std::uint8_t>(rng.next_u64() % 9);
  for (int i = 0; i < f.dlc; ++i) f.data.push_back(static_cast<std::uint8_t>(rng.next_u64()));
  return f;
}

std::string bits_to_string(const std::vector<int>& bits) {
  std::string s;
  for (int b : bits) s += static_cast<char>('0' + b);
  return s;
}

}  // namespace

TEST_CASE("crc of nothing is zero") { CHECK(crc15({}) == 0); }

TEST_CASE("crc matches the long-division oracle on random inputs") {
  SplitMix64 rng(1);
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<int> bits;
    const int len = 1 + static_cast<int>(rng.next_u64() % 64);
    for (int i = 0; i < len; ++i) bits.push_back(static_cast<int>(rng.next_u64() & 1));
    CHECK(crc15(bits) == crc15_long_division(bits));
  }
}

TEST_CASE("crc is linear over GF(2)") {
  SplitMix64 rng(2);
  for (int rep = 0; rep < 200; ++rep) {
    const int len = 1 + static_cast<int>(rng.next_u64() % 48);
    std::vector<int> a(len), b(len), x(len);
    for (int i = 0; i < len; ++i) {
      a[i] = static_cast<int>(rng.next_u64() & 1);
      b[i] = static_cast<int>(rng.next_u64() & 1);
      x[i] = a[i] ^ b[i];
    }
    CHECK(crc15(x) == (crc15(a) ^ crc15(b)));
  }
}

TEST_CASE("the ID 0x001 empty frame carries CRC 0x2213") {
  CanFrame f;
  f.id = 0x001;
  f.dlc = 0;
  CHECK(can_crc(f) == 0x2213);
}

TEST_CASE("the ID 0x001 empty frame needs 29 dominant bits in 9 runs") {
  CanFrame f;
  f.id = 0x001;
  f.dlc = 0;
  const BitStream bs = encode_frame(f);
  const auto [dominant, groups] = count_dominant_groups(bs.bits);
  CHECK(dominant == 29);
  CHECK(groups == 9);
}

TEST_CASE("encoding matches the golden fixture bit for bit") {
  // Frozen from the documented convention: stuffing SOF..CRC, recessive CRC
  // delimiter, dominant (attacker-injected) ACK, recessive ACK delimiter,
  // seven recessive EOF bits.
  const std::string golden =
      "000001000001010000010001000100001001"
      "1"   // last CRC bit
      "1"   // CRC delimiter
      "0"   // ACK slot
      "1"   // ACK delimiter
      "1111111";
  CanFrame f;
  f.id = 0x001;
  f.dlc = 0;
  const BitStream bs = encode_frame(f);
  CHECK(bits_to_string(bs.bits) == golden);
}

TEST_CASE("stuffed region never holds six equal bits and destuffs exactly") {
  SplitMix64 rng(3);
  for (int rep = 0; rep < 2000; ++rep) {
    const CanFrame f = random_frame(rng);
    const BitStream bs = encode_frame(f);

    // Scan the stuffed region only (SOF..CRC inclusive of stuff bits).
    int run = 0, last = -1;
    for (std::size_t i = 0; i < bs.bits.size(); ++i) {
      if (bs.annotations[i] == BitField::kCrcDelim) break;
      run = bs.bits[i] == last ? run + 1 : 1;
      last = bs.bits[i];
      CHECK(run <= 5);
    }

    std::vector<int> expected = frame_body_bits(f);
    const std::uint16_t crc = can_crc(f);
    for (int i = 14; i >= 0; --i) expected.push_back((crc >> i) & 1);
    CHECK(destuff(bs) == expected);
  }
}

TEST_CASE("encoding is deterministic") {
  CanFrame f;
  f.id = 0x345;
  f.dlc = 2;
  f.data = {0xDE, 0xAD};
  const BitStream a = encode_frame(f);
  const BitStream b = encode_frame(f);
  CHECK(a.bits == b.bits);
  CHECK(a.annotations == b.annotations);
}

TEST_CASE("schedule covers exactly the dominant runs") {
  BitStream bs;
  bs.bits = {0, 1, 0};
  bs.annotations = {BitField::kSof, BitField::kId, BitField::kId};
  const AttackSchedule s = attack_schedule(bs, 2e-6);
  REQUIRE(s.intervals.size() == 2);
  CHECK(s.intervals[0] == std::pair<double, double>{0.0, 2e-6});
  CHECK(s.intervals[1] == std::pair<double, double>{4e-6, 6e-6});

  BitStream idle;
  idle.bits = {1, 1, 1};
  idle.annotations = {BitField::kEof, BitField::kEof, BitField::kEof};
  CHECK(attack_schedule(idle, 2e-6).intervals.empty());

  CanFrame f;
  f.id = 0x001;
  f.dlc = 0;
  CHECK(attack_schedule(encode_frame(f), 2e-6).intervals.size() == 9);
}

TEST_CASE("schedule interval count equals the dominant group count") {
  SplitMix64 rng(5);
  for (int rep = 0; rep < 300; ++rep) {
    const BitStream bs = encode_frame(random_frame(rng));
    const auto [dominant, groups] = count_dominant_groups(bs.bits);
    (void)dominant;
    CHECK(attack_schedule(bs, 1e-6).intervals.size() == groups);
  }
}

TEST_CASE("intervals are ordered, disjoint, and bit aligned") {
  SplitMix64 rng(6);
  const BitStream bs = encode_frame(random_frame(rng));
  const double bt = 2e-6;
  const AttackSchedule s = attack_schedule(bs, bt);
  double prev_end = -1.0;
  for (const auto& [start, end] : s.intervals) {
    CHECK(start > prev_end);
    CHECK(end > start);
    CHECK(std::llround(start / bt) * bt == doctest::Approx(start));
    CHECK(std::llround(end / bt) * bt == doctest::Approx(end));
    prev_end = end;
  }
}

TEST_CASE("message spec against an idle bus") {
  BitStream bs;
  bs.bits = {0, 1};
  bs.annotations = {BitField::kSof, BitField::kId};
  const MessageSpec spec = frame_to_message_spec(bs);
  CHECK(spec.intended_bits == std::vector<int>{0, 1});
  CHECK(spec.line_bits == std::vector<int>{1, 1});

  CanFrame f;
  f.id = 0x001;
  f.dlc = 0;
  const MessageSpec fig = frame_to_message_spec(encode_frame(f));
  std::size_t flips_needed = 0;
  for (std::size_t i = 0; i < fig.intended_bits.size(); ++i) {
    if (fig.intended_bits[i] != fig.line_bits[i]) ++flips_needed;
  }
  CHECK(flips_needed == 29);
}

TEST_CASE("frame validation") {
  CanFrame bad_id;
  bad_id.id = 2048;
  CHECK_THROWS_AS(validate(bad_id), std::invalid_argument);

  CanFrame bad_dlc;
  bad_dlc.dlc = 9;
  bad_dlc.data.assign(9, 0);
  CHECK_THROWS_AS(validate(bad_dlc), std::invalid_argument);

  CanFrame mismatch;
  mismatch.dlc = 2;
  mismatch.data = {0x01};
  CHECK_THROWS_AS(encode_frame(mismatch), std::invalid_argument);
}
