#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cminject/campaign.hpp"

namespace cminject {

/// CAN 2.0A (base format) data frame. crc is filled in by the encoder for
/// inspection; it is derived, never an input.
struct CanFrame {
  std::uint16_t id = 0;  // 11-bit identifier
  std::uint8_t dlc = 0;  // 0..8
  std::vector<std::uint8_t> data;
  std::uint16_t crc = 0;
};

void validate(const CanFrame& f);

enum class BitField {
  kSof,
  kId,
  kRtr,
  kIde,
  kR0,
  kDlc,
  kData,
  kCrc,
  kCrcDelim,
  kAck,
  kAckDelim,
  kEof,
  kStuff,
};

const char* to_string(BitField f);

/// Transmitted bit sequence, 0 = dominant, 1 = recessive, annotated per bit.
struct BitStream {
  std::vector<int> bits;
  std::vector<BitField> annotations;
};

/// Time intervals during which the attacker radiates, aligned to bit
/// boundaries; one interval per maximal dominant run.
struct AttackSchedule {
  std::vector<std::pair<double, double>> intervals;  // [start, end) seconds
  double bit_time = 0.0;
};

/// CAN CRC-15: generator x^15+x^14+x^10+x^8+x^7+x^4+x^3+1 (0x4599), init 0,
/// over the unstuffed bits from SOF through the end of DATA.
std::uint16_t crc15(const std::vector<int>& bits);

/// Unstuffed SOF..DATA bits of a frame.
std::vector<int> frame_body_bits(const CanFrame& f);

std::uint16_t can_crc(const CanFrame& f);

/// Wire view as the attacker must drive it against a listen-only victim
/// node: stuffing applied SOF through CRC, then recessive CRC delimiter, a
/// dominant ACK slot (the attacker has to inject the acknowledgement too),
/// recessive ACK delimiter and 7 recessive EOF bits.
BitStream encode_frame(const CanFrame& f);

/// Inverse of stuffing over the stuffed region: the SOF..CRC bits with
/// stuff bits removed.
std::vector<int> destuff(const BitStream& bs);

AttackSchedule attack_schedule(const BitStream& bs, double bit_time);

/// Campaign spec for injecting this frame into an idle (all-recessive) bus.
MessageSpec frame_to_message_spec(const BitStream& bs);

}  // namespace cminject
