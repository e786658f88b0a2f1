#include "cminject/can.hpp"

#include <stdexcept>

namespace cminject {

void validate(const CanFrame& f) {
  if (f.id >= 2048) throw std::invalid_argument("can frame: id must fit in 11 bits");
  if (f.dlc > 8) throw std::invalid_argument("can frame: dlc must be <= 8");
  if (f.data.size() != f.dlc)
    throw std::invalid_argument("can frame: data length must equal dlc");
}

const char* to_string(BitField f) {
  switch (f) {
    case BitField::kSof: return "SOF";
    case BitField::kId: return "ID";
    case BitField::kRtr: return "RTR";
    case BitField::kIde: return "IDE";
    case BitField::kR0: return "r0";
    case BitField::kDlc: return "DLC";
    case BitField::kData: return "DATA";
    case BitField::kCrc: return "CRC";
    case BitField::kCrcDelim: return "CRC_DEL";
    case BitField::kAck: return "ACK";
    case BitField::kAckDelim: return "ACK_DEL";
    case BitField::kEof: return "EOF";
    case BitField::kStuff: return "STUFF";
  }
  return "?";
}

std::uint16_t crc15(const std::vector<int>& bits) {
  std::uint16_t crc = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("crc15: bits must be 0 or 1");
    const int next = b ^ ((crc >> 14) & 1);
    crc = static_cast<std::uint16_t>((crc << 1) & 0x7FFF);
    if (next) crc ^= 0x4599;
  }
  return crc;
}

std::vector<int> frame_body_bits(const CanFrame& f) {
  validate(f);
  std::vector<int> bits;
  bits.reserve(19 + 8 * f.data.size());
  bits.push_back(0);  // SOF
  for (int i = 10; i >= 0; --i) bits.push_back((f.id >> i) & 1);
  bits.push_back(0);  // RTR: data frame
  bits.push_back(0);  // IDE: base format
  bits.push_back(0);  // r0
  for (int i = 3; i >= 0; --i) bits.push_back((f.dlc >> i) & 1);
  for (std::uint8_t byte : f.data) {
    for (int i = 7; i >= 0; --i) bits.push_back((byte >> i) & 1);
  }
  return bits;
}

std::uint16_t can_crc(const CanFrame& f) { return crc15(frame_body_bits(f)); }

BitStream encode_frame(const CanFrame& f) {
  const std::vector<int> body = frame_body_bits(f);
  const std::uint16_t crc = crc15(body);

  std::vector<int> raw = body;
  std::vector<BitField> fields;
  fields.push_back(BitField::kSof);
  for (int i = 0; i < 11; ++i) fields.push_back(BitField::kId);
  fields.push_back(BitField::kRtr);
  fields.push_back(BitField::kIde);
  fields.push_back(BitField::kR0);
  for (int i = 0; i < 4; ++i) fields.push_back(BitField::kDlc);
  for (std::size_t i = 0; i < 8 * f.data.size(); ++i) fields.push_back(BitField::kData);
  for (int i = 14; i >= 0; --i) {
    raw.push_back((crc >> i) & 1);
    fields.push_back(BitField::kCrc);
  }

  // Stuffing over SOF..CRC: after five equal bits, insert the complement;
  // stuff bits count toward subsequent runs.
  BitStream out;
  int run = 0;
  int last = -1;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out.bits.push_back(raw[i]);
    out.annotations.push_back(fields[i]);
    run = raw[i] == last ? run + 1 : 1;
    last = raw[i];
    if (run == 5) {
      const int stuff = 1 - last;
      out.bits.push_back(stuff);
      out.annotations.push_back(BitField::kStuff);
      last = stuff;
      run = 1;
    }
  }

  out.bits.push_back(1);
  out.annotations.push_back(BitField::kCrcDelim);
  out.bits.push_back(0);  // ACK slot, injected dominant (listen-only victim)
  out.annotations.push_back(BitField::kAck);
  out.bits.push_back(1);
  out.annotations.push_back(BitField::kAckDelim);
  for (int i = 0; i < 7; ++i) {
    out.bits.push_back(1);
    out.annotations.push_back(BitField::kEof);
  }
  return out;
}

std::vector<int> destuff(const BitStream& bs) {
  if (bs.bits.size() != bs.annotations.size())
    throw std::invalid_argument("destuff: bits and annotations lengths differ");
  std::vector<int> out;
  for (std::size_t i = 0; i < bs.bits.size(); ++i) {
    const BitField field = bs.annotations[i];
    if (field == BitField::kCrcDelim || field == BitField::kAck ||
        field == BitField::kAckDelim || field == BitField::kEof) {
      break;
    }
    if (field != BitField::kStuff) out.push_back(bs.bits[i]);
  }
  return out;
}

AttackSchedule attack_schedule(const BitStream& bs, double bit_time) {
  if (!(bit_time > 0.0)) throw std::invalid_argument("attack_schedule: bit_time must be > 0");
  AttackSchedule schedule;
  schedule.bit_time = bit_time;
  std::size_t i = 0;
  while (i < bs.bits.size()) {
    if (bs.bits[i] == 0) {
      std::size_t j = i;
      while (j < bs.bits.size() && bs.bits[j] == 0) ++j;
      schedule.intervals.emplace_back(static_cast<double>(i) * bit_time,
                                      static_cast<double>(j) * bit_time);
      i = j;
    } else {
      ++i;
    }
  }
  return schedule;
}

MessageSpec frame_to_message_spec(const BitStream& bs) {
  MessageSpec spec;
  spec.intended_bits = bs.bits;
  spec.line_bits.assign(bs.bits.size(), 1);
  return spec;
}

}  // namespace cminject
