#include "qdi/railcode.hpp"

#include <string>

namespace qdi {

std::string_view protocol_name(Protocol p) {
  return p == Protocol::Rtz ? "RTZ" : "RTO";
}

Protocol protocol_from_name(std::string_view name) {
  if (name == "RTZ" || name == "rtz") return Protocol::Rtz;
  if (name == "RTO" || name == "rto") return Protocol::Rto;
  throw ParseError("unknown protocol '" + std::string(name) + "'");
}

std::string_view pair_state_name(PairState s) {
  switch (s) {
    case PairState::Data0:
      return "DATA0";
    case PairState::Data1:
      return "DATA1";
    case PairState::Spacer:
      return "SPACER";
    case PairState::Illegal:
      return "ILLEGAL";
  }
  return "?";
}

std::vector<RailPair> encode_word(uint64_t value, int width, Protocol proto) {
  if (width < 1 || width > 63) {
    throw InputError("encode_word: width out of range: " +
                     std::to_string(width));
  }
  if (width < 64 && (value >> width) != 0) {
    throw InputError("encode_word: value " + std::to_string(value) +
                     " does not fit in " + std::to_string(width) + " bits");
  }
  std::vector<RailPair> bus(width);
  for (int i = 0; i < width; ++i) {
    bus[i] = encode_bit((value >> i) & 1, proto);
  }
  return bus;
}

DecodeResult decode_bus(const std::vector<RailPair>& bus, Protocol proto) {
  bool all_data = true;
  bool all_spacer = true;
  uint64_t value = 0;
  for (size_t i = 0; i < bus.size(); ++i) {
    PairState s = classify_pair(bus[i], proto);
    if (s == PairState::Illegal) {
      return {DecodeResult::Kind::Illegal, 0};
    }
    if (s == PairState::Spacer) {
      all_data = false;
    } else {
      all_spacer = false;
      if (s == PairState::Data1) value |= uint64_t{1} << i;
    }
  }
  if (all_data && !bus.empty()) return {DecodeResult::Kind::Value, value};
  if (all_spacer) return {DecodeResult::Kind::AllSpacer, 0};
  return {DecodeResult::Kind::Mixed, 0};
}

}  // namespace qdi
