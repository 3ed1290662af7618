#ifndef QDI_RAILCODE_HPP
#define QDI_RAILCODE_HPP

#include <cstdint>
#include <string_view>
#include <vector>

#include "qdi/errors.hpp"

namespace qdi {

// 4-phase handshake discipline. RTZ separates data words with an all-zero
// spacer, RTO with an all-one spacer.
enum class Protocol : uint8_t { Rtz, Rto };

std::string_view protocol_name(Protocol p);
Protocol protocol_from_name(std::string_view name);

// The rail level that makes up the spacer codeword (0 for RTZ, 1 for RTO).
constexpr bool spacer_level(Protocol p) { return p == Protocol::Rto; }

// One dual-rail encoded bit: rail1 is the W1 wire, rail0 the W0 wire.
struct RailPair {
  bool rail1 = false;
  bool rail0 = false;

  bool operator==(const RailPair&) const = default;
};

enum class PairState : uint8_t { Data0, Data1, Spacer, Illegal };

std::string_view pair_state_name(PairState s);

// RTZ: (1,0)=DATA1 (0,1)=DATA0 (0,0)=SPACER (1,1)=ILLEGAL.
// RTO: (0,1)=DATA1 (1,0)=DATA0 (1,1)=SPACER (0,0)=ILLEGAL.
constexpr PairState classify_pair(RailPair p, Protocol proto) {
  bool spacer = spacer_level(proto);
  if (p.rail1 == spacer && p.rail0 == spacer) return PairState::Spacer;
  if (p.rail1 != spacer && p.rail0 != spacer) return PairState::Illegal;
  // Exactly one rail is active (away from the spacer level).
  return p.rail1 != spacer ? PairState::Data1 : PairState::Data0;
}

constexpr bool is_data(PairState s) {
  return s == PairState::Data0 || s == PairState::Data1;
}

// The codeword for a single data bit under the given protocol.
constexpr RailPair encode_bit(bool bit, Protocol proto) {
  bool spacer = spacer_level(proto);
  return bit ? RailPair{!spacer, spacer} : RailPair{spacer, !spacer};
}

constexpr RailPair spacer_pair(Protocol proto) {
  bool s = spacer_level(proto);
  return RailPair{s, s};
}

// Encodes `value` as a dual-rail bus, pair i carrying bit i (bit 0 is the
// least significant). Throws InputError if value does not fit in `width`.
std::vector<RailPair> encode_word(uint64_t value, int width, Protocol proto);

// Word-level view of a bus: a complete data word, a complete spacer, a
// partially arrived mix of the two, or a bus containing an illegal pair.
struct DecodeResult {
  enum class Kind : uint8_t { Value, AllSpacer, Mixed, Illegal };
  Kind kind = Kind::AllSpacer;
  uint64_t value = 0;  // meaningful only when kind == Value

  bool operator==(const DecodeResult&) const = default;
};

DecodeResult decode_bus(const std::vector<RailPair>& bus, Protocol proto);

}  // namespace qdi

#endif
