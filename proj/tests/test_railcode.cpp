#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdi/railcode.hpp"

using namespace qdi;

TEST_CASE("pair classification, RTZ") {
  CHECK(classify_pair({true, false}, Protocol::Rtz) == PairState::Data1);
  CHECK(classify_pair({false, true}, Protocol::Rtz) == PairState::Data0);
  CHECK(classify_pair({false, false}, Protocol::Rtz) == PairState::Spacer);
  CHECK(classify_pair({true, true}, Protocol::Rtz) == PairState::Illegal);
}

TEST_CASE("pair classification, RTO") {
  CHECK(classify_pair({false, true}, Protocol::Rto) == PairState::Data1);
  CHECK(classify_pair({true, false}, Protocol::Rto) == PairState::Data0);
  CHECK(classify_pair({true, true}, Protocol::Rto) == PairState::Spacer);
  CHECK(classify_pair({false, false}, Protocol::Rto) == PairState::Illegal);
}

TEST_CASE("single-bit encodings") {
  auto rtz = encode_word(1, 1, Protocol::Rtz);
  REQUIRE(rtz.size() == 1);
  CHECK(rtz[0] == RailPair{true, false});

  auto rto = encode_word(1, 1, Protocol::Rto);
  REQUIRE(rto.size() == 1);
  CHECK(rto[0] == RailPair{false, true});
}

TEST_CASE("encode 5 over 4 bits, RTZ") {
  auto bus = encode_word(5, 4, Protocol::Rtz);
  REQUIRE(bus.size() == 4);
  CHECK(bus[0] == RailPair{true, false});
  CHECK(bus[1] == RailPair{false, true});
  CHECK(bus[2] == RailPair{true, false});
  CHECK(bus[3] == RailPair{false, true});
}

TEST_CASE("out-of-range value is rejected") {
  CHECK_THROWS_AS(encode_word(16, 4, Protocol::Rtz), InputError);
  CHECK_THROWS_AS(encode_word(2, 1, Protocol::Rto), InputError);
}

TEST_CASE("decode states") {
  CHECK(decode_bus(encode_word(9, 4, Protocol::Rto), Protocol::Rto) ==
        DecodeResult{DecodeResult::Kind::Value, 9});

  std::vector<RailPair> all_spacer(4, RailPair{false, false});
  CHECK(decode_bus(all_spacer, Protocol::Rtz).kind ==
        DecodeResult::Kind::AllSpacer);

  std::vector<RailPair> partial = {{true, false}, {false, false}};
  CHECK(decode_bus(partial, Protocol::Rtz).kind == DecodeResult::Kind::Mixed);

  std::vector<RailPair> bad = {{true, false}, {true, true}};
  CHECK(decode_bus(bad, Protocol::Rtz).kind == DecodeResult::Kind::Illegal);
}

TEST_CASE("round trip and protocol symmetry, exhaustive over small widths") {
  for (int width = 1; width <= 10; ++width) {
    for (uint64_t v = 0; v < (uint64_t{1} << width); ++v) {
      for (Protocol p : {Protocol::Rtz, Protocol::Rto}) {
        auto bus = encode_word(v, width, p);
        for (const RailPair& pair : bus) CHECK(is_data(classify_pair(pair, p)));
        auto d = decode_bus(bus, p);
        REQUIRE(d.kind == DecodeResult::Kind::Value);
        CHECK(d.value == v);
      }
      // RTO codewords are the rail-wise complement of RTZ codewords.
      auto rtz = encode_word(v, width, Protocol::Rtz);
      auto rto = encode_word(v, width, Protocol::Rto);
      for (int i = 0; i < width; ++i) {
        CHECK(rto[i].rail1 == !rtz[i].rail1);
        CHECK(rto[i].rail0 == !rtz[i].rail0);
      }
    }
  }
}
