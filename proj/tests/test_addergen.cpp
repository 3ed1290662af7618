#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdi/addergen.hpp"
#include "qdi/approx.hpp"
#include "qdi/dualize.hpp"
#include "qdi/sim.hpp"

using namespace qdi;

namespace {
const CellLibrary kLib = CellLibrary::defaults();

// Per-block cell budgets of the RTZ compositions (RTO uses duals, same
// counts under dual_of).
constexpr int kFullAdderCells = 10;
constexpr int kHalfAdderCells = 4;
constexpr int kOrBlockCells = 2;
constexpr int kAndBlockCells = 2;
}  // namespace

TEST_CASE("accurate 32-bit adder is 31 full adders plus a half adder") {
  Netlist nl = build_adder({32, 0, Protocol::Rtz});
  auto census = cell_census(nl);
  CHECK(nl.cells.size() == 31 * kFullAdderCells + kHalfAdderCells);
  CHECK(census[CellKind::C2] == 31 * 4);
  CHECK(census[CellKind::And2] == 1);            // half-adder carry
  CHECK(census[CellKind::Ao222] == 31 * 2 + 1);  // majority pairs + HA carry
  CHECK(census[CellKind::Ao22] == 31 * 2 + 2);
  CHECK(census[CellKind::Or2] == 31 * 2);
  CHECK(nl.in_ports.size() == 64);
  CHECK(nl.out_ports.size() == 33);
  CHECK(nl.find_out_port("C32") != nullptr);
  CHECK(nl.metadata.at("width") == "32");
  CHECK(nl.metadata.at("approx_bits") == "0");
}

TEST_CASE("k=4 approximate 32-bit adder: 28 FA, 4 OR blocks, 1 AND block") {
  Netlist nl = build_adder({32, 4, Protocol::Rtz});
  CHECK(nl.cells.size() ==
        28 * kFullAdderCells + 4 * kOrBlockCells + kAndBlockCells);
  auto census = cell_census(nl);
  CHECK(census[CellKind::C2] == 28 * 4);
  CHECK(census[CellKind::And2] == 4 + 1);  // OR-block false rails + AND block
  CHECK(census[CellKind::Or2] == 28 * 2 + 4 + 1);
  // No half adder: every sum AO22 belongs to a full adder.
  CHECK(census[CellKind::Ao22] == 28 * 2);
  CHECK(census[CellKind::Ao222] == 28 * 2);
}

TEST_CASE("smallest accurate instance") {
  Netlist nl = build_adder({2, 0, Protocol::Rto});
  CHECK(nl.cells.size() == kFullAdderCells + kHalfAdderCells);
  CHECK(nl.find_out_port("COUT") != nullptr);  // C32 name is width-32 only
}

TEST_CASE("config invariants are enforced") {
  CHECK_THROWS_AS(build_adder({1, 0, Protocol::Rtz}), InputError);
  CHECK_THROWS_AS(build_adder({8, 7, Protocol::Rtz}), InputError);
  CHECK_THROWS_AS(build_adder({8, -1, Protocol::Rtz}), InputError);
  CHECK_THROWS_AS(build_adder({32, 31, Protocol::Rto}), InputError);
  // Largest legal approximation still leaves a 2-bit accurate chain.
  CHECK(validate(build_adder({8, 6, Protocol::Rtz})).empty());
}

TEST_CASE("cell count decreases in k with a constant step above k=0") {
  int prev = -1;
  std::vector<int> counts;
  for (int k : {0, 4, 8, 12, 16, 20}) {
    Netlist nl = build_adder({32, k, Protocol::Rtz});
    int count = static_cast<int>(nl.cells.size());
    if (prev >= 0) CHECK(count < prev);
    prev = count;
    counts.push_back(count);
  }
  for (size_t i = 2; i < counts.size(); ++i) {
    CHECK(counts[i - 1] - counts[i] ==
          4 * kFullAdderCells - 4 * kOrBlockCells);
  }
}

TEST_CASE("generator outputs across protocols are duality images") {
  for (int k : {0, 4, 8}) {
    AdderConfig rtz{16, k, Protocol::Rtz};
    AdderConfig rto{16, k, Protocol::Rto};
    CHECK(dualize(build_adder(rtz)) == build_adder(rto));
    CHECK(dualize(build_adder_stage(rtz)) == build_adder_stage(rto));
  }
}

TEST_CASE("stage wraps the adder with registers and a detector") {
  Netlist adder = build_adder({32, 0, Protocol::Rtz});
  Netlist stage = build_stage(adder);
  CHECK(validate(stage).empty());
  REQUIRE(stage.ack_in.has_value());
  REQUIRE(stage.ack_out.has_value());

  // 2 operand buses x 32 bits x 2 rails of register C-elements, a 33-wide
  // first detector layer, and a 32-cell C-element tree.
  CHECK(stage.cells.size() == adder.cells.size() + 2 * (2 * 32) + 33 + 32);
  auto census = cell_census(stage);
  auto adder_census = cell_census(adder);
  CHECK(census[CellKind::C2] == adder_census[CellKind::C2] + 128 + 32);
  CHECK(census[CellKind::Or2] == adder_census[CellKind::Or2] + 33);
}

TEST_CASE("stage rejects an adder that already has ack ports") {
  Netlist stage = build_adder_stage({4, 0, Protocol::Rtz});
  CHECK_THROWS_AS(build_stage(stage), InputError);
}

TEST_CASE("width-2 stage completes a full transaction") {
  for (Protocol p : {Protocol::Rtz, Protocol::Rto}) {
    Netlist stage = build_adder_stage({2, 0, p});
    StageHarness h(stage, kLib);
    auto r = h.transact(1, 1);
    CHECK(r.value == 2);
    CHECK(r.timing.cycle_time ==
          doctest::Approx(r.timing.forward_latency + r.timing.reverse_latency));
    // Back-to-back transactions keep working.
    CHECK(h.transact(1, 0).value == 1);
    CHECK(h.transact(0, 0).value == 0);
  }
}

TEST_CASE("accurate adders match exact addition exhaustively up to width 6") {
  for (Protocol p : {Protocol::Rtz, Protocol::Rto}) {
    for (int w : {2, 4, 6}) {
      Netlist stage = build_adder_stage({w, 0, p});
      StageHarness h(stage, kLib);
      for (uint64_t a = 0; a < (uint64_t{1} << w); ++a) {
        for (uint64_t b = 0; b < (uint64_t{1} << w); ++b) {
          REQUIRE(h.transact(a, b).value == a + b);
        }
      }
    }
  }
}

TEST_CASE("approximate adders match the word-level model exhaustively, small widths") {
  for (Protocol p : {Protocol::Rtz, Protocol::Rto}) {
    for (int k : {2, 4}) {
      const int w = 6;
      Netlist stage = build_adder_stage({w, k, p});
      StageHarness h(stage, kLib);
      for (uint64_t a = 0; a < (uint64_t{1} << w); ++a) {
        for (uint64_t b = 0; b < (uint64_t{1} << w); ++b) {
          REQUIRE(h.transact(a, b).value == approx_add(a, b, w, k));
        }
      }
    }
  }
}

TEST_CASE("width-32 spot check against the word-level model") {
  for (int k : {0, 8}) {
    Netlist stage = build_adder_stage({32, k, Protocol::Rtz});
    auto vectors = random_vectors(32, 500, 7);
    auto stats = run_sequence(stage, vectors, kLib,
                              [&](uint64_t a, uint64_t b) {
                                return approx_add(a, b, 32, k);
                              });
    CHECK(stats.mismatches == 0);
  }
}
