#ifndef QDI_BLOCKS_HPP
#define QDI_BLOCKS_HPP

#include <span>

#include "qdi/netlist.hpp"

namespace qdi {

struct AdderBitOut {
  RailRef sum;
  RailRef cout;
};

enum class GateFunc : uint8_t { And, Or };

// The RTZ compositions are the base forms; RTO variants replace every
// discrete/complex gate by its Boolean dual while C-elements keep their
// inputs unchanged.
CellKind protocol_kind(Protocol proto, CellKind rtz_kind);

// Early-output dual-rail full adder.
// RTZ form: four C-elements pair the operand rails, two OR2 collect the
// XOR/XNOR rails, AO22 gates steer them by the carry, and AO222 majority
// gates produce the carry pair from the operand and carry rails directly
// (which is what lets the carry reset without waiting for the chain).
AdderBitOut emit_full_adder(NetlistBuilder& nb, RailRef a, RailRef b,
                            RailRef cin);

// Dual-rail half adder: single AO22 complex gates per sum rail, an AND2
// for the true carry rail and an AO222 in disjoint product form for the
// false carry rail.
AdderBitOut emit_half_adder(NetlistBuilder& nb, RailRef a, RailRef b);

// Early-output 2-input AND/OR: the true rail implements the function on
// the true rails, the false rail complements it via the false rails.
RailRef emit_gate_block(NetlistBuilder& nb, GateFunc func, RailRef a,
                        RailRef b);

// Per-pair valid gate (OR2 under RTZ, AND2 under RTO) combined by a
// balanced C-element tree; returns the done net.
NetId emit_completion_detector(NetlistBuilder& nb,
                               std::span<const RailRef> pairs);

// One C-element per rail, gated by ack.
RailRef emit_register_bit(NetlistBuilder& nb, RailRef in, NetId ack);

// Standalone fragments with named ports, for direct study and testing.
Netlist gen_full_adder(Protocol proto);
Netlist gen_half_adder(Protocol proto);
Netlist gen_gate_block(GateFunc func, Protocol proto);

// width >= 1 dual-rail pairs (ports P0..P{width-1}); done exposed as the
// ACKOUT single-rail port.
Netlist gen_completion_detector(int width, Protocol proto);

// width >= 1 bits (ports D*/Q*), ack exposed as the ACK single-rail port.
Netlist gen_register(int width, Protocol proto);

}  // namespace qdi

#endif
