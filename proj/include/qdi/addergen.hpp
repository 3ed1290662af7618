#ifndef QDI_ADDERGEN_HPP
#define QDI_ADDERGEN_HPP

#include "qdi/blocks.hpp"
#include "qdi/netlist.hpp"

namespace qdi {

// approx_bits = 0 builds the accurate ripple-carry adder; k > 0 replaces
// the k least significant positions by OR blocks with an AND-derived carry
// into the accurate upper chain. k is capped at width - 2 so the accurate
// part is always a proper chain.
struct AdderConfig {
  int width = 32;
  int approx_bits = 0;
  Protocol protocol = Protocol::Rtz;
};

// Throws InputError when the config violates its invariants.
void check_config(const AdderConfig& cfg);

// Bare adder: dual-rail ports A0.., B0.., SUM0.., and a carry-out port
// (named C32 at width 32, COUT otherwise); no ack ports.
Netlist build_adder(const AdderConfig& cfg);

// Wraps a bare adder with input registers on both operand buses, a
// completion detector over all output pairs, ACKIN routed to the
// registers and ACKOUT driven by the detector.
Netlist build_stage(const Netlist& adder);

// Convenience: build_stage(build_adder(cfg)).
Netlist build_adder_stage(const AdderConfig& cfg);

// The carry-out port name used by the generators.
std::string carry_out_name(int width);

}  // namespace qdi

#endif
