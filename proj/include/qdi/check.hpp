#ifndef QDI_CHECK_HPP
#define QDI_CHECK_HPP

#include <span>
#include <string>
#include <vector>

#include "qdi/sim.hpp"

namespace qdi {

enum class ViolationKind : uint8_t {
  IllegalCodeword,
  NonMonotone,
  OrphanTransition,
  NotEarlyReset,
};

std::string_view violation_kind_name(ViolationKind k);

struct CheckViolation {
  ViolationKind kind;
  std::string where;  // port or net
  double time = 0.0;
  std::string phase;  // data | spacer | ack | init
  std::string detail;
};

// One violation per line: kind, where, time, phase, detail.
std::string format_violations(std::span<const CheckViolation> violations);

// Flags every instant at which a dual-rail port pair holds the illegal
// codeword for the netlist's protocol.
std::vector<CheckViolation> check_legality(const Trace& trace,
                                           const Netlist& nl);

// Within a data phase every net must transition at most once and only in
// the phase's legal direction (RTZ data: rising, RTZ spacer: falling; RTO
// mirrored). Environment-driven ack nets are exempt; transitions between
// an ack marker and the next phase marker belong to no phase.
std::vector<CheckViolation> check_monotonicity(const Trace& trace);

// Dynamic witness check for unacknowledged transitions: flags any
// intermediate (non-port) gate-output transition after the phase's
// acknowledgment event (completion detector toggle), and any cell whose
// output disagrees with its inputs at a phase end. Requires a netlist
// with a completion detector (ack_out) and a trace covering at least one
// complete transaction; otherwise throws CheckError.
std::vector<CheckViolation> detect_orphans(const Trace& trace,
                                           const Netlist& nl);

struct EarlyResetResult {
  bool pass = false;
  std::vector<CheckViolation> violations;  // empty iff pass
};

// Settles the circuit on a data word, then drives the spacer on `subset`
// only and demands that every primary output reach the spacer state while
// the remaining inputs still hold data. Fragments are swept over all data
// assignments; a stage (ports A*/B*, ack present) is probed with a fixed
// assignment set. Passes if any settleable assignment resets all outputs.
EarlyResetResult verify_early_reset(const Netlist& nl,
                                    std::span<const std::string> subset,
                                    const CellLibrary& lib);

}  // namespace qdi

#endif
