#ifndef QDI_VCD_HPP
#define QDI_VCD_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "qdi/sim.hpp"

namespace qdi {

// Human-readable net names: port rails as <port>_1/<port>_0, ack ports by
// their own names, everything else n<id>.
std::vector<std::string> net_names(const Netlist& nl);

// Value-change-dump style export of a trace: header with net names, then
// time-ordered change records. One delay unit maps to 1000 ticks at a
// 1 ps timescale.
void write_vcd(const Trace& trace, const Netlist& nl, std::ostream& os);

void write_vcd_file(const Trace& trace, const Netlist& nl,
                    const std::string& path);

}  // namespace qdi

#endif
