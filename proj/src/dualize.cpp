#include "qdi/dualize.hpp"

namespace qdi {

Netlist dualize(const Netlist& nl) {
  Netlist out = nl;
  out.protocol = nl.protocol == Protocol::Rtz ? Protocol::Rto : Protocol::Rtz;
  for (auto& cell : out.cells) cell.kind = dual_of(cell.kind);
  return out;
}

}  // namespace qdi
