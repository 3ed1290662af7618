#ifndef QDI_DUALIZE_HPP
#define QDI_DUALIZE_HPP

#include "qdi/netlist.hpp"

namespace qdi {

// Swaps every gate for its Boolean dual (C-elements and inverters are
// self-dual), flips the protocol tag, and leaves connectivity, ids, and
// ports untouched. An involution.
Netlist dualize(const Netlist& nl);

}  // namespace qdi

#endif
