#ifndef QDI_NETLIST_HPP
#define QDI_NETLIST_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdi/cells.hpp"
#include "qdi/railcode.hpp"

namespace qdi {

using NetId = int32_t;
using CellId = int32_t;

inline constexpr CellId kPrimaryInput = -1;

struct GateInst {
  CellId id = 0;
  CellKind kind = CellKind::And2;
  std::vector<NetId> inputs;  // length == arity(kind)
  NetId output = 0;

  bool operator==(const GateInst&) const = default;
};

enum class PortDir : uint8_t { Input, Output };

struct DualRailPort {
  std::string name;
  NetId rail1 = 0;
  NetId rail0 = 0;
  PortDir dir = PortDir::Input;

  bool operator==(const DualRailPort&) const = default;
};

struct SingleRailPort {
  std::string name;
  NetId net = 0;

  bool operator==(const SingleRailPort&) const = default;
};

// A dual-rail signal referenced by its two net ids.
struct RailRef {
  NetId rail1 = 0;
  NetId rail0 = 0;
};

// Derived per-net connectivity: the driving cell (or primary-input marker)
// and the (cell, pin) sinks. Built on demand from the cell list.
struct Net {
  NetId id = 0;
  CellId driver = kPrimaryInput;
  std::vector<std::pair<CellId, int>> fanout;
};

// Immutable gate-level graph. Cells reference nets by dense ids in
// [0, num_nets). Ack ports are absent on bare combinational fragments and
// present on full handshake stages.
struct Netlist {
  Protocol protocol = Protocol::Rtz;
  int32_t num_nets = 0;
  std::vector<GateInst> cells;
  std::vector<DualRailPort> in_ports;
  std::vector<DualRailPort> out_ports;
  std::optional<SingleRailPort> ack_in;
  std::optional<SingleRailPort> ack_out;
  std::map<std::string, std::string> metadata;

  bool operator==(const Netlist&) const = default;

  const DualRailPort* find_in_port(std::string_view name) const;
  const DualRailPort* find_out_port(std::string_view name) const;
};

// One structural rule violation found by validate(). Violations are data,
// not exceptions; an empty list means the netlist is well formed.
struct NetlistViolation {
  std::string rule;
  std::string detail;
};

std::vector<NetlistViolation> validate(const Netlist& nl);

// Builds the driver/fanout table. Indices out of range or multiple drivers
// are tolerated here (validate reports them); the last writer wins.
std::vector<Net> build_nets(const Netlist& nl);

// Per-kind cell census.
std::map<CellKind, int> cell_census(const Netlist& nl);

// Canonical JSON text form (schema "qdi-netlist-v1"). serialize() requires
// a valid netlist and throws ValidationError otherwise. deserialize()
// throws ParseError on malformed text and ValidationError when the decoded
// netlist breaks structural rules.
std::string serialize(const Netlist& nl);
Netlist deserialize(const std::string& text);

Netlist load_netlist(const std::string& path);
void save_netlist(const Netlist& nl, const std::string& path);

// Incremental netlist construction with dense id assignment.
class NetlistBuilder {
 public:
  explicit NetlistBuilder(Protocol proto) { nl_.protocol = proto; }

  NetId new_net() { return nl_.num_nets++; }

  // Adds a cell driving a freshly allocated output net; returns that net.
  NetId add_cell(CellKind kind, std::span<const NetId> inputs);
  NetId add_cell(CellKind kind, std::initializer_list<NetId> inputs);

  // Adds a cell driving an already allocated net.
  CellId add_cell_on(CellKind kind, std::span<const NetId> inputs, NetId out);

  void add_in_port(std::string name, NetId rail1, NetId rail0);
  void add_out_port(std::string name, NetId rail1, NetId rail0);
  void set_ack_in(std::string name, NetId net);
  void set_ack_out(std::string name, NetId net);
  void set_meta(const std::string& key, const std::string& value);

  Protocol protocol() const { return nl_.protocol; }

  Netlist take() { return std::move(nl_); }

 private:
  Netlist nl_;
};

}  // namespace qdi

#endif
