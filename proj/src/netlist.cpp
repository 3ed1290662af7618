#include "qdi/netlist.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qdi {

using nlohmann::json;

const DualRailPort* Netlist::find_in_port(std::string_view name) const {
  for (const auto& p : in_ports)
    if (p.name == name) return &p;
  return nullptr;
}

const DualRailPort* Netlist::find_out_port(std::string_view name) const {
  for (const auto& p : out_ports)
    if (p.name == name) return &p;
  return nullptr;
}

std::vector<Net> build_nets(const Netlist& nl) {
  std::vector<Net> nets(std::max<int32_t>(nl.num_nets, 0));
  for (int32_t i = 0; i < nl.num_nets; ++i) nets[i].id = i;
  auto in_range = [&](NetId n) { return n >= 0 && n < nl.num_nets; };
  for (const auto& cell : nl.cells) {
    if (in_range(cell.output)) nets[cell.output].driver = cell.id;
    for (size_t pin = 0; pin < cell.inputs.size(); ++pin) {
      NetId n = cell.inputs[pin];
      if (in_range(n)) nets[n].fanout.emplace_back(cell.id, static_cast<int>(pin));
    }
  }
  return nets;
}

std::map<CellKind, int> cell_census(const Netlist& nl) {
  std::map<CellKind, int> census;
  for (const auto& cell : nl.cells) census[cell.kind]++;
  return census;
}

namespace {

// Cycle search over the stateless-cell subgraph. C-elements break
// combinational cycles by holding state, so edges through them are skipped.
bool stateless_cycle(const Netlist& nl, const std::vector<Net>& nets,
                     std::string* where) {
  const size_t n = nl.cells.size();
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<uint8_t> mark(n, 0);
  std::vector<std::pair<size_t, size_t>> stack;  // (cell index, next sink)

  auto sinks_of = [&](size_t ci) -> const std::vector<std::pair<CellId, int>>& {
    static const std::vector<std::pair<CellId, int>> empty;
    NetId out = nl.cells[ci].output;
    if (out < 0 || out >= nl.num_nets) return empty;
    return nets[out].fanout;
  };

  for (size_t root = 0; root < n; ++root) {
    if (mark[root] != 0 || is_stateful(nl.cells[root].kind)) continue;
    stack.clear();
    stack.emplace_back(root, 0);
    mark[root] = 1;
    while (!stack.empty()) {
      auto& [ci, next] = stack.back();
      const auto& sinks = sinks_of(ci);
      if (next >= sinks.size()) {
        mark[ci] = 2;
        stack.pop_back();
        continue;
      }
      size_t si = static_cast<size_t>(sinks[next].first);
      ++next;
      if (si >= n || is_stateful(nl.cells[si].kind)) continue;
      if (mark[si] == 1) {
        *where = "cell " + std::to_string(nl.cells[si].id);
        return true;
      }
      if (mark[si] == 0) {
        mark[si] = 1;
        stack.emplace_back(si, 0);
      }
    }
  }
  return false;
}

}  // namespace

std::vector<NetlistViolation> validate(const Netlist& nl) {
  std::vector<NetlistViolation> out;
  auto bad = [&](std::string rule, std::string detail) {
    out.push_back({std::move(rule), std::move(detail)});
  };
  auto in_range = [&](NetId n) { return n >= 0 && n < nl.num_nets; };

  if (nl.num_nets < 0) bad("net-count", "negative net count");

  // Dense, ordered cell ids.
  for (size_t i = 0; i < nl.cells.size(); ++i) {
    if (nl.cells[i].id != static_cast<CellId>(i)) {
      bad("cell-id", "cell at index " + std::to_string(i) + " has id " +
                         std::to_string(nl.cells[i].id));
    }
  }

  std::vector<int> driver_count(std::max<int32_t>(nl.num_nets, 0), 0);
  std::vector<uint8_t> referenced(std::max<int32_t>(nl.num_nets, 0), 0);

  for (const auto& cell : nl.cells) {
    if (static_cast<int>(cell.inputs.size()) != arity(cell.kind)) {
      bad("arity", "cell " + std::to_string(cell.id) + " (" +
                       std::string(cell_kind_name(cell.kind)) + ") has " +
                       std::to_string(cell.inputs.size()) + " inputs");
    }
    if (!in_range(cell.output)) {
      bad("net-ref", "cell " + std::to_string(cell.id) +
                         " output net out of range: " +
                         std::to_string(cell.output));
    } else {
      driver_count[cell.output]++;
      referenced[cell.output] = 1;
    }
    for (NetId in : cell.inputs) {
      if (!in_range(in)) {
        bad("net-ref", "cell " + std::to_string(cell.id) +
                           " input net out of range: " + std::to_string(in));
      } else {
        referenced[in] = 1;
        if (in == cell.output) {
          bad("self-loop", "cell " + std::to_string(cell.id) +
                               " feeds its own output net " +
                               std::to_string(in));
        }
      }
    }
  }

  for (int32_t n = 0; n < nl.num_nets; ++n) {
    if (driver_count[n] > 1) {
      bad("multi-driver", "net " + std::to_string(n) + " has " +
                              std::to_string(driver_count[n]) + " drivers");
    }
  }

  auto check_port_rail = [&](const std::string& name, NetId rail,
                             PortDir dir) {
    if (!in_range(rail)) {
      bad("port-ref", "port " + name + " references net out of range: " +
                          std::to_string(rail));
      return;
    }
    referenced[rail] = 1;
    if (dir == PortDir::Input && driver_count[rail] > 0) {
      bad("input-driven",
          "input port " + name + " rail net " + std::to_string(rail) +
              " is driven by a cell");
    }
    if (dir == PortDir::Output && driver_count[rail] == 0) {
      bad("output-undriven",
          "output port " + name + " rail net " + std::to_string(rail) +
              " has no driver");
    }
  };

  for (const auto& p : nl.in_ports) {
    if (p.dir != PortDir::Input) bad("port-dir", "in_port " + p.name);
    if (p.rail1 == p.rail0)
      bad("rail-alias", "port " + p.name + " uses one net for both rails");
    check_port_rail(p.name, p.rail1, PortDir::Input);
    check_port_rail(p.name, p.rail0, PortDir::Input);
  }
  for (const auto& p : nl.out_ports) {
    if (p.dir != PortDir::Output) bad("port-dir", "out_port " + p.name);
    if (p.rail1 == p.rail0)
      bad("rail-alias", "port " + p.name + " uses one net for both rails");
    check_port_rail(p.name, p.rail1, PortDir::Output);
    check_port_rail(p.name, p.rail0, PortDir::Output);
  }
  if (nl.ack_in) check_port_rail(nl.ack_in->name, nl.ack_in->net, PortDir::Input);
  if (nl.ack_out)
    check_port_rail(nl.ack_out->name, nl.ack_out->net, PortDir::Output);

  for (int32_t n = 0; n < nl.num_nets; ++n) {
    if (!referenced[n]) {
      bad("dangling-net", "net " + std::to_string(n) +
                              " is neither connected to a cell nor a port");
    }
  }

  // Undriven internal nets: every net must be a cell output or a primary
  // input (input-port rail or ack_in).
  {
    std::vector<uint8_t> is_primary(std::max<int32_t>(nl.num_nets, 0), 0);
    auto mark = [&](NetId n) {
      if (in_range(n)) is_primary[n] = 1;
    };
    for (const auto& p : nl.in_ports) {
      mark(p.rail1);
      mark(p.rail0);
    }
    if (nl.ack_in) mark(nl.ack_in->net);
    for (int32_t n = 0; n < nl.num_nets; ++n) {
      if (referenced[n] && driver_count[n] == 0 && !is_primary[n]) {
        bad("undriven", "net " + std::to_string(n) +
                            " has no driver and is not a primary input");
      }
    }
  }

  if (out.empty()) {
    auto nets = build_nets(nl);
    std::string where;
    if (stateless_cycle(nl, nets, &where)) {
      bad("comb-cycle", "combinational cycle through " + where);
    }
  }

  return out;
}

namespace {

json port_to_json(const DualRailPort& p) {
  return json{{"name", p.name}, {"rail1", p.rail1}, {"rail0", p.rail0}};
}

DualRailPort port_from_json(const json& j, PortDir dir) {
  DualRailPort p;
  p.name = j.at("name").get<std::string>();
  p.rail1 = j.at("rail1").get<NetId>();
  p.rail0 = j.at("rail0").get<NetId>();
  p.dir = dir;
  return p;
}

}  // namespace

std::string serialize(const Netlist& nl) {
  auto violations = validate(nl);
  if (!violations.empty()) {
    throw ValidationError("serialize: netlist is invalid: " +
                          violations.front().rule + ": " +
                          violations.front().detail);
  }
  json j;
  j["schema"] = "qdi-netlist-v1";
  j["protocol"] = std::string(protocol_name(nl.protocol));
  j["num_nets"] = nl.num_nets;
  if (auto it = nl.metadata.find("width"); it != nl.metadata.end()) {
    j["width"] = std::stoi(it->second);
  }
  if (auto it = nl.metadata.find("approx_bits"); it != nl.metadata.end()) {
    j["approx_bits"] = std::stoi(it->second);
  }
  j["metadata"] = nl.metadata;
  json cells = json::array();
  for (const auto& c : nl.cells) {
    cells.push_back(json{{"id", c.id},
                         {"kind", std::string(cell_kind_name(c.kind))},
                         {"inputs", c.inputs},
                         {"output", c.output}});
  }
  j["cells"] = std::move(cells);
  json ins = json::array(), outs = json::array();
  for (const auto& p : nl.in_ports) ins.push_back(port_to_json(p));
  for (const auto& p : nl.out_ports) outs.push_back(port_to_json(p));
  j["in_ports"] = std::move(ins);
  j["out_ports"] = std::move(outs);
  if (nl.ack_in) j["ack_in"] = json{{"name", nl.ack_in->name}, {"net", nl.ack_in->net}};
  if (nl.ack_out)
    j["ack_out"] = json{{"name", nl.ack_out->name}, {"net", nl.ack_out->net}};
  return j.dump(2) + "\n";
}

Netlist deserialize(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("netlist: ") + e.what());
  }
  Netlist nl;
  try {
    if (!j.is_object()) throw ParseError("netlist: expected a JSON object");
    std::string schema = j.at("schema").get<std::string>();
    if (schema != "qdi-netlist-v1") {
      throw ParseError("netlist: unsupported schema '" + schema + "'");
    }
    nl.protocol = protocol_from_name(j.at("protocol").get<std::string>());
    nl.num_nets = j.at("num_nets").get<int32_t>();
    if (j.contains("metadata")) {
      nl.metadata = j["metadata"].get<std::map<std::string, std::string>>();
    }
    if (j.contains("width") && !nl.metadata.count("width")) {
      nl.metadata["width"] = std::to_string(j["width"].get<int>());
    }
    if (j.contains("approx_bits") && !nl.metadata.count("approx_bits")) {
      nl.metadata["approx_bits"] = std::to_string(j["approx_bits"].get<int>());
    }
    for (const auto& c : j.at("cells")) {
      GateInst g;
      g.id = c.at("id").get<CellId>();
      g.kind = cell_kind_from_name(c.at("kind").get<std::string>());
      g.inputs = c.at("inputs").get<std::vector<NetId>>();
      g.output = c.at("output").get<NetId>();
      nl.cells.push_back(std::move(g));
    }
    for (const auto& p : j.at("in_ports"))
      nl.in_ports.push_back(port_from_json(p, PortDir::Input));
    for (const auto& p : j.at("out_ports"))
      nl.out_ports.push_back(port_from_json(p, PortDir::Output));
    if (j.contains("ack_in")) {
      nl.ack_in = SingleRailPort{j["ack_in"].at("name").get<std::string>(),
                                 j["ack_in"].at("net").get<NetId>()};
    }
    if (j.contains("ack_out")) {
      nl.ack_out = SingleRailPort{j["ack_out"].at("name").get<std::string>(),
                                  j["ack_out"].at("net").get<NetId>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("netlist: ") + e.what());
  }
  auto violations = validate(nl);
  if (!violations.empty()) {
    throw ValidationError("deserialize: netlist is invalid: " +
                          violations.front().rule + ": " +
                          violations.front().detail);
  }
  return nl;
}

Netlist load_netlist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open netlist file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

void save_netlist(const Netlist& nl, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write netlist file: " + path);
  out << serialize(nl);
}

NetId NetlistBuilder::add_cell(CellKind kind, std::span<const NetId> inputs) {
  NetId out = new_net();
  add_cell_on(kind, inputs, out);
  return out;
}

NetId NetlistBuilder::add_cell(CellKind kind,
                               std::initializer_list<NetId> inputs) {
  return add_cell(kind, std::span<const NetId>(inputs.begin(), inputs.size()));
}

CellId NetlistBuilder::add_cell_on(CellKind kind, std::span<const NetId> inputs,
                                   NetId out) {
  if (static_cast<int>(inputs.size()) != arity(kind)) {
    throw InputError("add_cell: arity mismatch for " +
                     std::string(cell_kind_name(kind)));
  }
  GateInst g;
  g.id = static_cast<CellId>(nl_.cells.size());
  g.kind = kind;
  g.inputs.assign(inputs.begin(), inputs.end());
  g.output = out;
  nl_.cells.push_back(std::move(g));
  return nl_.cells.back().id;
}

void NetlistBuilder::add_in_port(std::string name, NetId rail1, NetId rail0) {
  nl_.in_ports.push_back(
      {std::move(name), rail1, rail0, PortDir::Input});
}

void NetlistBuilder::add_out_port(std::string name, NetId rail1, NetId rail0) {
  nl_.out_ports.push_back(
      {std::move(name), rail1, rail0, PortDir::Output});
}

void NetlistBuilder::set_ack_in(std::string name, NetId net) {
  nl_.ack_in = SingleRailPort{std::move(name), net};
}

void NetlistBuilder::set_ack_out(std::string name, NetId net) {
  nl_.ack_out = SingleRailPort{std::move(name), net};
}

void NetlistBuilder::set_meta(const std::string& key, const std::string& value) {
  nl_.metadata[key] = value;
}

}  // namespace qdi
