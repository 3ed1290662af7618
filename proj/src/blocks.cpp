#include "qdi/blocks.hpp"

#include <string>
#include <vector>

namespace qdi {

CellKind protocol_kind(Protocol proto, CellKind rtz_kind) {
  return proto == Protocol::Rto ? dual_of(rtz_kind) : rtz_kind;
}

namespace {

NetId cell(NetlistBuilder& nb, CellKind rtz_kind,
           std::initializer_list<NetId> inputs) {
  return nb.add_cell(protocol_kind(nb.protocol(), rtz_kind), inputs);
}

RailRef new_pair(NetlistBuilder& nb) { return {nb.new_net(), nb.new_net()}; }

RailRef in_pair(NetlistBuilder& nb, const std::string& name) {
  RailRef r = new_pair(nb);
  nb.add_in_port(name, r.rail1, r.rail0);
  return r;
}

}  // namespace

AdderBitOut emit_full_adder(NetlistBuilder& nb, RailRef a, RailRef b,
                            RailRef cin) {
  // One of the four C-elements fires per data word; the pair (m1, m0)
  // carries a XOR b / a XNOR b.
  NetId n1 = cell(nb, CellKind::C2, {a.rail1, b.rail0});
  NetId n2 = cell(nb, CellKind::C2, {a.rail0, b.rail1});
  NetId n3 = cell(nb, CellKind::C2, {a.rail0, b.rail0});
  NetId n4 = cell(nb, CellKind::C2, {a.rail1, b.rail1});
  NetId m1 = cell(nb, CellKind::Or2, {n1, n2});
  NetId m0 = cell(nb, CellKind::Or2, {n3, n4});

  AdderBitOut out;
  out.sum.rail1 = cell(nb, CellKind::Ao22, {m1, cin.rail0, m0, cin.rail1});
  out.sum.rail0 = cell(nb, CellKind::Ao22, {m0, cin.rail0, m1, cin.rail1});
  out.cout.rail1 = cell(nb, CellKind::Ao222,
                        {a.rail1, b.rail1, a.rail1, cin.rail1, b.rail1, cin.rail1});
  out.cout.rail0 = cell(nb, CellKind::Ao222,
                        {a.rail0, b.rail0, a.rail0, cin.rail0, b.rail0, cin.rail0});
  return out;
}

AdderBitOut emit_half_adder(NetlistBuilder& nb, RailRef a, RailRef b) {
  AdderBitOut out;
  out.sum.rail1 = cell(nb, CellKind::Ao22, {a.rail1, b.rail0, a.rail0, b.rail1});
  out.sum.rail0 = cell(nb, CellKind::Ao22, {a.rail1, b.rail1, a.rail0, b.rail0});
  out.cout.rail1 = cell(nb, CellKind::And2, {a.rail1, b.rail1});
  // Disjoint products: not(a)not(b) + not(a)b + a not(b).
  out.cout.rail0 = cell(nb, CellKind::Ao222,
                        {a.rail0, b.rail0, a.rail0, b.rail1, a.rail1, b.rail0});
  return out;
}

RailRef emit_gate_block(NetlistBuilder& nb, GateFunc func, RailRef a,
                        RailRef b) {
  RailRef out;
  if (func == GateFunc::And) {
    out.rail1 = cell(nb, CellKind::And2, {a.rail1, b.rail1});
    out.rail0 = cell(nb, CellKind::Or2, {a.rail0, b.rail0});
  } else {
    out.rail1 = cell(nb, CellKind::Or2, {a.rail1, b.rail1});
    out.rail0 = cell(nb, CellKind::And2, {a.rail0, b.rail0});
  }
  return out;
}

NetId emit_completion_detector(NetlistBuilder& nb,
                               std::span<const RailRef> pairs) {
  if (pairs.empty()) throw InputError("completion detector needs width >= 1");
  std::vector<NetId> level;
  level.reserve(pairs.size());
  // RTZ: OR2 marks a pair valid; RTO dual: AND2 marks a pair at spacer.
  for (const RailRef& p : pairs) {
    level.push_back(cell(nb, CellKind::Or2, {p.rail1, p.rail0}));
  }
  // Balanced C-element tree, odd leftover promoted to the next level.
  while (level.size() > 1) {
    std::vector<NetId> next;
    next.reserve(level.size() / 2 + 1);
    size_t i = 0;
    for (; i + 1 < level.size(); i += 2) {
      next.push_back(nb.add_cell(CellKind::C2, {level[i], level[i + 1]}));
    }
    if (i < level.size()) next.push_back(level[i]);
    level = std::move(next);
  }
  return level.front();
}

RailRef emit_register_bit(NetlistBuilder& nb, RailRef in, NetId ack) {
  RailRef out;
  out.rail1 = nb.add_cell(CellKind::C2, {in.rail1, ack});
  out.rail0 = nb.add_cell(CellKind::C2, {in.rail0, ack});
  return out;
}

Netlist gen_full_adder(Protocol proto) {
  NetlistBuilder nb(proto);
  RailRef a = in_pair(nb, "A");
  RailRef b = in_pair(nb, "B");
  RailRef cin = in_pair(nb, "CIN");
  AdderBitOut bit = emit_full_adder(nb, a, b, cin);
  nb.add_out_port("SUM", bit.sum.rail1, bit.sum.rail0);
  nb.add_out_port("COUT", bit.cout.rail1, bit.cout.rail0);
  nb.set_meta("generator", "full_adder");
  return nb.take();
}

Netlist gen_half_adder(Protocol proto) {
  NetlistBuilder nb(proto);
  RailRef a = in_pair(nb, "A");
  RailRef b = in_pair(nb, "B");
  AdderBitOut bit = emit_half_adder(nb, a, b);
  nb.add_out_port("SUM", bit.sum.rail1, bit.sum.rail0);
  nb.add_out_port("COUT", bit.cout.rail1, bit.cout.rail0);
  nb.set_meta("generator", "half_adder");
  return nb.take();
}

Netlist gen_gate_block(GateFunc func, Protocol proto) {
  NetlistBuilder nb(proto);
  RailRef a = in_pair(nb, "A");
  RailRef b = in_pair(nb, "B");
  RailRef z = emit_gate_block(nb, func, a, b);
  nb.add_out_port(func == GateFunc::And ? "Z" : "V", z.rail1, z.rail0);
  nb.set_meta("generator", func == GateFunc::And ? "and_block" : "or_block");
  return nb.take();
}

Netlist gen_completion_detector(int width, Protocol proto) {
  if (width < 1) throw InputError("completion detector needs width >= 1");
  NetlistBuilder nb(proto);
  std::vector<RailRef> pairs;
  pairs.reserve(width);
  for (int i = 0; i < width; ++i) {
    pairs.push_back(in_pair(nb, "P" + std::to_string(i)));
  }
  NetId done = emit_completion_detector(nb, pairs);
  nb.set_ack_out("ACKOUT", done);
  nb.set_meta("generator", "completion_detector");
  nb.set_meta("width", std::to_string(width));
  return nb.take();
}

Netlist gen_register(int width, Protocol proto) {
  if (width < 1) throw InputError("register needs width >= 1");
  NetlistBuilder nb(proto);
  NetId ack = nb.new_net();
  nb.set_ack_in("ACK", ack);
  for (int i = 0; i < width; ++i) {
    RailRef in = in_pair(nb, "D" + std::to_string(i));
    RailRef out = emit_register_bit(nb, in, ack);
    nb.add_out_port("Q" + std::to_string(i), out.rail1, out.rail0);
  }
  nb.set_meta("generator", "register");
  nb.set_meta("width", std::to_string(width));
  return nb.take();
}

}  // namespace qdi
