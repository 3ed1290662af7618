#include "qdi/addergen.hpp"

#include <string>
#include <unordered_map>
#include <vector>

namespace qdi {

void check_config(const AdderConfig& cfg) {
  // The decoded {carry, sum} word must fit in 64 bits.
  if (cfg.width < 2 || cfg.width > 62) {
    throw InputError("adder width must be in [2, 62], got " +
                     std::to_string(cfg.width));
  }
  if (cfg.approx_bits < 0 || cfg.approx_bits > cfg.width - 2) {
    throw InputError("approx_bits must be in [0, width-2], got " +
                     std::to_string(cfg.approx_bits));
  }
}

std::string carry_out_name(int width) {
  return width == 32 ? "C32" : "COUT";
}

Netlist build_adder(const AdderConfig& cfg) {
  check_config(cfg);
  const int w = cfg.width;
  const int k = cfg.approx_bits;
  NetlistBuilder nb(cfg.protocol);

  std::vector<RailRef> a(w), b(w);
  for (int i = 0; i < w; ++i) {
    a[i] = {nb.new_net(), nb.new_net()};
    nb.add_in_port("A" + std::to_string(i), a[i].rail1, a[i].rail0);
  }
  for (int i = 0; i < w; ++i) {
    b[i] = {nb.new_net(), nb.new_net()};
    nb.add_in_port("B" + std::to_string(i), b[i].rail1, b[i].rail0);
  }

  std::vector<RailRef> sum(w);
  RailRef carry;

  if (k == 0) {
    AdderBitOut bit0 = emit_half_adder(nb, a[0], b[0]);
    sum[0] = bit0.sum;
    carry = bit0.cout;
    for (int i = 1; i < w; ++i) {
      AdderBitOut bit = emit_full_adder(nb, a[i], b[i], carry);
      sum[i] = bit.sum;
      carry = bit.cout;
    }
  } else {
    for (int i = 0; i < k; ++i) {
      sum[i] = emit_gate_block(nb, GateFunc::Or, a[i], b[i]);
    }
    carry = emit_gate_block(nb, GateFunc::And, a[k - 1], b[k - 1]);
    for (int i = k; i < w; ++i) {
      AdderBitOut bit = emit_full_adder(nb, a[i], b[i], carry);
      sum[i] = bit.sum;
      carry = bit.cout;
    }
  }

  for (int i = 0; i < w; ++i) {
    nb.add_out_port("SUM" + std::to_string(i), sum[i].rail1, sum[i].rail0);
  }
  nb.add_out_port(carry_out_name(w), carry.rail1, carry.rail0);

  nb.set_meta("generator", "ripple_carry_adder");
  nb.set_meta("width", std::to_string(w));
  nb.set_meta("approx_bits", std::to_string(k));
  return nb.take();
}

Netlist build_stage(const Netlist& adder) {
  if (adder.ack_in || adder.ack_out) {
    throw InputError("build_stage: adder already has ack ports");
  }
  {
    auto violations = validate(adder);
    if (!violations.empty()) {
      throw ValidationError("build_stage: adder netlist invalid: " +
                            violations.front().detail);
    }
  }

  NetlistBuilder nb(adder.protocol);
  NetId ack = nb.new_net();
  nb.set_ack_in("ACKIN", ack);

  // Stage input ports feed the registers; register outputs replace the
  // adder's primary-input nets when its cells are copied over.
  std::unordered_map<NetId, NetId> remap;
  remap.reserve(adder.num_nets);
  for (const auto& p : adder.in_ports) {
    RailRef in{nb.new_net(), nb.new_net()};
    nb.add_in_port(p.name, in.rail1, in.rail0);
    RailRef q = emit_register_bit(nb, in, ack);
    remap[p.rail1] = q.rail1;
    remap[p.rail0] = q.rail0;
  }

  for (NetId n = 0; n < adder.num_nets; ++n) {
    if (!remap.count(n)) remap[n] = nb.new_net();
  }

  std::vector<NetId> ins;
  for (const auto& c : adder.cells) {
    ins.clear();
    for (NetId n : c.inputs) ins.push_back(remap.at(n));
    nb.add_cell_on(c.kind, ins, remap.at(c.output));
  }

  std::vector<RailRef> out_pairs;
  out_pairs.reserve(adder.out_ports.size());
  for (const auto& p : adder.out_ports) {
    RailRef pair{remap.at(p.rail1), remap.at(p.rail0)};
    nb.add_out_port(p.name, pair.rail1, pair.rail0);
    out_pairs.push_back(pair);
  }

  NetId done = emit_completion_detector(nb, out_pairs);
  nb.set_ack_out("ACKOUT", done);

  for (const auto& [key, value] : adder.metadata) nb.set_meta(key, value);
  nb.set_meta("stage", "1");
  return nb.take();
}

Netlist build_adder_stage(const AdderConfig& cfg) {
  return build_stage(build_adder(cfg));
}

}  // namespace qdi
