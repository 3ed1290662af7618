#include "qdi/sim.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace qdi {

namespace {

// Register ack level that lets data through (RTZ: 1, RTO: 0); the spacer
// passes at the complement. The idle state of a transaction holds the
// data-passage level.
constexpr bool ack_idle_level(Protocol p) { return !spacer_level(p); }
constexpr bool ack_busy_level(Protocol p) { return spacer_level(p); }

// Completion detector output once a full data word arrived.
constexpr bool done_data_level(Protocol p) { return !spacer_level(p); }
constexpr bool done_spacer_level(Protocol p) { return spacer_level(p); }

}  // namespace

Simulator::Simulator(const Netlist& nl, const CellLibrary& lib) : nl_(nl) {
  if (nl.num_nets < 0) throw ValidationError("simulator: negative net count");
  for (const GateInst& c : nl.cells) {
    if (c.output < 0 || c.output >= nl.num_nets ||
        static_cast<int>(c.inputs.size()) != arity(c.kind)) {
      throw ValidationError("simulator: malformed cell " +
                            std::to_string(c.id));
    }
    for (NetId n : c.inputs) {
      if (n < 0 || n >= nl.num_nets) {
        throw ValidationError("simulator: cell " + std::to_string(c.id) +
                              " references net out of range");
      }
    }
  }

  const size_t num_cells = nl.cells.size();
  kind_.resize(num_cells);
  out_net_.resize(num_cells);
  delay_.resize(num_cells);
  input_offset_.assign(num_cells + 1, 0);
  driver_.assign(nl.num_nets, kPrimaryInput);

  size_t total_inputs = 0;
  for (size_t i = 0; i < num_cells; ++i) total_inputs += nl.cells[i].inputs.size();
  input_net_.reserve(total_inputs);

  for (size_t i = 0; i < num_cells; ++i) {
    const GateInst& c = nl.cells[i];
    kind_[i] = c.kind;
    out_net_[i] = c.output;
    delay_[i] = lib.delay(c.kind);
    input_offset_[i] = static_cast<int32_t>(input_net_.size());
    for (NetId n : c.inputs) input_net_.push_back(n);
    driver_[c.output] = c.id;
  }
  input_offset_[num_cells] = static_cast<int32_t>(input_net_.size());

  // CSR fanout, deduplicated per (net, cell).
  std::vector<int32_t> counts(nl.num_nets, 0);
  for (size_t i = 0; i < num_cells; ++i) {
    NetId prev = -1;
    for (int32_t p = input_offset_[i]; p < input_offset_[i + 1]; ++p) {
      if (input_net_[p] != prev) counts[input_net_[p]]++;
      prev = input_net_[p];
    }
  }
  fanout_offset_.assign(nl.num_nets + 1, 0);
  for (int32_t n = 0; n < nl.num_nets; ++n) {
    fanout_offset_[n + 1] = fanout_offset_[n] + counts[n];
  }
  fanout_cell_.assign(fanout_offset_[nl.num_nets], 0);
  std::vector<int32_t> cursor(fanout_offset_.begin(), fanout_offset_.end() - 1);
  for (size_t i = 0; i < num_cells; ++i) {
    NetId prev = -1;
    for (int32_t p = input_offset_[i]; p < input_offset_[i + 1]; ++p) {
      NetId n = input_net_[p];
      if (n != prev) fanout_cell_[cursor[n]++] = static_cast<int32_t>(i);
      prev = n;
    }
  }
  // A cell with the same net on non-adjacent pins gets listed twice; the
  // duplicate evaluation is harmless.

  values_.assign(nl.num_nets, 0);
  pending_.assign(nl.num_nets, 0);
  last_change_.assign(nl.num_nets, 0.0);
  init_spacer();
}

void Simulator::init_spacer() {
  const uint8_t level = spacer_level(nl_.protocol) ? 1 : 0;
  std::fill(values_.begin(), values_.end(), level);
  std::fill(pending_.begin(), pending_.end(), level);
  std::fill(last_change_.begin(), last_change_.end(), 0.0);
  queue_ = {};
  now_ = 0.0;
  processed_ = 0;
}

void Simulator::set_initial(NetId net, bool value) {
  values_[net] = value ? 1 : 0;
  pending_[net] = values_[net];
}

void Simulator::settle() {
  for (size_t i = 0; i < kind_.size(); ++i) evaluate_cell(i, now_);
  run();
}

void Simulator::schedule(NetId net, bool value, double time) {
  uint8_t v = value ? 1 : 0;
  if (pending_[net] == v) return;
  pending_[net] = v;
  queue_.push(Event{time, net, seq_++, value});
}

void Simulator::run() {
  size_t used = 0;
  while (!queue_.empty()) {
    if (++used > budget_) {
      throw DeadlockError("event budget of " + std::to_string(budget_) +
                          " exhausted at t=" + std::to_string(now_) +
                          "; circuit is not settling");
    }
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.time;
    apply(ev);
  }
  processed_ += used;
}

void Simulator::apply(const Event& ev) {
  uint8_t v = ev.value ? 1 : 0;
  if (values_[ev.net] == v) return;
  values_[ev.net] = v;
  last_change_[ev.net] = ev.time;
  if (trace_) trace_->nets[ev.net].push_back({ev.time, ev.value});
  if (activity_ && driver_[ev.net] >= 0) (*activity_)[driver_[ev.net]]++;
  for (int32_t f = fanout_offset_[ev.net]; f < fanout_offset_[ev.net + 1]; ++f) {
    evaluate_cell(fanout_cell_[f], ev.time);
  }
}

void Simulator::evaluate_cell(size_t ci, double at) {
  const int32_t begin = input_offset_[ci];
  const int32_t end = input_offset_[ci + 1];
  const NetId out = out_net_[ci];
  bool prev = pending_[out] != 0;
  bool result;
  switch (kind_[ci]) {
    case CellKind::And2:
      result = values_[input_net_[begin]] && values_[input_net_[begin + 1]];
      break;
    case CellKind::Or2:
      result = values_[input_net_[begin]] || values_[input_net_[begin + 1]];
      break;
    case CellKind::Inv:
      result = !values_[input_net_[begin]];
      break;
    case CellKind::C2: {
      bool a = values_[input_net_[begin]];
      bool b = values_[input_net_[begin + 1]];
      result = (a == b) ? a : prev;
      break;
    }
    default: {
      // AO/OA complex gates share the product/sum loop.
      bool is_ao = kind_[ci] == CellKind::Ao22 || kind_[ci] == CellKind::Ao222;
      result = !is_ao;
      for (int32_t p = begin; p < end; p += 2) {
        bool x = values_[input_net_[p]];
        bool y = values_[input_net_[p + 1]];
        if (is_ao) {
          if (x && y) {
            result = true;
            break;
          }
        } else {
          if (!x && !y) {
            result = false;
            break;
          }
        }
      }
      break;
    }
  }
  if (result != prev) {
    pending_[out] = result ? 1 : 0;
    queue_.push(Event{at + delay_[ci], out, seq_++, result});
  }
}

StageHarness::StageHarness(const Netlist& stage, const CellLibrary& lib)
    : nl_(stage), sim_(nl_, lib) {
  if (!stage.ack_in || !stage.ack_out) {
    throw InputError("stage harness needs a netlist with ack ports");
  }
  ack_in_ = stage.ack_in->net;
  ack_out_ = stage.ack_out->net;

  if (auto it = stage.metadata.find("width"); it != stage.metadata.end()) {
    width_ = std::stoi(it->second);
  } else {
    width_ = static_cast<int>(stage.out_ports.size()) - 1;
  }
  if (width_ < 1) throw InputError("stage harness: cannot determine width");

  auto pair_of = [&](const DualRailPort* p, const std::string& what) {
    if (!p) throw InputError("stage harness: missing port " + what);
    return RailRef{p->rail1, p->rail0};
  };
  for (int i = 0; i < width_; ++i) {
    a_rails_.push_back(pair_of(stage.find_in_port("A" + std::to_string(i)),
                               "A" + std::to_string(i)));
    b_rails_.push_back(pair_of(stage.find_in_port("B" + std::to_string(i)),
                               "B" + std::to_string(i)));
  }
  for (int i = 0; i < width_; ++i) {
    out_rails_.push_back(pair_of(stage.find_out_port("SUM" + std::to_string(i)),
                                 "SUM" + std::to_string(i)));
  }
  const DualRailPort* carry = nullptr;
  for (const auto& p : stage.out_ports) {
    if (p.name.rfind("SUM", 0) != 0) carry = &p;
  }
  out_rails_.push_back(pair_of(carry, "carry-out"));

  activity_.assign(stage.cells.size(), 0);
  sim_.attach_activity(&activity_);
  trace_.protocol = stage.protocol;
  trace_.control_nets = {ack_in_};

  sim_.set_initial(ack_in_, ack_idle_level(nl_.protocol));
  sim_.settle();
}

void StageHarness::enable_trace(bool on) {
  trace_on_ = on;
  sim_.attach_trace(on ? &trace_ : nullptr);
  if (on) clear_trace();
}

void StageHarness::clear_trace() {
  trace_.reset(nl_.num_nets);
  trace_.protocol = nl_.protocol;
  trace_.control_nets = {ack_in_};
  for (NetId n = 0; n < nl_.num_nets; ++n) trace_.initial[n] = sim_.value(n);
}

void StageHarness::reset_activity() {
  std::fill(activity_.begin(), activity_.end(), 0);
}

void StageHarness::apply_word(const std::vector<RailRef>& rails,
                              uint64_t value, double at) {
  const Protocol p = nl_.protocol;
  for (size_t i = 0; i < rails.size(); ++i) {
    RailPair enc = encode_bit((value >> i) & 1, p);
    sim_.schedule(rails[i].rail1, enc.rail1, at);
    sim_.schedule(rails[i].rail0, enc.rail0, at);
  }
}

TransactionResult StageHarness::transact(uint64_t a, uint64_t b) {
  const Protocol proto = nl_.protocol;
  if (width_ < 64 && ((a >> width_) != 0 || (b >> width_) != 0)) {
    throw InputError("operand does not fit the adder width");
  }

  auto out_bus = [&]() {
    std::vector<RailPair> bus(out_rails_.size());
    for (size_t i = 0; i < out_rails_.size(); ++i) {
      bus[i] = {sim_.value(out_rails_[i].rail1), sim_.value(out_rails_[i].rail0)};
    }
    return bus;
  };
  auto expect_outputs = [&](DecodeResult::Kind kind, const char* phase) {
    DecodeResult d = decode_bus(out_bus(), proto);
    if (d.kind == DecodeResult::Kind::Illegal) {
      throw ProtocolError(std::string("illegal codeword on an output pair "
                                      "after the ") +
                          phase + " phase");
    }
    if (d.kind != kind) {
      // Name the first offending pair for the deadlock report.
      for (size_t i = 0; i < out_rails_.size(); ++i) {
        RailPair rp{sim_.value(out_rails_[i].rail1),
                    sim_.value(out_rails_[i].rail0)};
        PairState s = classify_pair(rp, proto);
        bool ok = kind == DecodeResult::Kind::Value ? is_data(s)
                                                    : s == PairState::Spacer;
        if (!ok) {
          throw DeadlockError(std::string("stage did not complete the ") +
                              phase + " phase: output pair " +
                              std::to_string(i) + " is " +
                              std::string(pair_state_name(s)));
        }
      }
      throw DeadlockError(std::string("stage did not complete the ") + phase +
                          " phase");
    }
    return d;
  };
  auto max_out_change = [&](double since) {
    double t = since;
    for (const RailRef& r : out_rails_) {
      if (sim_.last_change(r.rail1) >= since)
        t = std::max(t, sim_.last_change(r.rail1));
      if (sim_.last_change(r.rail0) >= since)
        t = std::max(t, sim_.last_change(r.rail0));
    }
    return t;
  };
  auto mark = [&](MarkerKind kind, double t) {
    if (trace_on_) trace_.markers.push_back({kind, t});
  };

  TransactionResult res;

  // Data phase: encode operands onto the register inputs.
  double t0 = sim_.now() + 1.0;
  mark(MarkerKind::DataApplied, t0);
  apply_word(a_rails_, a, t0);
  apply_word(b_rails_, b, t0);
  sim_.run();
  DecodeResult data = expect_outputs(DecodeResult::Kind::Value, "data");
  if (sim_.value(ack_out_) != done_data_level(proto)) {
    throw DeadlockError("completion detector never signalled data receipt");
  }
  res.value = data.value;
  res.timing.forward_latency = max_out_change(t0) - t0;

  // Receiver acknowledges: ack swings to the spacer-passage level.
  double t1 = sim_.now() + 1.0;
  mark(MarkerKind::DataAcked, t1);
  sim_.schedule(ack_in_, ack_busy_level(proto), t1);
  sim_.run();

  // Spacer phase.
  double t2 = sim_.now() + 1.0;
  mark(MarkerKind::SpacerApplied, t2);
  const uint8_t sp = spacer_level(proto) ? 1 : 0;
  for (const RailRef& r : a_rails_) {
    sim_.schedule(r.rail1, sp, t2);
    sim_.schedule(r.rail0, sp, t2);
  }
  for (const RailRef& r : b_rails_) {
    sim_.schedule(r.rail1, sp, t2);
    sim_.schedule(r.rail0, sp, t2);
  }
  sim_.run();
  expect_outputs(DecodeResult::Kind::AllSpacer, "spacer");
  if (sim_.value(ack_out_) != done_spacer_level(proto)) {
    throw DeadlockError("completion detector never signalled spacer receipt");
  }
  res.timing.reverse_latency = max_out_change(t2) - t2;
  res.timing.cycle_time =
      res.timing.forward_latency + res.timing.reverse_latency;

  // Ack returns to idle; the stage may accept the next word.
  double t3 = sim_.now() + 1.0;
  mark(MarkerKind::SpacerAcked, t3);
  sim_.schedule(ack_in_, ack_idle_level(proto), t3);
  sim_.run();

  return res;
}

FragmentHarness::FragmentHarness(const Netlist& frag, const CellLibrary& lib)
    : nl_(frag), sim_(nl_, lib) {
  trace_.protocol = frag.protocol;
  if (frag.ack_in) trace_.control_nets = {frag.ack_in->net};
  reset();
}

void FragmentHarness::reset() {
  sim_.init_spacer();
  trace_.reset(nl_.num_nets);
  trace_.protocol = nl_.protocol;
  sim_.attach_trace(&trace_);
  sim_.settle();
  for (NetId n = 0; n < nl_.num_nets; ++n) trace_.initial[n] = sim_.value(n);
}

double FragmentHarness::next_time() const { return sim_.now() + 1.0; }

const DualRailPort& FragmentHarness::port_ref(std::string_view name,
                                              bool input) const {
  const DualRailPort* p =
      input ? nl_.find_in_port(name) : nl_.find_out_port(name);
  if (!p) {
    throw InputError("fragment has no " +
                     std::string(input ? "input" : "output") + " port '" +
                     std::string(name) + "'");
  }
  return *p;
}

void FragmentHarness::apply_data(std::string_view port, bool bit, double at) {
  const DualRailPort& p = port_ref(port, true);
  RailPair enc = encode_bit(bit, nl_.protocol);
  sim_.schedule(p.rail1, enc.rail1, at);
  sim_.schedule(p.rail0, enc.rail0, at);
}

void FragmentHarness::apply_spacer(std::string_view port, double at) {
  const DualRailPort& p = port_ref(port, true);
  bool sp = spacer_level(nl_.protocol);
  sim_.schedule(p.rail1, sp, at);
  sim_.schedule(p.rail0, sp, at);
}

void FragmentHarness::set_ack(bool value, double at) {
  if (!nl_.ack_in) throw InputError("fragment has no ack input");
  sim_.schedule(nl_.ack_in->net, value, at);
}

void FragmentHarness::mark(MarkerKind kind, double at) {
  trace_.markers.push_back({kind, at});
}

PairState FragmentHarness::in_state(std::string_view port) const {
  const DualRailPort& p = port_ref(port, true);
  return classify_pair({sim_.value(p.rail1), sim_.value(p.rail0)},
                       nl_.protocol);
}

PairState FragmentHarness::out_state(std::string_view port) const {
  const DualRailPort& p = port_ref(port, false);
  return classify_pair({sim_.value(p.rail1), sim_.value(p.rail0)},
                       nl_.protocol);
}

RailPair FragmentHarness::out_pair(std::string_view port) const {
  const DualRailPort& p = port_ref(port, false);
  return {sim_.value(p.rail1), sim_.value(p.rail0)};
}

DecodeResult FragmentHarness::decode_outputs() const {
  std::vector<RailPair> bus;
  bus.reserve(nl_.out_ports.size());
  for (const auto& p : nl_.out_ports) {
    bus.push_back({sim_.value(p.rail1), sim_.value(p.rail0)});
  }
  return decode_bus(bus, nl_.protocol);
}

bool FragmentHarness::ack_out_value() const {
  if (!nl_.ack_out) throw InputError("fragment has no ack output");
  return sim_.value(nl_.ack_out->net);
}

double FragmentHarness::last_output_change() const {
  double t = 0.0;
  for (const auto& p : nl_.out_ports) {
    t = std::max({t, sim_.last_change(p.rail1), sim_.last_change(p.rail0)});
  }
  if (nl_.ack_out) t = std::max(t, sim_.last_change(nl_.ack_out->net));
  return t;
}

TransactionResult simulate_transaction(const Netlist& stage, uint64_t a,
                                       uint64_t b, const CellLibrary& lib,
                                       Trace* trace) {
  StageHarness h(stage, lib);
  if (trace) h.enable_trace(true);
  TransactionResult res = h.transact(a, b);
  if (trace) *trace = h.trace();
  return res;
}

SequenceStats run_sequence(const Netlist& stage,
                           std::span<const std::pair<uint64_t, uint64_t>> vectors,
                           const CellLibrary& lib, const AddOracle& oracle,
                           const TransactionCallback& per_txn) {
  if (vectors.empty()) throw InputError("run_sequence: no vectors");
  StageHarness h(stage, lib);
  if (per_txn) h.enable_trace(true);

  SequenceStats stats;
  double sum_fwd = 0.0, sum_rev = 0.0;
  for (size_t i = 0; i < vectors.size(); ++i) {
    auto [a, b] = vectors[i];
    TransactionResult r;
    if (per_txn) h.clear_trace();
    try {
      r = h.transact(a, b);
    } catch (const DeadlockError& e) {
      throw DeadlockError("vector " + std::to_string(i) + ": " + e.what());
    } catch (const ProtocolError& e) {
      throw ProtocolError("vector " + std::to_string(i) + ": " + e.what());
    }
    stats.transactions++;
    sum_fwd += r.timing.forward_latency;
    sum_rev += r.timing.reverse_latency;
    stats.max_forward = std::max(stats.max_forward, r.timing.forward_latency);
    stats.max_reverse = std::max(stats.max_reverse, r.timing.reverse_latency);
    if (oracle && r.value != oracle(a, b)) {
      stats.mismatches++;
      stats.mismatch_indices.push_back(i);
    }
    if (per_txn) per_txn(i, h.trace(), r);
  }
  stats.mean_forward = sum_fwd / static_cast<double>(stats.transactions);
  stats.mean_reverse = sum_rev / static_cast<double>(stats.transactions);
  stats.cell_transitions = h.cell_transitions();
  return stats;
}

std::vector<std::pair<uint64_t, uint64_t>> random_vectors(int width, size_t n,
                                                          uint64_t seed) {
  std::mt19937_64 rng(seed);
  uint64_t mask = width >= 64 ? ~uint64_t{0} : ((uint64_t{1} << width) - 1);
  std::vector<std::pair<uint64_t, uint64_t>> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    uint64_t a = rng() & mask;
    uint64_t b = rng() & mask;
    out.emplace_back(a, b);
  }
  return out;
}

}  // namespace qdi
