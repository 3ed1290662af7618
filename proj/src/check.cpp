#include "qdi/check.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "qdi/vcd.hpp"

namespace qdi {

std::string_view violation_kind_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::IllegalCodeword:
      return "IllegalCodeword";
    case ViolationKind::NonMonotone:
      return "NonMonotone";
    case ViolationKind::OrphanTransition:
      return "OrphanTransition";
    case ViolationKind::NotEarlyReset:
      return "NotEarlyReset";
  }
  return "?";
}

std::string format_violations(std::span<const CheckViolation> violations) {
  std::ostringstream os;
  for (const auto& v : violations) {
    os << violation_kind_name(v.kind) << " " << v.where << " t=" << v.time
       << " phase=" << v.phase;
    if (!v.detail.empty()) os << " " << v.detail;
    os << "\n";
  }
  return os.str();
}

namespace {

// The marker governing time t is the latest one at or before t.
struct PhaseIndex {
  const std::vector<PhaseMarker>& markers;

  // Returns the marker index, or -1 before the first marker.
  int at(double t) const {
    int lo = -1;
    for (size_t i = 0; i < markers.size(); ++i) {
      if (markers[i].time <= t) lo = static_cast<int>(i);
      else break;
    }
    return lo;
  }

  static std::string phase_name(int idx, const std::vector<PhaseMarker>& m) {
    if (idx < 0) return "init";
    switch (m[idx].kind) {
      case MarkerKind::DataApplied:
        return "data";
      case MarkerKind::SpacerApplied:
        return "spacer";
      default:
        return "ack";
    }
  }
};

std::string phase_at(const Trace& trace, double t) {
  PhaseIndex idx{trace.markers};
  return PhaseIndex::phase_name(idx.at(t), trace.markers);
}

}  // namespace

std::vector<CheckViolation> check_legality(const Trace& trace,
                                           const Netlist& nl) {
  if (static_cast<int32_t>(trace.nets.size()) != nl.num_nets) {
    throw CheckError("legality check: trace does not match the netlist");
  }
  std::vector<CheckViolation> out;
  auto scan_port = [&](const DualRailPort& p) {
    struct Ev {
      double t;
      bool rail1;  // which rail changed
      bool v;
    };
    std::vector<Ev> evs;
    for (const Transition& t : trace.nets[p.rail1]) evs.push_back({t.time, true, t.value});
    for (const Transition& t : trace.nets[p.rail0]) evs.push_back({t.time, false, t.value});
    std::stable_sort(evs.begin(), evs.end(),
                     [](const Ev& a, const Ev& b) { return a.t < b.t; });
    RailPair pair{trace.initial[p.rail1] != 0, trace.initial[p.rail0] != 0};
    for (const Ev& e : evs) {
      if (e.rail1) pair.rail1 = e.v;
      else pair.rail0 = e.v;
      if (classify_pair(pair, trace.protocol) == PairState::Illegal) {
        out.push_back({ViolationKind::IllegalCodeword, p.name, e.t,
                       phase_at(trace, e.t),
                       "both rails at the non-spacer level"});
      }
    }
  };
  for (const auto& p : nl.in_ports) scan_port(p);
  for (const auto& p : nl.out_ports) scan_port(p);
  return out;
}

std::vector<CheckViolation> check_monotonicity(const Trace& trace) {
  if (trace.markers.empty()) {
    throw CheckError("monotonicity check: trace has no phase markers");
  }
  std::vector<CheckViolation> out;
  std::unordered_set<NetId> control(trace.control_nets.begin(),
                                    trace.control_nets.end());
  PhaseIndex idx{trace.markers};

  // RTZ: data words arrive as rising edges, the spacer as falling edges;
  // RTO is the mirror image.
  const bool data_rises = trace.protocol == Protocol::Rtz;

  for (NetId n = 0; n < static_cast<NetId>(trace.nets.size()); ++n) {
    if (control.count(n)) continue;
    int last_marker = -2;
    int count_in_phase = 0;
    for (const Transition& t : trace.nets[n]) {
      int m = idx.at(t.time);
      if (m != last_marker) {
        last_marker = m;
        count_in_phase = 0;
      }
      if (m < 0) continue;
      MarkerKind kind = trace.markers[m].kind;
      bool in_data = kind == MarkerKind::DataApplied;
      bool in_spacer = kind == MarkerKind::SpacerApplied;
      if (!in_data && !in_spacer) continue;  // ack gap
      std::string net_name = "net " + std::to_string(n);
      bool legal_direction = in_data ? (t.value == data_rises)
                                     : (t.value != data_rises);
      // One violation per offending transition: a wrong-direction edge is
      // reported as such, a second legal edge as a repeat.
      if (!legal_direction) {
        out.push_back({ViolationKind::NonMonotone, net_name, t.time,
                       in_data ? "data" : "spacer",
                       std::string("illegal ") +
                           (t.value ? "rising" : "falling") +
                           " transition for this phase"});
      } else if (++count_in_phase > 1) {
        out.push_back({ViolationKind::NonMonotone, net_name, t.time,
                       in_data ? "data" : "spacer",
                       "transitions more than once in one phase"});
      }
    }
  }
  return out;
}

std::vector<CheckViolation> detect_orphans(const Trace& trace,
                                           const Netlist& nl) {
  if (!nl.ack_out) {
    throw CheckError(
        "orphan check: netlist has no completion detector output "
        "(ack_out); acknowledgment cannot be anchored");
  }
  if (static_cast<int32_t>(trace.nets.size()) != nl.num_nets) {
    throw CheckError("orphan check: trace does not match the netlist");
  }
  // Need at least one complete transaction's worth of markers.
  bool has_data = false, has_data_ack = false, has_spacer = false,
       has_spacer_ack = false;
  for (const auto& m : trace.markers) {
    switch (m.kind) {
      case MarkerKind::DataApplied:
        has_data = true;
        break;
      case MarkerKind::DataAcked:
        has_data_ack = has_data;
        break;
      case MarkerKind::SpacerApplied:
        has_spacer = true;
        break;
      case MarkerKind::SpacerAcked:
        has_spacer_ack = has_spacer;
        break;
    }
  }
  if (!(has_data && has_data_ack && has_spacer && has_spacer_ack)) {
    throw CheckError(
        "orphan check: trace does not cover a complete transaction");
  }

  std::vector<CheckViolation> out;
  auto names = net_names(nl);

  std::vector<uint8_t> is_port(nl.num_nets, 0);
  for (const auto& p : nl.in_ports) {
    is_port[p.rail1] = 1;
    is_port[p.rail0] = 1;
  }
  for (const auto& p : nl.out_ports) {
    is_port[p.rail1] = 1;
    is_port[p.rail0] = 1;
  }
  if (nl.ack_in) is_port[nl.ack_in->net] = 1;
  is_port[nl.ack_out->net] = 1;

  const NetId done = nl.ack_out->net;

  // Phase windows: [marker, next marker). The acknowledgment anchor is the
  // done toggle inside the window.
  for (size_t mi = 0; mi < trace.markers.size(); ++mi) {
    MarkerKind kind = trace.markers[mi].kind;
    if (kind != MarkerKind::DataApplied && kind != MarkerKind::SpacerApplied)
      continue;
    double begin = trace.markers[mi].time;
    double end = mi + 1 < trace.markers.size()
                     ? trace.markers[mi + 1].time
                     : std::numeric_limits<double>::infinity();
    double t_done = -1.0;
    for (const Transition& t : trace.nets[done]) {
      if (t.time >= begin && t.time < end) {
        t_done = t.time;
        break;
      }
    }
    if (t_done < 0) continue;  // no acknowledgment in this phase
    for (NetId n = 0; n < nl.num_nets; ++n) {
      if (is_port[n]) continue;
      for (const Transition& t : trace.nets[n]) {
        if (t.time > t_done && t.time < end) {
          out.push_back(
              {ViolationKind::OrphanTransition, names[n], t.time,
               kind == MarkerKind::DataApplied ? "data" : "spacer",
               "transition after the completion detector acknowledged"});
        }
      }
    }
  }

  // Settledness at phase ends: every cell output must agree with its
  // inputs when the environment moves on.
  {
    struct Change {
      double time;
      NetId net;
      bool value;
    };
    std::vector<Change> changes;
    for (NetId n = 0; n < nl.num_nets; ++n) {
      for (const Transition& t : trace.nets[n]) changes.push_back({t.time, n, t.value});
    }
    std::stable_sort(changes.begin(), changes.end(),
                     [](const Change& a, const Change& b) {
                       if (a.time != b.time) return a.time < b.time;
                       return a.net < b.net;
                     });
    std::vector<uint8_t> vals(trace.initial);
    size_t ci = 0;
    for (const auto& m : trace.markers) {
      if (m.kind != MarkerKind::DataAcked && m.kind != MarkerKind::SpacerAcked)
        continue;
      while (ci < changes.size() && changes[ci].time <= m.time) {
        vals[changes[ci].net] = changes[ci].value ? 1 : 0;
        ++ci;
      }
      for (const auto& cell : nl.cells) {
        std::array<bool, 6> in{};
        for (size_t p = 0; p < cell.inputs.size(); ++p) {
          in[p] = vals[cell.inputs[p]] != 0;
        }
        bool expect = eval_cell(cell.kind,
                                std::span<const bool>(in.data(), cell.inputs.size()),
                                vals[cell.output] != 0);
        if (expect != (vals[cell.output] != 0)) {
          out.push_back({ViolationKind::OrphanTransition, names[cell.output],
                         m.time,
                         m.kind == MarkerKind::DataAcked ? "data" : "spacer",
                         "unsettled: cell output disagrees with its inputs "
                         "at the phase end"});
        }
      }
    }
  }

  return out;
}

namespace {

constexpr bool ack_idle(Protocol p) { return !spacer_level(p); }
constexpr bool ack_busy(Protocol p) { return spacer_level(p); }

struct ResetProbe {
  const Netlist& nl;
  const CellLibrary& lib;
  std::vector<const DualRailPort*> subset_ports;

  // Returns the names of output ports stuck away from the spacer, or an
  // empty list when the assignment witnesses the reset. nullopt when the
  // assignment cannot settle to data in the first place.
  std::optional<std::vector<std::string>> attempt(
      const std::function<bool(const DualRailPort&)>& bit_of) {
    Simulator sim(nl, lib);
    if (nl.ack_in) sim.set_initial(nl.ack_in->net, ack_idle(nl.protocol));
    sim.settle();

    double t = sim.now() + 1.0;
    for (const auto& p : nl.in_ports) {
      RailPair enc = encode_bit(bit_of(p), nl.protocol);
      sim.schedule(p.rail1, enc.rail1, t);
      sim.schedule(p.rail0, enc.rail0, t);
    }
    try {
      sim.run();
    } catch (const DeadlockError&) {
      return std::nullopt;
    }
    for (const auto& p : nl.out_ports) {
      PairState s = classify_pair({sim.value(p.rail1), sim.value(p.rail0)},
                                  nl.protocol);
      if (!is_data(s)) return std::nullopt;
    }

    if (nl.ack_in) {
      t = sim.now() + 1.0;
      sim.schedule(nl.ack_in->net, ack_busy(nl.protocol), t);
      sim.run();
    }

    t = sim.now() + 1.0;
    bool sp = spacer_level(nl.protocol);
    for (const DualRailPort* p : subset_ports) {
      sim.schedule(p->rail1, sp, t);
      sim.schedule(p->rail0, sp, t);
    }
    std::vector<std::string> stuck;
    try {
      sim.run();
    } catch (const DeadlockError&) {
      stuck.push_back("(simulation deadlock)");
    }
    for (const auto& p : nl.out_ports) {
      PairState s = classify_pair({sim.value(p.rail1), sim.value(p.rail0)},
                                  nl.protocol);
      if (s != PairState::Spacer) stuck.push_back(p.name);
    }
    return stuck;
  }
};

}  // namespace

EarlyResetResult verify_early_reset(const Netlist& nl,
                                    std::span<const std::string> subset,
                                    const CellLibrary& lib) {
  if (subset.empty()) {
    throw InputError("early-reset check: empty input subset");
  }
  ResetProbe probe{nl, lib, {}};
  for (const auto& name : subset) {
    const DualRailPort* p = nl.find_in_port(name);
    if (!p) throw InputError("early-reset check: no input port '" + name + "'");
    probe.subset_ports.push_back(p);
  }
  // Without an ack input the subset must be strict; with one, the ack
  // itself is the input left out.
  if (!nl.ack_in && subset.size() >= nl.in_ports.size()) {
    throw InputError(
        "early-reset check: subset must be a strict subset of the data "
        "inputs");
  }

  EarlyResetResult result;
  std::vector<std::string> last_stuck;
  bool any_settled = false;

  auto try_assignment = [&](const std::function<bool(const DualRailPort&)>& f) {
    auto stuck = probe.attempt(f);
    if (!stuck) return false;  // did not settle
    any_settled = true;
    if (stuck->empty()) return true;  // witness
    last_stuck = *stuck;
    return false;
  };

  bool witnessed = false;
  const size_t m = nl.in_ports.size();
  if (m <= 16 && !nl.ack_in) {
    for (uint32_t bits = 0; bits < (uint32_t{1} << m) && !witnessed; ++bits) {
      witnessed = try_assignment([&](const DualRailPort& p) {
        for (size_t i = 0; i < m; ++i) {
          if (&nl.in_ports[i] == &p) return ((bits >> i) & 1) != 0;
        }
        return false;
      });
    }
  } else {
    // Word-level probes; ports follow the A<i>/B<i> naming convention.
    auto bit_from_words = [&](uint64_t a, uint64_t b) {
      return [&nl, a, b](const DualRailPort& p) {
        char bus = p.name.empty() ? '?' : p.name[0];
        int index = std::atoi(p.name.c_str() + 1);
        uint64_t word = bus == 'B' ? b : a;
        return ((word >> index) & 1) != 0;
      };
    };
    uint64_t mask = ~uint64_t{0};
    if (m / 2 < 64) mask = (uint64_t{1} << (m / 2)) - 1;
    const std::pair<uint64_t, uint64_t> probes[] = {
        {0, 0},
        {mask, mask},
        {mask, 1},
        {0xAAAAAAAAAAAAAAAAull & mask, 0x5555555555555555ull & mask},
    };
    for (const auto& [a, b] : probes) {
      if ((witnessed = try_assignment(bit_from_words(a, b)))) break;
    }
  }

  if (witnessed) {
    result.pass = true;
    return result;
  }
  result.pass = false;
  std::string stuck_desc;
  if (!any_settled) {
    stuck_desc = "no data assignment settles the outputs";
  } else {
    stuck_desc = "outputs held data after the subset went to spacer:";
    for (const auto& s : last_stuck) stuck_desc += " " + s;
  }
  result.violations.push_back({ViolationKind::NotEarlyReset,
                               last_stuck.empty() ? "(outputs)" : last_stuck.front(),
                               0.0, "spacer", stuck_desc});
  return result;
}

}  // namespace qdi
