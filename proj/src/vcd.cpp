#include "qdi/vcd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

namespace qdi {

std::vector<std::string> net_names(const Netlist& nl) {
  std::vector<std::string> names(nl.num_nets);
  for (NetId n = 0; n < nl.num_nets; ++n) names[n] = "n" + std::to_string(n);
  for (const auto& p : nl.in_ports) {
    names[p.rail1] = p.name + "_1";
    names[p.rail0] = p.name + "_0";
  }
  for (const auto& p : nl.out_ports) {
    names[p.rail1] = p.name + "_1";
    names[p.rail0] = p.name + "_0";
  }
  if (nl.ack_in) names[nl.ack_in->net] = nl.ack_in->name;
  if (nl.ack_out) names[nl.ack_out->net] = nl.ack_out->name;
  return names;
}

namespace {

std::string vcd_id(int index) {
  std::string id;
  do {
    id.push_back(static_cast<char>('!' + index % 94));
    index /= 94;
  } while (index > 0);
  return id;
}

}  // namespace

void write_vcd(const Trace& trace, const Netlist& nl, std::ostream& os) {
  auto names = net_names(nl);
  const int n = nl.num_nets;

  os << "$timescale 1ps $end\n";
  os << "$scope module " << (nl.metadata.count("stage") ? "stage" : "circuit")
     << " $end\n";
  for (int i = 0; i < n; ++i) {
    os << "$var wire 1 " << vcd_id(i) << " " << names[i] << " $end\n";
  }
  os << "$upscope $end\n$enddefinitions $end\n";

  os << "$dumpvars\n";
  for (int i = 0; i < n; ++i) {
    bool v = i < static_cast<int>(trace.initial.size()) && trace.initial[i];
    os << (v ? '1' : '0') << vcd_id(i) << "\n";
  }
  os << "$end\n";

  struct Change {
    double time;
    int net;
    bool value;
  };
  std::vector<Change> changes;
  for (int i = 0; i < n && i < static_cast<int>(trace.nets.size()); ++i) {
    for (const Transition& t : trace.nets[i]) changes.push_back({t.time, i, t.value});
  }
  std::stable_sort(changes.begin(), changes.end(),
                   [](const Change& a, const Change& b) {
                     if (a.time != b.time) return a.time < b.time;
                     return a.net < b.net;
                   });

  long long current = -1;
  for (const Change& c : changes) {
    long long tick = std::llround(c.time * 1000.0);
    if (tick != current) {
      os << "#" << tick << "\n";
      current = tick;
    }
    os << (c.value ? '1' : '0') << vcd_id(c.net) << "\n";
  }
}

void write_vcd_file(const Trace& trace, const Netlist& nl,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write trace file: " + path);
  write_vcd(trace, nl, out);
}

}  // namespace qdi
