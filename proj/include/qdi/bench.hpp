#ifndef QDI_BENCH_HPP
#define QDI_BENCH_HPP

#include <span>
#include <string>
#include <vector>

#include "qdi/addergen.hpp"
#include "qdi/approx.hpp"
#include "qdi/sim.hpp"

namespace qdi {

struct MetricsRow {
  Protocol protocol = Protocol::Rtz;
  int width = 0;
  int approx_bits = 0;
  double forward_latency = 0.0;  // max over the vector set
  double reverse_latency = 0.0;  // max over the vector set
  double cycle_time = 0.0;
  double area = 0.0;         // whole stage, square micrometers
  double power_proxy = 0.0;  // sum of output transitions weighted by area
  double error_rate = 0.0;
  double mean_forward = 0.0;
  double mean_reverse = 0.0;
  size_t checker_violations = 0;  // legality/monotonicity/orphan findings
};

// Sum of per-cell areas.
double area_of(const Netlist& nl, const CellLibrary& lib);

// Transition counts weighted by cell area, the area standing in for
// switched capacitance. Arbitrary units.
double power_proxy(std::span<const uint64_t> cell_transitions,
                   const Netlist& nl, const CellLibrary& lib);

struct ReportOptions {
  int width = 32;
  std::vector<int> approx_set = {0, 4, 8, 12, 16, 20};
  size_t vectors = 1000;
  uint64_t seed = 1;
  CellLibrary library = CellLibrary::defaults();
  uint64_t error_samples = 65536;  // sampled error stats beyond width 12
  bool run_checkers = true;        // legality/monotonicity/orphan per vector
};

struct Report {
  ReportOptions options;
  std::vector<MetricsRow> rows;
  std::vector<std::string> failures;  // one message per failed row
  size_t checker_violations = 0;

  bool clean() const { return failures.empty() && checker_violations == 0; }
};

// The identical vector set supplied to every configuration: the
// worst-case carry vectors for each approximation size first (so the max
// latency is the critical path), then seeded random operands.
std::vector<std::pair<uint64_t, uint64_t>> report_vectors(
    int width, std::span<const int> approx_set, size_t n, uint64_t seed);

// One row per (protocol, approximation size), RTZ block first. A failing
// row is recorded and the remaining rows still run.
Report table_report(const ReportOptions& options);

// CSV: protocol,width,approx_bits,forward_latency,reverse_latency,
// cycle_time,area,power_proxy,error_rate.
std::string report_csv(const Report& report);

// Terminal table plus the reduction summary against the accurate
// baseline of each protocol and the RTZ-vs-RTO cycle-time deltas.
std::string report_text(const Report& report);

}  // namespace qdi

#endif
