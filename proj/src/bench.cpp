#include "qdi/bench.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "qdi/check.hpp"

namespace qdi {

double area_of(const Netlist& nl, const CellLibrary& lib) {
  double total = 0.0;
  for (const auto& cell : nl.cells) total += lib.area(cell.kind);
  return total;
}

double power_proxy(std::span<const uint64_t> cell_transitions,
                   const Netlist& nl, const CellLibrary& lib) {
  if (cell_transitions.size() != nl.cells.size()) {
    throw InputError("power_proxy: activity vector does not match netlist");
  }
  double total = 0.0;
  for (size_t i = 0; i < nl.cells.size(); ++i) {
    total += static_cast<double>(cell_transitions[i]) * lib.area(nl.cells[i].kind);
  }
  return total;
}

std::vector<std::pair<uint64_t, uint64_t>> report_vectors(
    int width, std::span<const int> approx_set, size_t n, uint64_t seed) {
  uint64_t mask = (uint64_t{1} << width) - 1;
  std::vector<std::pair<uint64_t, uint64_t>> vectors;
  // Full-ripple operands: a carry born at the bottom of each accurate
  // section propagates through every full adder above it.
  vectors.emplace_back(mask, uint64_t{1});
  for (int k : approx_set) {
    if (k > 0 && k - 1 < width) {
      vectors.emplace_back(mask, uint64_t{1} << (k - 1));
    }
  }
  std::sort(vectors.begin(), vectors.end());
  vectors.erase(std::unique(vectors.begin(), vectors.end()), vectors.end());
  auto rnd = random_vectors(width, n, seed);
  vectors.insert(vectors.end(), rnd.begin(), rnd.end());
  return vectors;
}

Report table_report(const ReportOptions& options) {
  Report report;
  report.options = options;
  auto vectors = report_vectors(options.width, options.approx_set,
                                options.vectors, options.seed);

  for (Protocol proto : {Protocol::Rtz, Protocol::Rto}) {
    for (int k : options.approx_set) {
      AdderConfig cfg{options.width, k, proto};
      try {
        check_config(cfg);
        Netlist stage = build_adder_stage(cfg);
        AddOracle oracle = [&](uint64_t a, uint64_t b) {
          return approx_add(a, b, cfg.width, cfg.approx_bits);
        };
        size_t violations = 0;
        TransactionCallback per_txn;
        if (options.run_checkers) {
          per_txn = [&](size_t, const Trace& trace, const TransactionResult&) {
            violations += check_legality(trace, stage).size();
            violations += check_monotonicity(trace).size();
            violations += detect_orphans(trace, stage).size();
          };
        }
        SequenceStats stats =
            run_sequence(stage, vectors, options.library, oracle, per_txn);
        if (stats.mismatches != 0) {
          throw Error("gate-level result disagrees with the word-level "
                      "model on " +
                      std::to_string(stats.mismatches) + " vectors");
        }
        MetricsRow row;
        row.checker_violations = violations;
        report.checker_violations += violations;
        row.protocol = proto;
        row.width = cfg.width;
        row.approx_bits = k;
        row.forward_latency = stats.max_forward;
        row.reverse_latency = stats.max_reverse;
        row.cycle_time = stats.max_forward + stats.max_reverse;
        row.area = area_of(stage, options.library);
        row.power_proxy =
            power_proxy(stats.cell_transitions, stage, options.library);
        row.mean_forward = stats.mean_forward;
        row.mean_reverse = stats.mean_reverse;
        ErrorStats es =
            cfg.width <= 12
                ? error_stats_exhaustive(cfg.width, k)
                : error_stats_sampled(cfg.width, k, options.seed,
                                      options.error_samples);
        row.error_rate = es.error_rate;
        report.rows.push_back(row);
      } catch (const std::exception& e) {
        report.failures.push_back(std::string(protocol_name(proto)) +
                                  " approx=" + std::to_string(k) + ": " +
                                  e.what());
      }
    }
  }
  return report;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

std::string report_csv(const Report& report) {
  std::ostringstream os;
  os << "protocol,width,approx_bits,forward_latency,reverse_latency,"
        "cycle_time,area,power_proxy,error_rate\n";
  for (const auto& r : report.rows) {
    os << protocol_name(r.protocol) << "," << r.width << "," << r.approx_bits
       << "," << fmt(r.forward_latency) << "," << fmt(r.reverse_latency)
       << "," << fmt(r.cycle_time) << "," << fmt(r.area) << ","
       << fmt(r.power_proxy) << "," << fmt(r.error_rate) << "\n";
  }
  return os.str();
}

std::string report_text(const Report& report) {
  std::ostringstream os;
  os << std::left << std::setw(6) << "proto" << std::setw(7) << "width"
     << std::setw(8) << "approx" << std::setw(10) << "fwd" << std::setw(10)
     << "rev" << std::setw(10) << "cycle" << std::setw(12) << "area"
     << std::setw(14) << "power_proxy" << std::setw(12) << "error_rate"
     << std::setw(10) << "mean_fwd" << std::setw(10) << "mean_rev"
     << "\n";
  for (const auto& r : report.rows) {
    os << std::left << std::setw(6) << protocol_name(r.protocol)
       << std::setw(7) << r.width << std::setw(8) << r.approx_bits
       << std::setw(10) << r.forward_latency << std::setw(10)
       << r.reverse_latency << std::setw(10) << r.cycle_time << std::setw(12)
       << r.area << std::setw(14) << r.power_proxy << std::setw(12)
       << r.error_rate << std::setw(10) << r.mean_forward << std::setw(10)
       << r.mean_reverse << "\n";
  }
  if (report.checker_violations > 0) {
    os << "CHECKER VIOLATIONS: " << report.checker_violations << "\n";
  }

  // Mean reductions of the approximate rows against the accurate baseline
  // of the same protocol.
  for (Protocol proto : {Protocol::Rtz, Protocol::Rto}) {
    const MetricsRow* base = nullptr;
    for (const auto& r : report.rows) {
      if (r.protocol == proto && r.approx_bits == 0) base = &r;
    }
    if (!base) continue;
    double cycle_red = 0.0, area_red = 0.0, power_red = 0.0;
    int count = 0;
    for (const auto& r : report.rows) {
      if (r.protocol != proto || r.approx_bits == 0) continue;
      cycle_red += (base->cycle_time - r.cycle_time) / base->cycle_time;
      area_red += (base->area - r.area) / base->area;
      power_red += (base->power_proxy - r.power_proxy) / base->power_proxy;
      ++count;
    }
    if (count > 0) {
      os << protocol_name(proto) << ": approximate rows average "
         << fmt(100.0 * cycle_red / count) << "% cycle-time, "
         << fmt(100.0 * area_red / count) << "% area, "
         << fmt(100.0 * power_red / count)
         << "% power-proxy reduction vs accurate\n";
    }
  }

  // Row-matched RTZ-vs-RTO cycle time delta.
  {
    double delta = 0.0;
    int count = 0;
    for (const auto& rtz : report.rows) {
      if (rtz.protocol != Protocol::Rtz) continue;
      for (const auto& rto : report.rows) {
        if (rto.protocol == Protocol::Rto &&
            rto.approx_bits == rtz.approx_bits && rto.width == rtz.width) {
          delta += (rtz.cycle_time - rto.cycle_time) / rtz.cycle_time;
          ++count;
        }
      }
    }
    if (count > 0) {
      os << "RTO vs RTZ: average further cycle-time reduction "
         << fmt(100.0 * delta / count) << "%\n";
    }
  }

  for (const auto& f : report.failures) os << "FAILED ROW: " << f << "\n";
  return os.str();
}

}  // namespace qdi
