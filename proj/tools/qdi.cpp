// Command-line front end: generate, transform, simulate, check, and
// benchmark dual-rail QDI adder netlists.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qdi/addergen.hpp"
#include "qdi/bench.hpp"
#include "qdi/check.hpp"
#include "qdi/dualize.hpp"
#include "qdi/vcd.hpp"

using namespace qdi;

namespace {

CellLibrary load_library(const std::string& path) {
  if (path.empty()) return CellLibrary::defaults();
  return CellLibrary::from_file(path);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

int meta_int(const Netlist& nl, const std::string& key, int fallback = -1) {
  auto it = nl.metadata.find(key);
  if (it == nl.metadata.end()) {
    if (fallback >= 0) return fallback;
    throw InputError("netlist metadata lacks '" + key +
                     "'; was it produced by `qdi gen`?");
  }
  return std::stoi(it->second);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual-rail QDI asynchronous adder toolkit"};
  app.require_subcommand(1);

  std::string protocol = "RTZ";
  std::string in_file, out_file, trace_file, library_file;
  int width = 32;
  int approx = 0;
  size_t vectors = 1000;
  uint64_t seed = 1;
  bool stage = false;
  bool exhaustive = false;

  auto* gen = app.add_subcommand("gen", "emit an adder netlist");
  gen->add_option("--width", width, "operand width in bits");
  gen->add_option("--approx", approx, "approximated least significant bits");
  gen->add_option("--protocol", protocol, "RTZ or RTO");
  gen->add_flag("--stage", stage,
                "wrap the adder with registers and a completion detector");
  gen->add_option("--out", out_file, "output netlist file")->required();

  auto* dual = app.add_subcommand("dualize", "swap a netlist to the other protocol");
  dual->add_option("input", in_file, "netlist file")->required();
  dual->add_option("--out", out_file, "output netlist file")->required();

  auto* sim = app.add_subcommand("sim", "simulate handshake transactions");
  sim->add_option("input", in_file, "stage netlist file")->required();
  sim->add_option("--vectors", vectors, "number of random operand pairs");
  sim->add_option("--seed", seed, "vector generator seed");
  sim->add_option("--trace", trace_file, "write a VCD trace of the last vector");
  sim->add_option("--library", library_file, "cell library JSON");

  auto* check = app.add_subcommand("check", "run the QDI property checkers");
  check->add_option("input", in_file, "stage netlist file")->required();
  check->add_option("--vectors", vectors, "number of random operand pairs");
  check->add_option("--seed", seed, "vector generator seed");
  check->add_option("--library", library_file, "cell library JSON");

  auto* errors = app.add_subcommand("errors", "word-level error statistics");
  errors->add_option("--width", width, "operand width in bits");
  errors->add_option("--approx", approx, "approximated least significant bits");
  errors->add_flag("--exhaustive", exhaustive, "sweep every operand pair");
  errors->add_option("--vectors", vectors, "sample count (non-exhaustive)");
  errors->add_option("--seed", seed, "sample seed");

  auto* report = app.add_subcommand("report", "metrics matrix across approximation sizes");
  report->add_option("--width", width, "operand width in bits");
  report->add_option("--vectors", vectors, "random vectors per row");
  report->add_option("--seed", seed, "vector generator seed");
  report->add_option("--library", library_file, "cell library JSON");
  report->add_option("--out", out_file, "CSV output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      AdderConfig cfg{width, approx, protocol_from_name(protocol)};
      Netlist nl = stage ? build_adder_stage(cfg) : build_adder(cfg);
      save_netlist(nl, out_file);
      std::cout << "wrote " << out_file << " (" << nl.cells.size()
                << " cells, " << nl.num_nets << " nets)\n";
      return 0;
    }

    if (*dual) {
      Netlist nl = load_netlist(in_file);
      save_netlist(dualize(nl), out_file);
      std::cout << "wrote " << out_file << "\n";
      return 0;
    }

    if (*sim) {
      CellLibrary lib = load_library(library_file);
      Netlist nl = load_netlist(in_file);
      int w = meta_int(nl, "width");
      int k = meta_int(nl, "approx_bits", 0);
      auto vecs = random_vectors(w, vectors, seed);
      AddOracle oracle = [&](uint64_t a, uint64_t b) {
        return approx_add(a, b, w, k);
      };
      SequenceStats stats = run_sequence(nl, vecs, lib, oracle);
      std::cout << "transactions: " << stats.transactions << "\n"
                << "mismatches vs word-level model: " << stats.mismatches
                << "\n"
                << "forward latency: max " << stats.max_forward << " mean "
                << stats.mean_forward << "\n"
                << "reverse latency: max " << stats.max_reverse << " mean "
                << stats.mean_reverse << "\n"
                << "cycle time (max): "
                << stats.max_forward + stats.max_reverse << "\n";
      if (!trace_file.empty()) {
        Trace trace;
        auto [a, b] = vecs.back();
        simulate_transaction(nl, a, b, lib, &trace);
        write_vcd_file(trace, nl, trace_file);
        std::cout << "trace for (" << a << ", " << b << ") written to "
                  << trace_file << "\n";
      }
      return stats.mismatches == 0 ? 0 : 1;
    }

    if (*check) {
      CellLibrary lib = load_library(library_file);
      Netlist nl = load_netlist(in_file);
      int w = meta_int(nl, "width");
      auto vecs = random_vectors(w, vectors, seed);
      size_t total = 0;
      run_sequence(nl, vecs, lib, nullptr,
                   [&](size_t index, const Trace& trace,
                       const TransactionResult&) {
                     auto v1 = check_legality(trace, nl);
                     auto v2 = check_monotonicity(trace);
                     auto v3 = detect_orphans(trace, nl);
                     total += v1.size() + v2.size() + v3.size();
                     for (const auto* vs : {&v1, &v2, &v3}) {
                       if (!vs->empty()) {
                         std::cout << "vector " << index << ":\n"
                                   << format_violations(*vs);
                       }
                     }
                   });
      std::cout << (total == 0 ? "no violations\n"
                               : std::to_string(total) + " violations\n");
      return total == 0 ? 0 : 1;
    }

    if (*errors) {
      ErrorStats stats = exhaustive
                             ? error_stats_exhaustive(width, approx)
                             : error_stats_sampled(width, approx, seed, vectors);
      std::cout << error_stats_csv_header()
                << error_stats_csv_row(width, approx, stats);
      return 0;
    }

    if (*report) {
      ReportOptions options;
      options.width = width;
      options.vectors = vectors;
      options.seed = seed;
      options.library = load_library(library_file);
      // Keep only the approximation sizes this width admits.
      std::erase_if(options.approx_set,
                    [&](int k) { return k > width - 2; });
      Report r = table_report(options);
      std::cout << report_text(r);
      if (!out_file.empty()) write_text(out_file, report_csv(r));
      return r.clean() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
