#ifndef QDI_SIM_HPP
#define QDI_SIM_HPP

#include <cstdint>
#include <functional>
#include <queue>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qdi/netlist.hpp"

namespace qdi {

struct Event {
  double time = 0.0;
  NetId net = 0;
  uint64_t seq = 0;  // insertion order, final tie-break
  bool value = false;
};

struct Transition {
  double time = 0.0;
  bool value = false;
};

enum class MarkerKind : uint8_t {
  DataApplied,
  DataAcked,
  SpacerApplied,
  SpacerAcked,
};

struct PhaseMarker {
  MarkerKind kind;
  double time;
};

// Time-ordered transition log plus the handshake phase markers the
// checkers key off. Consecutive transitions of one net always alternate.
struct Trace {
  Protocol protocol = Protocol::Rtz;
  std::vector<std::vector<Transition>> nets;
  std::vector<PhaseMarker> markers;
  std::vector<uint8_t> initial;       // net values when the trace began
  std::vector<NetId> control_nets;    // environment-driven ack nets

  void reset(size_t num_nets) {
    nets.assign(num_nets, {});
    markers.clear();
    initial.assign(num_nets, 0);
  }
};

struct TransactionTiming {
  double forward_latency = 0.0;
  double reverse_latency = 0.0;
  double cycle_time = 0.0;
};

struct TransactionResult {
  uint64_t value = 0;  // decoded {COUT, SUM}, carry-out in the top bit
  TransactionTiming timing;
};

// Event-driven two-valued gate-level simulator over an immutable netlist.
// Events fire in nondecreasing time order; ties resolve by net id, then by
// insertion order. Transport delay: every scheduled edge fires.
class Simulator {
 public:
  Simulator(const Netlist& nl, const CellLibrary& lib);

  // Forces the settled spacer state: every net at the spacer level and
  // C-element state to match. Clears the event queue and the clock.
  void init_spacer();

  // Overrides one net's resting value (used for ack polarity) before
  // settle(); no event is generated.
  void set_initial(NetId net, bool value);

  // Evaluates every cell against the current net values and schedules any
  // disagreement, then drains the queue. A consistently initialized
  // netlist produces no events here.
  void settle();

  // Schedules an environment-driven edge. No-op if the net is already
  // headed to `value`.
  void schedule(NetId net, bool value, double time);

  // Drains the event queue. Throws DeadlockError when the per-call event
  // budget is exhausted.
  void run();

  bool value(NetId net) const { return values_[net] != 0; }
  double now() const { return now_; }
  double last_change(NetId net) const { return last_change_[net]; }

  void attach_trace(Trace* t) { trace_ = t; }
  void attach_activity(std::vector<uint64_t>* per_cell) { activity_ = per_cell; }
  void set_event_budget(size_t budget) { budget_ = budget; }

  const Netlist& netlist() const { return nl_; }
  size_t events_processed() const { return processed_; }

 private:
  void apply(const Event& ev);
  void evaluate_cell(size_t cell_index, double at);

  const Netlist& nl_;
  std::vector<CellKind> kind_;
  std::vector<NetId> out_net_;
  std::vector<double> delay_;
  std::vector<int32_t> input_offset_;
  std::vector<NetId> input_net_;
  std::vector<int32_t> fanout_offset_;
  std::vector<int32_t> fanout_cell_;
  std::vector<CellId> driver_;

  std::vector<uint8_t> values_;
  std::vector<uint8_t> pending_;
  std::vector<double> last_change_;

  struct EventOrder {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.net != b.net) return a.net > b.net;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<Event, std::vector<Event>, EventOrder> queue_;
  uint64_t seq_ = 0;
  double now_ = 0.0;
  size_t budget_ = 1'000'000;
  size_t processed_ = 0;

  Trace* trace_ = nullptr;
  std::vector<uint64_t>* activity_ = nullptr;
};

// Behavioral 4-phase environment around a stage netlist: a sender encoding
// operands onto the register inputs and a receiver deriving the ack from
// the completion detector. One transact() call runs data application,
// acknowledgment, spacer application, and the return-to-idle ack.
class StageHarness {
 public:
  StageHarness(const Netlist& stage, const CellLibrary& lib);

  int width() const { return width_; }

  // When enabled, transact() appends to the trace, so several
  // transactions can accumulate; clear_trace() starts a fresh recording
  // from the current state.
  void enable_trace(bool on);
  void clear_trace();
  const Trace& trace() const { return trace_; }

  TransactionResult transact(uint64_t a, uint64_t b);

  const std::vector<uint64_t>& cell_transitions() const { return activity_; }
  void reset_activity();

  void set_event_budget(size_t budget) { sim_.set_event_budget(budget); }

  Simulator& sim() { return sim_; }

 private:
  void apply_word(const std::vector<RailRef>& rails, uint64_t value,
                  double at);

  const Netlist nl_;  // owned copy; the harness outlives any argument
  Simulator sim_;
  int width_ = 0;
  std::vector<RailRef> a_rails_, b_rails_, out_rails_;
  NetId ack_in_ = 0;
  NetId ack_out_ = 0;
  bool trace_on_ = false;
  Trace trace_;
  std::vector<uint64_t> activity_;
};

// Direct driver for bare fragments (no registers or ack sequencing):
// tests apply codewords at explicit times and inspect port states.
class FragmentHarness {
 public:
  FragmentHarness(const Netlist& frag, const CellLibrary& lib);

  // Spacer-settled state and a fresh trace.
  void reset();

  double next_time() const;

  void apply_data(std::string_view port, bool bit, double at);
  void apply_spacer(std::string_view port, double at);
  void set_ack(bool value, double at);
  void mark(MarkerKind kind, double at);

  void run() { sim_.run(); }

  PairState in_state(std::string_view port) const;
  PairState out_state(std::string_view port) const;
  RailPair out_pair(std::string_view port) const;
  DecodeResult decode_outputs() const;
  bool ack_out_value() const;
  double last_output_change() const;

  const Trace& trace() const { return trace_; }
  Simulator& sim() { return sim_; }
  const Netlist& netlist() const { return nl_; }

 private:
  const DualRailPort& port_ref(std::string_view name, bool input) const;

  const Netlist nl_;  // owned copy
  Simulator sim_;
  Trace trace_;
};

// One full 4-phase transaction against a freshly initialized stage.
TransactionResult simulate_transaction(const Netlist& stage, uint64_t a,
                                       uint64_t b, const CellLibrary& lib,
                                       Trace* trace = nullptr);

struct SequenceStats {
  size_t transactions = 0;
  size_t mismatches = 0;
  std::vector<size_t> mismatch_indices;
  double max_forward = 0.0, max_reverse = 0.0;
  double mean_forward = 0.0, mean_reverse = 0.0;
  std::vector<uint64_t> cell_transitions;  // indexed by cell id
};

using AddOracle = std::function<uint64_t(uint64_t, uint64_t)>;
using TransactionCallback =
    std::function<void(size_t index, const Trace& trace,
                       const TransactionResult& result)>;

// Runs vectors back to back through one harness. Oracle mismatches are
// counted, not fatal; simulation errors rethrow with the vector index.
// The callback, when set, receives each transaction's own trace.
SequenceStats run_sequence(const Netlist& stage,
                           std::span<const std::pair<uint64_t, uint64_t>> vectors,
                           const CellLibrary& lib, const AddOracle& oracle,
                           const TransactionCallback& per_txn = nullptr);

// Deterministic operand stream for a given seed.
std::vector<std::pair<uint64_t, uint64_t>> random_vectors(int width, size_t n,
                                                          uint64_t seed);

}  // namespace qdi

#endif
