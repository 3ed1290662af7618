#ifndef QDI_APPROX_HPP
#define QDI_APPROX_HPP

#include <cstdint>
#include <string>

#include "qdi/errors.hpp"

namespace qdi {

// Word-level model of the lower-part-OR adder: result bits below
// `approx_bits` are the bitwise OR of the operands, the carry into the
// accurate upper section is the AND of the operand bits at position
// approx_bits-1 (zero when approx_bits == 0), and the upper section adds
// exactly. The result carries width+1 bits. approx_bits == 0 is exact
// addition.
uint64_t approx_add(uint64_t a, uint64_t b, int width, int approx_bits);

enum class StatsMode : uint8_t { Exhaustive, Sampled };

struct ErrorStats {
  uint64_t total_cases = 0;
  uint64_t error_cases = 0;
  double error_rate = 0.0;
  double mean_abs_error = 0.0;
  uint64_t max_abs_error = 0;
  StatsMode mode = StatsMode::Exhaustive;
  uint64_t seed = 0;     // sampled mode only
  uint64_t samples = 0;  // sampled mode only
};

// Sweeps all 2^(2*width) operand pairs; width is capped at 12.
ErrorStats error_stats_exhaustive(int width, int approx_bits);

// Draws n seeded operand pairs. When n covers the whole case space the
// sweep is exhaustive over distinct cases (and matches exhaustive mode).
ErrorStats error_stats_sampled(int width, int approx_bits, uint64_t seed,
                               uint64_t n);

std::string error_stats_csv_header();
std::string error_stats_csv_row(int width, int approx_bits,
                                const ErrorStats& stats);

}  // namespace qdi

#endif
