#include "qdi/approx.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace qdi {

uint64_t approx_add(uint64_t a, uint64_t b, int width, int approx_bits) {
  if (width < 1 || width > 62) {
    throw InputError("approx_add: width out of range: " + std::to_string(width));
  }
  if (approx_bits < 0 || approx_bits > width) {
    throw InputError("approx_add: approx_bits out of range: " +
                     std::to_string(approx_bits));
  }
  uint64_t mask = (uint64_t{1} << width) - 1;
  if ((a & ~mask) || (b & ~mask)) {
    throw InputError("approx_add: operand does not fit in " +
                     std::to_string(width) + " bits");
  }
  if (approx_bits == 0) return a + b;
  uint64_t low_mask = (uint64_t{1} << approx_bits) - 1;
  uint64_t low = (a | b) & low_mask;
  uint64_t carry = (a >> (approx_bits - 1)) & (b >> (approx_bits - 1)) & 1;
  uint64_t high = (a >> approx_bits) + (b >> approx_bits) + carry;
  return (high << approx_bits) | low;
}

namespace {

ErrorStats accumulate(int width, int k, auto&& next_case, uint64_t count) {
  ErrorStats s;
  uint64_t sum_abs = 0;
  for (uint64_t i = 0; i < count; ++i) {
    auto [a, b] = next_case(i);
    uint64_t exact = a + b;
    uint64_t approx = approx_add(a, b, width, k);
    uint64_t diff = approx > exact ? approx - exact : exact - approx;
    if (diff != 0) s.error_cases++;
    sum_abs += diff;
    s.max_abs_error = std::max(s.max_abs_error, diff);
  }
  s.total_cases = count;
  s.error_rate = static_cast<double>(s.error_cases) / static_cast<double>(count);
  s.mean_abs_error = static_cast<double>(sum_abs) / static_cast<double>(count);
  return s;
}

}  // namespace

ErrorStats error_stats_exhaustive(int width, int approx_bits) {
  if (width < 1 || width > 12) {
    throw InputError("exhaustive error stats support widths 1..12, got " +
                     std::to_string(width));
  }
  uint64_t side = uint64_t{1} << width;
  ErrorStats s = accumulate(
      width, approx_bits,
      [&](uint64_t i) {
        return std::pair<uint64_t, uint64_t>{i >> width, i & (side - 1)};
      },
      side * side);
  s.mode = StatsMode::Exhaustive;
  return s;
}

ErrorStats error_stats_sampled(int width, int approx_bits, uint64_t seed,
                               uint64_t n) {
  if (width < 1 || width > 62) {
    throw InputError("sampled error stats support widths 1..62");
  }
  if (n == 0) throw InputError("sampled error stats need n >= 1");
  ErrorStats s;
  uint64_t mask = (uint64_t{1} << width) - 1;
  bool full_sweep = width <= 30 && n >= (uint64_t{1} << (2 * width));
  if (full_sweep) {
    // The sample covers every distinct case; enumerate instead of drawing.
    uint64_t side = uint64_t{1} << width;
    s = accumulate(
        width, approx_bits,
        [&](uint64_t i) {
          return std::pair<uint64_t, uint64_t>{i >> width, i & (side - 1)};
        },
        side * side);
  } else {
    std::mt19937_64 rng(seed);
    s = accumulate(
        width, approx_bits,
        [&](uint64_t) {
          uint64_t a = rng() & mask;
          uint64_t b = rng() & mask;
          return std::pair<uint64_t, uint64_t>{a, b};
        },
        n);
  }
  s.mode = StatsMode::Sampled;
  s.seed = seed;
  s.samples = n;
  return s;
}

std::string error_stats_csv_header() {
  return "width,approx_bits,total_cases,error_cases,error_rate,"
         "mean_abs_error,max_abs_error,mode\n";
}

std::string error_stats_csv_row(int width, int approx_bits,
                                const ErrorStats& stats) {
  std::ostringstream os;
  os << width << "," << approx_bits << "," << stats.total_cases << ","
     << stats.error_cases << "," << stats.error_rate << ","
     << stats.mean_abs_error << "," << stats.max_abs_error << ","
     << (stats.mode == StatsMode::Exhaustive ? "exhaustive" : "sampled")
     << "\n";
  return os.str();
}

}  // namespace qdi
