#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdi/approx.hpp"

using namespace qdi;

namespace {

// Independent bit-serial route: per-bit OR below the cut, an explicit
// ripple loop above it. Kept deliberately different from the word-level
// arithmetic in the implementation.
uint64_t serial_reference(uint64_t a, uint64_t b, int width, int k) {
  uint64_t result = 0;
  for (int i = 0; i < k; ++i) {
    result |= (((a >> i) | (b >> i)) & 1) << i;
  }
  uint64_t carry = k > 0 ? ((a >> (k - 1)) & (b >> (k - 1)) & 1) : 0;
  for (int i = k; i < width; ++i) {
    uint64_t ai = (a >> i) & 1, bi = (b >> i) & 1;
    result |= ((ai ^ bi ^ carry) & 1) << i;
    carry = (ai & bi) | (ai & carry) | (bi & carry);
  }
  result |= carry << width;
  return result;
}

struct RefStats {
  uint64_t total = 0, errors = 0, max_err = 0;
  double rate = 0, mae = 0;
};

RefStats brute_force_stats(int width, int k) {
  RefStats s;
  uint64_t sum = 0;
  for (uint64_t a = 0; a < (uint64_t{1} << width); ++a) {
    for (uint64_t b = 0; b < (uint64_t{1} << width); ++b) {
      uint64_t approx = serial_reference(a, b, width, k);
      uint64_t exact = a + b;
      uint64_t d = approx > exact ? approx - exact : exact - approx;
      s.total++;
      if (d) s.errors++;
      sum += d;
      if (d > s.max_err) s.max_err = d;
    }
  }
  s.rate = double(s.errors) / double(s.total);
  s.mae = double(sum) / double(s.total);
  return s;
}

}  // namespace

TEST_CASE("worked examples at width 8, k=4") {
  CHECK(approx_add(0x08, 0x08, 8, 4) == 0x18);  // exact would be 0x10
  CHECK(approx_add(0x0F, 0x01, 8, 4) == 0x0F);  // exact would be 0x10
  CHECK(approx_add(0, 0, 8, 4) == 0);
  CHECK(approx_add(0, 0, 8, 0) == 0);
}

TEST_CASE("k=0 is exact addition") {
  for (uint64_t a = 0; a < 64; ++a) {
    for (uint64_t b = 0; b < 64; ++b) {
      CHECK(approx_add(a, b, 6, 0) == a + b);
    }
  }
}

TEST_CASE("the scheme is symmetric in its operands") {
  for (int k : {0, 2, 4}) {
    for (uint64_t a = 0; a < 64; ++a) {
      for (uint64_t b = a; b < 64; ++b) {
        CHECK(approx_add(a, b, 6, k) == approx_add(b, a, 6, k));
      }
    }
  }
}

TEST_CASE("result bits below the cut are exactly the operand OR") {
  for (uint64_t a = 0; a < 256; ++a) {
    for (uint64_t b = 0; b < 256; ++b) {
      uint64_t r = approx_add(a, b, 8, 4);
      CHECK((r & 0xF) == ((a | b) & 0xF));
    }
  }
}

TEST_CASE("word-level and bit-serial routes agree everywhere") {
  for (int k : {0, 1, 3, 6}) {
    for (uint64_t a = 0; a < 256; ++a) {
      for (uint64_t b = 0; b < 256; ++b) {
        CHECK(approx_add(a, b, 8, k) == serial_reference(a, b, 8, k));
      }
    }
  }
}

TEST_CASE("out-of-range arguments are rejected") {
  CHECK_THROWS_AS(approx_add(16, 0, 4, 0), InputError);
  CHECK_THROWS_AS(approx_add(0, 0, 4, 5), InputError);
  CHECK_THROWS_AS(approx_add(0, 0, 0, 0), InputError);
}

TEST_CASE("width-4 k=2 exhaustive statistics: frozen and cross-checked") {
  ErrorStats s = error_stats_exhaustive(4, 2);
  CHECK(s.total_cases == 256);
  CHECK(s.error_cases == 112);
  CHECK(s.error_rate == doctest::Approx(0.4375));
  CHECK(s.mean_abs_error == doctest::Approx(0.625));
  CHECK(s.max_abs_error == 2);
  CHECK(s.mode == StatsMode::Exhaustive);

  RefStats ref = brute_force_stats(4, 2);
  CHECK(s.total_cases == ref.total);
  CHECK(s.error_cases == ref.errors);
  CHECK(s.error_rate == doctest::Approx(ref.rate));
  CHECK(s.mean_abs_error == doctest::Approx(ref.mae));
  CHECK(s.max_abs_error == ref.max_err);
}

TEST_CASE("width-8 k=4 exhaustive statistics: frozen values") {
  ErrorStats s = error_stats_exhaustive(8, 4);
  CHECK(s.total_cases == 65536);
  CHECK(s.error_cases == 44800);
  CHECK(s.error_rate == doctest::Approx(0.68359375));
  CHECK(s.mean_abs_error == doctest::Approx(2.875));
  CHECK(s.max_abs_error == 8);
}

TEST_CASE("k=0 has error rate zero at every width") {
  for (int w : {2, 4, 8}) {
    ErrorStats s = error_stats_exhaustive(w, 0);
    CHECK(s.error_cases == 0);
    CHECK(s.error_rate == 0.0);
    CHECK(s.max_abs_error == 0);
  }
}

TEST_CASE("max absolute error is bounded by 2^k") {
  for (int w : {4, 6, 8}) {
    for (int k = 0; k <= w - 2; ++k) {
      ErrorStats s = error_stats_exhaustive(w, k);
      CHECK(s.max_abs_error <= (uint64_t{1} << k));
    }
  }
}

TEST_CASE("a sample covering the whole case space equals the exhaustive sweep") {
  ErrorStats ex = error_stats_exhaustive(8, 4);
  ErrorStats sm = error_stats_sampled(8, 4, 123, 65536);
  CHECK(sm.mode == StatsMode::Sampled);
  CHECK(sm.total_cases == ex.total_cases);
  CHECK(sm.error_cases == ex.error_cases);
  CHECK(sm.error_rate == doctest::Approx(ex.error_rate));
  CHECK(sm.mean_abs_error == doctest::Approx(ex.mean_abs_error));
  CHECK(sm.max_abs_error == ex.max_abs_error);
}

TEST_CASE("sampled statistics are deterministic under a fixed seed") {
  ErrorStats a = error_stats_sampled(32, 8, 99, 5000);
  ErrorStats b = error_stats_sampled(32, 8, 99, 5000);
  CHECK(a.error_cases == b.error_cases);
  CHECK(a.mean_abs_error == b.mean_abs_error);
  CHECK(a.max_abs_error == b.max_abs_error);
}

TEST_CASE("exhaustive mode is capped at width 12") {
  CHECK_THROWS_AS(error_stats_exhaustive(13, 0), InputError);
  CHECK_THROWS_AS(error_stats_sampled(8, 4, 1, 0), InputError);
}

TEST_CASE("CSV row carries the stats fields") {
  ErrorStats s = error_stats_exhaustive(4, 2);
  std::string row = error_stats_csv_row(4, 2, s);
  CHECK(row == "4,2,256,112,0.4375,0.625,2,exhaustive\n");
  CHECK(error_stats_csv_header().find("error_rate") != std::string::npos);
}
