#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rngaudit/bitstream.hpp"

namespace rngaudit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Which runs are forbidden: k consecutive ones only, or k consecutive equal
// symbols of either kind.
enum class RunMode { ones_only, either_symbol };

std::string_view to_string(RunMode mode);
RunMode parse_run_mode(std::string_view name);

// Number of length-n binary strings with no forbidden run of length k.
BigInt count_no_run(std::uint64_t n, unsigned k, RunMode mode = RunMode::ones_only);

// count_no_run(n, k) / 2^n.
Rational p_no_run(std::uint64_t n, unsigned k, RunMode mode = RunMode::ones_only);
double p_no_run_value(std::uint64_t n, unsigned k, RunMode mode = RunMode::ones_only);

// Feller's coin-tossing constants: p(n, k) * alpha^(n+1) -> beta.
struct FellerConstants {
  unsigned k = 0;
  RunMode mode = RunMode::ones_only;
  double alpha = 0.0;
  double beta = 0.0;
  // Dominant root r of x^m = x^(m-1) + ... + 1 (m = k for ones_only,
  // k - 1 for either_symbol); alpha = 2 / r.
  double root = 0.0;
};

// Valid for 2 <= k <= 64.
FellerConstants alpha_ideal(unsigned k, RunMode mode = RunMode::ones_only);

// p(n, k) alpha^(n+1) - beta for each n, evaluated with the exact DP count
// and 50-digit arithmetic.
std::vector<double> verify_asymptotics(unsigned k, std::span<const std::uint64_t> ns,
                                       RunMode mode = RunMode::ones_only);

struct NoRunScan {
  std::uint64_t window = 0;
  std::uint64_t windows = 0;               // sliding windows scanned
  unsigned k_min = 0;
  std::vector<std::uint64_t> no_run;       // index k - k_min
};

// Counts, for every start offset, whether the window of length `window`
// contains no forbidden run, for each k in [k_min, k_max]. Linear time; may
// split the offsets over `threads` workers, results are identical.
NoRunScan scan_no_run_windows(BitView bits, std::uint64_t window, unsigned k_min, unsigned k_max,
                              RunMode mode = RunMode::ones_only, unsigned threads = 1);

struct FellerRow {
  unsigned k = 0;
  double alpha_ideal = 0.0;
  std::optional<double> alpha_extracted;  // absent: no qualifying window observed
  std::optional<double> relative_change;  // (ideal - extracted) / ideal
  std::uint64_t windows_scanned = 0;
  std::uint64_t no_run_windows = 0;
  // Propagated standard error of relative_change, using stream_length / n
  // effectively independent windows.
  std::optional<double> relative_std_error;

  bool measurable() const noexcept { return alpha_extracted.has_value(); }

  friend bool operator==(const FellerRow&, const FellerRow&) = default;
};

FellerRow make_feller_row(const FellerConstants& ideal, std::uint64_t window, std::uint64_t stream_length,
                          std::uint64_t windows, std::uint64_t no_run);

FellerRow alpha_extracted(BitView bits, std::uint64_t window, unsigned k,
                          RunMode mode = RunMode::ones_only);

struct FellerTableConfig {
  std::uint64_t window = 400;
  unsigned k_min = 2;
  unsigned k_max = 15;
  RunMode mode = RunMode::ones_only;
  unsigned threads = 1;

  friend bool operator==(const FellerTableConfig&, const FellerTableConfig&) = default;
};

std::vector<FellerRow> feller_table(BitView bits, const FellerTableConfig& cfg = {});

}  // namespace rngaudit
