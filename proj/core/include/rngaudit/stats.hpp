#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rngaudit/bitstream.hpp"

namespace rngaudit {

using Rational = boost::multiprecision::cpp_rational;

struct BalanceStats {
  std::uint64_t n = 0;
  std::uint64_t ones = 0;
  double p1 = 0.0;
  double sigma_single = 0.0;  // sqrt(n p1 (1 - p1)) / n

  friend bool operator==(const BalanceStats&, const BalanceStats&) = default;
};

BalanceStats balance(BitView bits);

// Standard deviation of the fraction of ones in n fair tosses, 1 / (2 sqrt n).
double fair_sigma_single(std::uint64_t n);

struct BlockBalance {
  std::uint64_t block_size = 0;
  std::vector<double> p1;
  double predicted_sigma = 0.0;  // fair_sigma_single(block_size), not fitted

  double mean() const;
  double sample_stddev() const;
};

BlockBalance block_balance(BitView bits, std::size_t block_size);

enum class TupleMode {
  overlapping,  // pairs (i, i+1), i < n - 1
  disjoint,     // pairs (2i, 2i+1), i < n / 2
  cyclic,       // overlapping plus the wrap-around pair (n-1, 0); n pairs
};

std::string_view to_string(TupleMode mode);

struct TupleCounts {
  TupleMode mode = TupleMode::overlapping;
  std::uint64_t c00 = 0, c01 = 0, c10 = 0, c11 = 0;

  std::uint64_t total() const noexcept { return c00 + c01 + c10 + c11; }
  // Pairs whose first bit is y.
  std::uint64_t row(int y) const noexcept { return y ? c10 + c11 : c00 + c01; }
  std::uint64_t at(int y, int x) const noexcept { return y ? (x ? c11 : c10) : (x ? c01 : c00); }

  friend bool operator==(const TupleCounts&, const TupleCounts&) = default;
};

TupleCounts tuple_counts(BitView bits, TupleMode mode);

struct ConditionalProbs {
  std::uint64_t n = 0;
  double p_0_given_0 = 0.0, p_1_given_0 = 0.0;
  double p_0_given_1 = 0.0, p_1_given_1 = 0.0;
  double sigma_cond = 0.0;  // 1 / sqrt(2 n)

  friend bool operator==(const ConditionalProbs&, const ConditionalProbs&) = default;
};

ConditionalProbs conditional_probs(BitView bits);
double fair_sigma_cond(std::uint64_t n);

// Biased (1/n) sample autocorrelation of the +-1 mapped sequence, lags
// 0..max_lag. No mean is subtracted, so lag 0 is exactly 1.
std::vector<double> autocorrelation(BitView bits, std::size_t max_lag);

// Bit pattern of length 1..64, stored right-aligned: pattern bit j is
// (bits >> (length - 1 - j)) & 1.
class Pattern {
 public:
  Pattern(std::uint64_t bits, unsigned length);
  static Pattern parse(std::string_view text);

  unsigned length() const noexcept { return length_; }
  std::uint64_t bits() const noexcept { return bits_; }
  bool operator[](unsigned j) const noexcept { return (bits_ >> (length_ - 1 - j)) & 1u; }
  std::string str() const;

  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  std::uint64_t bits_;
  unsigned length_;
};

// Expected number of fair tosses until the pattern first appears: the sum of
// 2^j over every length j at which a prefix of the pattern equals its suffix.
Rational waiting_time_theoretical(const Pattern& pattern);

struct WaitingMoments {
  Rational mean;
  Rational variance;
};

// Mean and variance of the first-occurrence time in fair tosses, read off the
// probability generating function built from the pattern's correlation
// polynomial.
WaitingMoments waiting_time_moments(const Pattern& pattern);

struct WaitingTimeEmpirical {
  std::uint64_t occurrences = 0;     // matches found by the renewal scan
  std::uint64_t first_match = 0;     // start position of the first match
  double mean_distance = 0.0;        // mean gap between successive match starts
  std::uint64_t distance_count = 0;  // occurrences - 1

  friend bool operator==(const WaitingTimeEmpirical&, const WaitingTimeEmpirical&) = default;
};

// Non-overlapping scan: after a match, matching restarts at the bit after it.
WaitingTimeEmpirical waiting_times_empirical(BitView bits, const Pattern& pattern);

struct BorelResult {
  unsigned m = 0;
  std::uint64_t blocks = 0;
  std::vector<std::uint64_t> counts;  // indexed by word value, first bit most significant
  std::vector<double> frequencies;
  double max_deviation = 0.0;         // max |freq - 2^-m|
  double threshold = 0.0;             // sqrt(log2(n) / n), informational

  friend bool operator==(const BorelResult&, const BorelResult&) = default;
};

BorelResult borel_block_frequencies(BitView bits, unsigned m);

}  // namespace rngaudit
