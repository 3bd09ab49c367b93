#include "rngaudit/stats.hpp"

#include <bit>
#include <cmath>

#include "rngaudit/errors.hpp"

namespace rngaudit {

namespace {

std::uint64_t count_ones(BitView bits) {
  std::uint64_t ones = 0;
  for (std::size_t pos = 0; pos < bits.size(); pos += 64) ones += std::popcount(bits.word_at(pos));
  return ones;
}

// Pairs (i, i+1) for i < bits.size() - 1.
TupleCounts overlapping_counts(BitView bits) {
  TupleCounts tc;
  tc.mode = TupleMode::overlapping;
  const std::size_t pairs = bits.size() - 1;
  std::uint64_t c01 = 0, c10 = 0, c11 = 0;
  for (std::size_t pos = 0; pos < pairs; pos += 64) {
    const std::uint64_t mask = top_bits(pairs - pos);
    const std::uint64_t first = bits.word_at(pos);
    const std::uint64_t second = bits.word_at(pos + 1);
    c11 += std::popcount(first & second & mask);
    c10 += std::popcount(first & ~second & mask);
    c01 += std::popcount(~first & second & mask);
  }
  tc.c01 = c01;
  tc.c10 = c10;
  tc.c11 = c11;
  tc.c00 = pairs - c01 - c10 - c11;
  return tc;
}

TupleCounts disjoint_counts(BitView bits) {
  constexpr std::uint64_t kEven = 0xAAAAAAAAAAAAAAAAULL;  // MSB-first positions 0, 2, 4, ...
  TupleCounts tc;
  tc.mode = TupleMode::disjoint;
  const std::size_t pairs = bits.size() / 2;
  std::uint64_t c01 = 0, c10 = 0, c11 = 0;
  for (std::size_t p = 0; p < pairs; p += 32) {
    const std::uint64_t mask = top_bits(2 * (pairs - p)) & kEven;
    const std::uint64_t w = bits.word_at(2 * p);
    const std::uint64_t first = w & mask;
    const std::uint64_t second = (w << 1) & mask;
    c11 += std::popcount(first & second);
    c10 += std::popcount(first & ~second);
    c01 += std::popcount(~first & second & mask);
  }
  tc.c01 = c01;
  tc.c10 = c10;
  tc.c11 = c11;
  tc.c00 = pairs - c01 - c10 - c11;
  return tc;
}

}  // namespace

double fair_sigma_single(std::uint64_t n) { return 0.5 / std::sqrt(static_cast<double>(n)); }
double fair_sigma_cond(std::uint64_t n) { return 1.0 / std::sqrt(2.0 * static_cast<double>(n)); }

BalanceStats balance(BitView bits) {
  if (bits.empty()) throw ArgumentError("balance of an empty stream");
  BalanceStats out;
  out.n = bits.size();
  out.ones = count_ones(bits);
  const double n = static_cast<double>(out.n);
  out.p1 = static_cast<double>(out.ones) / n;
  out.sigma_single = std::sqrt(n * out.p1 * (1.0 - out.p1)) / n;
  return out;
}

double BlockBalance::mean() const {
  double sum = 0.0;
  for (double v : p1) sum += v;
  return p1.empty() ? 0.0 : sum / static_cast<double>(p1.size());
}

double BlockBalance::sample_stddev() const {
  if (p1.size() < 2) return 0.0;
  const double mean = this->mean();
  double ss = 0.0;
  for (double v : p1) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(p1.size() - 1));
}

BlockBalance block_balance(BitView bits, std::size_t block_size) {
  const auto bs = blocks(bits, block_size);
  if (bs.empty()) throw ArgumentError("block size " + std::to_string(block_size) + " exceeds stream length");
  BlockBalance out;
  out.block_size = block_size;
  out.predicted_sigma = fair_sigma_single(block_size);
  out.p1.reserve(bs.size());
  const double inv = 1.0 / static_cast<double>(block_size);
  for (const auto& b : bs) out.p1.push_back(static_cast<double>(count_ones(b)) * inv);
  return out;
}

std::string_view to_string(TupleMode mode) {
  switch (mode) {
    case TupleMode::overlapping: return "overlapping";
    case TupleMode::disjoint: return "disjoint";
    case TupleMode::cyclic: return "cyclic";
  }
  return "overlapping";
}

TupleCounts tuple_counts(BitView bits, TupleMode mode) {
  if (bits.size() < 2) throw ArgumentError("tuple counts need at least two bits");
  switch (mode) {
    case TupleMode::overlapping: return overlapping_counts(bits);
    case TupleMode::disjoint: return disjoint_counts(bits);
    case TupleMode::cyclic: {
      TupleCounts tc = overlapping_counts(bits);
      tc.mode = TupleMode::cyclic;
      const bool last = bits[bits.size() - 1];
      const bool first = bits[0];
      (last ? (first ? tc.c11 : tc.c10) : (first ? tc.c01 : tc.c00)) += 1;
      return tc;
    }
  }
  throw ArgumentError("unknown tuple mode");
}

namespace {

// p(0|y), p(1|y) from integer counts such that the two sum to exactly 1: the
// larger is a rounded quotient in [1/2, 1], so 1 - larger is exact.
std::pair<double, double> conditional_row(std::uint64_t to0, std::uint64_t to1) {
  const double total = static_cast<double>(to0 + to1);
  if (to0 >= to1) {
    const double p0 = static_cast<double>(to0) / total;
    return {p0, 1.0 - p0};
  }
  const double p1 = static_cast<double>(to1) / total;
  return {1.0 - p1, p1};
}

}  // namespace

ConditionalProbs conditional_probs(BitView bits) {
  if (bits.size() < 2) throw DegenerateError("conditional probabilities need at least two bits");
  const TupleCounts tc = overlapping_counts(bits);
  if (tc.row(0) == 0 || tc.row(1) == 0) {
    throw DegenerateError("a conditioning symbol never occurs; conditional probabilities undefined");
  }
  ConditionalProbs out;
  out.n = bits.size();
  std::tie(out.p_0_given_0, out.p_1_given_0) = conditional_row(tc.c00, tc.c01);
  std::tie(out.p_0_given_1, out.p_1_given_1) = conditional_row(tc.c10, tc.c11);
  out.sigma_cond = fair_sigma_cond(out.n);
  return out;
}

std::vector<double> autocorrelation(BitView bits, std::size_t max_lag) {
  const std::size_t n = bits.size();
  if (max_lag >= n) throw ArgumentError("max_lag must be smaller than the stream length");
  std::vector<double> out(max_lag + 1);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    const std::size_t span = n - lag;
    std::uint64_t disagree = 0;
    for (std::size_t pos = 0; pos < span; pos += 64) {
      const std::uint64_t mask = top_bits(span - pos);
      disagree += std::popcount((bits.word_at(pos) ^ bits.word_at(pos + lag)) & mask);
    }
    const std::int64_t sum = static_cast<std::int64_t>(span) - 2 * static_cast<std::int64_t>(disagree);
    out[lag] = static_cast<double>(sum) * inv_n;
  }
  return out;
}

// --- patterns / waiting times -------------------------------------------------

Pattern::Pattern(std::uint64_t bits, unsigned length) : bits_(bits), length_(length) {
  if (length < 1 || length > 64) throw ArgumentError("pattern length must be in 1..64");
  if (length < 64) bits_ &= (std::uint64_t{1} << length) - 1;
}

Pattern Pattern::parse(std::string_view text) {
  if (text.empty() || text.size() > 64) throw ArgumentError("pattern length must be in 1..64");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') throw FormatError("pattern must be '0'/'1' characters", i);
    bits = (bits << 1) | static_cast<std::uint64_t>(text[i] == '1');
  }
  return Pattern(bits, static_cast<unsigned>(text.size()));
}

std::string Pattern::str() const {
  std::string s(length_, '0');
  for (unsigned j = 0; j < length_; ++j) {
    if ((*this)[j]) s[j] = '1';
  }
  return s;
}

namespace {

// Shifts s in [0, L) at which the pattern overlaps itself.
std::vector<unsigned> self_overlap_shifts(const Pattern& p) {
  std::vector<unsigned> shifts;
  const unsigned L = p.length();
  for (unsigned s = 0; s < L; ++s) {
    bool match = true;
    for (unsigned i = 0; i + s < L && match; ++i) match = p[i] == p[i + s];
    if (match) shifts.push_back(s);
  }
  return shifts;
}

Rational pow2(int e) {
  Rational r = 1;
  if (e >= 0) {
    r = Rational(boost::multiprecision::cpp_int(1) << e);
  } else {
    r = Rational(1, boost::multiprecision::cpp_int(1) << -e);
  }
  return r;
}

}  // namespace

Rational waiting_time_theoretical(const Pattern& pattern) {
  Rational sum = 0;
  for (unsigned s : self_overlap_shifts(pattern)) sum += pow2(static_cast<int>(pattern.length() - s));
  return sum;
}

WaitingMoments waiting_time_moments(const Pattern& pattern) {
  // G(z) = P(z) / D(z), P = (z/2)^L, D = P + (1 - z) C(z/2), with C the
  // correlation polynomial. Expand both around z = 1 + h to second order.
  const unsigned L = pattern.length();
  const Rational base = pow2(-static_cast<int>(L));
  const Rational p0 = base;
  const Rational p1 = base * L;
  const Rational p2 = base * Rational(L) * Rational(L - 1) / 2;
  Rational c0 = 0, c1 = 0;
  for (unsigned s : self_overlap_shifts(pattern)) {
    c0 += pow2(-static_cast<int>(s));
    c1 += pow2(-static_cast<int>(s)) * s;
  }
  const Rational d0 = p0;
  const Rational d1 = p1 - c0;
  const Rational d2 = p2 - c1;
  const Rational g1 = (p1 - d1) / d0;
  const Rational g2 = (p2 - d2 - g1 * d1) / d0;
  return {g1, 2 * g2 + g1 - g1 * g1};
}

WaitingTimeEmpirical waiting_times_empirical(BitView bits, const Pattern& pattern) {
  const unsigned L = pattern.length();
  const std::uint64_t mask = L == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << L) - 1;
  const std::uint64_t target = pattern.bits();
  const std::size_t n = bits.size();

  WaitingTimeEmpirical out;
  std::uint64_t reg = 0;
  unsigned filled = 0;
  std::uint64_t last_start = 0;
  std::uint64_t distance_sum = 0;
  for (std::size_t pos = 0; pos < n; pos += 64) {
    const std::uint64_t w = bits.word_at(pos);
    const unsigned take = n - pos >= 64 ? 64u : static_cast<unsigned>(n - pos);
    for (unsigned j = 0; j < take; ++j) {
      reg = (reg << 1) | ((w >> (63 - j)) & 1u);
      if (++filled < L) continue;
      if ((reg & mask) == target) {
        const std::uint64_t start = pos + j + 1 - L;
        if (out.occurrences == 0) {
          out.first_match = start;
        } else {
          distance_sum += start - last_start;
        }
        last_start = start;
        ++out.occurrences;
        filled = 0;
      }
    }
  }
  if (out.occurrences < 2) {
    throw InsufficientDataError("pattern " + pattern.str() + " occurs fewer than two times");
  }
  out.distance_count = out.occurrences - 1;
  out.mean_distance = static_cast<double>(distance_sum) / static_cast<double>(out.distance_count);
  return out;
}

BorelResult borel_block_frequencies(BitView bits, unsigned m) {
  if (m < 1 || m > 16) throw ArgumentError("Borel block length must be in 1..16");
  const std::size_t n = bits.size();
  if (n < m) throw ArgumentError("stream shorter than one Borel block");
  BorelResult out;
  out.m = m;
  out.blocks = n / m;
  out.counts.assign(std::size_t{1} << m, 0);
  for (std::uint64_t b = 0; b < out.blocks; ++b) ++out.counts[bits.word_at(b * m) >> (64 - m)];
  const double expected = std::ldexp(1.0, -static_cast<int>(m));
  out.frequencies.reserve(out.counts.size());
  for (auto c : out.counts) {
    const double f = static_cast<double>(c) / static_cast<double>(out.blocks);
    out.frequencies.push_back(f);
    out.max_deviation = std::max(out.max_deviation, std::abs(f - expected));
  }
  const double nd = static_cast<double>(n);
  out.threshold = std::sqrt(std::log2(nd) / nd);
  return out;
}

}  // namespace rngaudit
