#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rngaudit/bitstream.hpp"
#include "rngaudit/errors.hpp"
#include "rngaudit/sources.hpp"
#include "rngaudit/stats.hpp"

namespace rngaudit {
namespace {

TupleCounts from_oracle(const oracle::Counts& c, TupleMode mode) {
  TupleCounts t;
  t.mode = mode;
  t.c00 = c.c[0][0];
  t.c01 = c.c[0][1];
  t.c10 = c.c[1][0];
  t.c11 = c.c[1][1];
  return t;
}

BitStream alternating(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += i % 2 ? '1' : '0';
  return from_ascii(s);
}

TEST(BalanceTest, Examples) {
  EXPECT_EQ(balance(from_ascii("0101")).p1, 0.5);
  const auto b = balance(alternating(100));
  EXPECT_EQ(b.n, 100u);
  EXPECT_EQ(b.ones, 50u);
  EXPECT_DOUBLE_EQ(b.sigma_single, 0.05);
  EXPECT_THROW(balance(BitStream{}), ArgumentError);
}

TEST(BalanceTest, FairTenMillion) {
  const auto b = balance(fair_bits(10'000'000, 2024));
  EXPECT_LT(std::abs(b.p1 - 0.5), 5 * b.sigma_single);
}

TEST(BlockBalanceTest, Examples) {
  const auto ones = from_ascii(std::string(100, '1'));
  const auto bb = block_balance(ones, 7);
  ASSERT_EQ(bb.p1.size(), 14u);
  for (double p : bb.p1) EXPECT_EQ(p, 1.0);
  EXPECT_NEAR(block_balance(ones, 50).predicted_sigma, 0.0707, 1e-4);
  EXPECT_THROW(block_balance(ones, 101), ArgumentError);
}

TEST(BlockBalanceTest, FairSpreadMatchesPrediction) {
  const auto bb = block_balance(fair_bits(1'000'000, 6), 1000);
  ASSERT_EQ(bb.p1.size(), 1000u);
  EXPECT_NEAR(bb.sample_stddev() / bb.predicted_sigma, 1.0, 0.10);
  EXPECT_DOUBLE_EQ(bb.predicted_sigma, fair_sigma_single(1000));
}

TEST(TupleCountsTest, Examples) {
  const auto s = from_ascii("0101");
  const auto o = tuple_counts(s, TupleMode::overlapping);
  EXPECT_EQ(o.c01, 2u);
  EXPECT_EQ(o.c10, 1u);
  EXPECT_EQ(o.c00 + o.c11, 0u);
  const auto d = tuple_counts(s, TupleMode::disjoint);
  EXPECT_EQ(d.c01, 2u);
  EXPECT_EQ(d.c00 + d.c10 + d.c11, 0u);
  EXPECT_THROW(tuple_counts(from_ascii("1"), TupleMode::overlapping), ArgumentError);
}

// Every string of length <= 12, plus 100 random length-1e4 strings.
TEST(TupleCountsProperty, MatchesOracleExhaustively) {
  for (unsigned n = 2; n <= 12; ++n) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
      const auto str = oracle::bits_of(v, n);
      const auto s = from_ascii(str);
      ASSERT_EQ(tuple_counts(s, TupleMode::overlapping), from_oracle(oracle::overlapping(str), TupleMode::overlapping)) << str;
      ASSERT_EQ(tuple_counts(s, TupleMode::disjoint), from_oracle(oracle::disjoint(str), TupleMode::disjoint)) << str;
      ASSERT_EQ(tuple_counts(s, TupleMode::cyclic), from_oracle(oracle::cyclic(str), TupleMode::cyclic)) << str;
      ASSERT_EQ(balance(s).ones, oracle::ones(str));
    }
  }
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = fair_bits(10'000 + seed, seed);
    const auto str = to_nist_ascii(s);
    ASSERT_EQ(tuple_counts(s, TupleMode::overlapping), from_oracle(oracle::overlapping(str), TupleMode::overlapping));
    ASSERT_EQ(tuple_counts(s, TupleMode::disjoint), from_oracle(oracle::disjoint(str), TupleMode::disjoint));
    ASSERT_EQ(tuple_counts(s, TupleMode::cyclic), from_oracle(oracle::cyclic(str), TupleMode::cyclic));
    ASSERT_EQ(balance(s).ones, oracle::ones(str));
  }
}

TEST(TupleCountsProperty, ViewsAtUnalignedOffsets) {
  const auto s = fair_bits(1000, 8);
  const auto str = to_nist_ascii(s);
  for (std::size_t off : {1u, 13u, 63u, 64u, 65u}) {
    for (std::size_t len : {2u, 63u, 64u, 129u, 500u}) {
      const auto sub = str.substr(off, len);
      const auto v = s.view(off, len);
      ASSERT_EQ(tuple_counts(v, TupleMode::overlapping), from_oracle(oracle::overlapping(sub), TupleMode::overlapping));
      ASSERT_EQ(tuple_counts(v, TupleMode::cyclic), from_oracle(oracle::cyclic(sub), TupleMode::cyclic));
      ASSERT_EQ(tuple_counts(v, TupleMode::disjoint), from_oracle(oracle::disjoint(sub), TupleMode::disjoint));
    }
  }
}

TEST(TupleCountsProperty, SumsAndChainIdentity) {
  for (std::uint64_t n : {2u, 3u, 64u, 65u, 777u}) {
    const auto s = fair_bits(n, n);
    const auto o = tuple_counts(s, TupleMode::overlapping);
    EXPECT_EQ(o.total(), n - 1);
    EXPECT_EQ(tuple_counts(s, TupleMode::disjoint).total(), n / 2);
    EXPECT_EQ(tuple_counts(s, TupleMode::cyclic).total(), n);
    const auto zeros_head = (n - 1) - balance(s.view(0, n - 1)).ones;
    EXPECT_EQ(o.c00 + o.c01, zeros_head);
  }
}

TEST(ConditionalProbsTest, Alternating) {
  const auto c = conditional_probs(alternating(1000));
  EXPECT_EQ(c.p_1_given_0, 1.0);
  EXPECT_EQ(c.p_0_given_1, 1.0);
  EXPECT_EQ(c.p_0_given_0, 0.0);
}

TEST(ConditionalProbsTest, DegenerateStream) {
  EXPECT_THROW(conditional_probs(from_ascii("0000")), DegenerateError);
  // The only 1 is the last bit: no pair is conditioned on 1.
  EXPECT_THROW(conditional_probs(from_ascii("0001")), DegenerateError);
}

TEST(ConditionalProbsTest, FairWithinFiveSigma) {
  const auto c = conditional_probs(fair_bits(1'000'000, 10));
  EXPECT_DOUBLE_EQ(c.sigma_cond, 1 / std::sqrt(2e6));
  for (double p : {c.p_0_given_0, c.p_1_given_0, c.p_0_given_1, c.p_1_given_1})
    EXPECT_LT(std::abs(p - 0.5), 5 * c.sigma_cond);
}

TEST(ConditionalProbsProperty, RowSumsExactAndSigmaDataIndependent) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SourceConfig cfg;
    cfg.kind = SourceKind::markov;
    cfg.seed = seed;
    cfg.n = 3 + seed * 37;
    cfg.p_1_given_0 = 0.1 + 0.004 * static_cast<double>(seed);
    cfg.p_1_given_1 = 0.85 - 0.003 * static_cast<double>(seed);
    const auto s = generate_bits(cfg);
    ConditionalProbs c;
    try {
      c = conditional_probs(s);
    } catch (const DegenerateError&) {
      continue;
    }
    EXPECT_EQ(c.p_0_given_0 + c.p_1_given_0, 1.0);
    EXPECT_EQ(c.p_0_given_1 + c.p_1_given_1, 1.0);
    EXPECT_EQ(c.sigma_cond, fair_sigma_cond(cfg.n));
  }
}

// Blocks of 1e3 scatter over several percent while the full 1e7 set stays
// within a fraction of a percent.
TEST(ConditionalProbsTest, SpreadShrinksWithSampleSize) {
  const auto s = fair_bits(10'000'000, 77);
  const auto full = conditional_probs(s);
  EXPECT_LT(std::abs(full.p_1_given_0 - 0.5), 0.003);
  double worst = 0;
  for (const auto& b : blocks(s, 1000)) worst = std::max(worst, std::abs(conditional_probs(b).p_1_given_0 - 0.5));
  EXPECT_GT(worst, 0.03);
}

TEST(AutocorrelationTest, Examples) {
  const auto alt = alternating(100);
  const auto r = autocorrelation(alt, 2);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0], 1.0);
  EXPECT_NEAR(r[1], -1.0, 0.01 + 1e-12);  // 99 of 100 pairs; biased 1/n normalization
  EXPECT_DOUBLE_EQ(r[1], -99.0 / 100.0);
  EXPECT_THROW(autocorrelation(alt, 100), ArgumentError);
}

TEST(AutocorrelationProperty, MatchesOracle) {
  for (std::uint64_t n : {1u, 2u, 63u, 64u, 65u, 300u, 2000u}) {
    const auto s = fair_bits(n, 100 + n);
    const auto str = to_nist_ascii(s);
    const std::size_t lag = std::min<std::size_t>(n - 1, 130);
    const auto got = autocorrelation(s, lag);
    const auto want = oracle::autocorrelation(str, lag);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t l = 0; l < got.size(); ++l) ASSERT_DOUBLE_EQ(got[l], want[l]) << "n " << n << " lag " << l;
  }
}

TEST(AutocorrelationTest, FairWithinThreeOverRootN) {
  const std::uint64_t n = 1'000'000;
  const auto r = autocorrelation(fair_bits(n, 1), 100);
  for (std::size_t l = 1; l <= 100; ++l) EXPECT_LT(std::abs(r[l]), 3 / std::sqrt(double(n))) << "lag " << l;
}

TEST(PatternTest, ParseAndBounds) {
  EXPECT_EQ(Pattern::parse("0110").str(), "0110");
  EXPECT_EQ(Pattern::parse("0110").bits(), 6u);
  EXPECT_THROW(Pattern::parse(""), ArgumentError);
  EXPECT_THROW(Pattern::parse("012"), FormatError);
  EXPECT_THROW(Pattern::parse(std::string(65, '1')), ArgumentError);
  EXPECT_NO_THROW(Pattern::parse(std::string(64, '1')));
}

TEST(WaitingTimeTheoreticalTest, TwoBitPatterns) {
  EXPECT_EQ(waiting_time_theoretical(Pattern::parse("01")), 4);
  EXPECT_EQ(waiting_time_theoretical(Pattern::parse("10")), 4);
  EXPECT_EQ(waiting_time_theoretical(Pattern::parse("00")), 6);
  EXPECT_EQ(waiting_time_theoretical(Pattern::parse("11")), 6);
  EXPECT_EQ(waiting_time_theoretical(Pattern::parse("111")), 14);
}

// Exact rational agreement with the absorbing-chain oracle, means and
// variances, for all patterns of length <= 6.
TEST(WaitingTimeProperty, ChainOracleAllShortPatterns) {
  for (unsigned len = 1; len <= 6; ++len) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      const Pattern p(v, len);
      const auto want = oracle::waiting_time_chain(oracle::bits_of(v, len));
      ASSERT_EQ(waiting_time_theoretical(p), want.mean) << p.str();
      const auto m = waiting_time_moments(p);
      ASSERT_EQ(m.mean, want.mean) << p.str();
      ASSERT_EQ(m.variance, want.variance) << p.str();
    }
  }
}

TEST(WaitingTimeEmpiricalTest, HandTrace) {
  const auto w = waiting_times_empirical(from_ascii("110110"), Pattern::parse("11"));
  EXPECT_EQ(w.occurrences, 2u);
  EXPECT_EQ(w.first_match, 0u);
  EXPECT_EQ(w.distance_count, 1u);
  EXPECT_EQ(w.mean_distance, 3.0);
  EXPECT_THROW(waiting_times_empirical(from_ascii("0110"), Pattern::parse("11")), InsufficientDataError);
  // "111" holds one non-overlapping "11" match only.
  EXPECT_THROW(waiting_times_empirical(from_ascii("111"), Pattern::parse("11")), InsufficientDataError);
  EXPECT_EQ(waiting_times_empirical(from_ascii("1111"), Pattern::parse("11")).mean_distance, 2.0);
}

TEST(WaitingTimeEmpiricalProperty, MatchesRenewalOracle) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto s = fair_bits(3000 + 17 * seed, seed);
    const auto str = to_nist_ascii(s);
    for (const char* p : {"01", "10", "00", "11", "0110", "111", "10101"}) {
      const auto d = oracle::renewal_distances(str, p);
      const auto w = waiting_times_empirical(s, Pattern::parse(p));
      ASSERT_EQ(w.distance_count, d.size());
      double sum = 0;
      for (auto x : d) sum += static_cast<double>(x);
      ASSERT_DOUBLE_EQ(w.mean_distance, sum / static_cast<double>(d.size())) << p;
    }
  }
}

TEST(WaitingTimeEmpiricalTest, FairTenMillionWithinFiveStandardErrors) {
  const auto s = fair_bits(10'000'000, 3);
  for (const char* p : {"01", "00"}) {
    const auto pat = Pattern::parse(p);
    const auto m = waiting_time_moments(pat);
    const auto w = waiting_times_empirical(s, pat);
    const double se = std::sqrt(static_cast<double>(m.variance) / static_cast<double>(w.distance_count));
    EXPECT_LT(std::abs(w.mean_distance - static_cast<double>(m.mean)), 5 * se) << p;
    EXPECT_LT(std::abs(w.mean_distance - static_cast<double>(m.mean)), std::string(p) == "01" ? 0.02 : 0.03);
  }
}

TEST(BorelTest, Examples) {
  const auto r = borel_block_frequencies(from_ascii("00011011"), 2);
  EXPECT_EQ(r.blocks, 4u);
  for (double f : r.frequencies) EXPECT_EQ(f, 0.25);
  EXPECT_EQ(r.max_deviation, 0.0);
  EXPECT_THROW(borel_block_frequencies(from_ascii("0101"), 0), ArgumentError);
  EXPECT_THROW(borel_block_frequencies(from_ascii("0101"), 17), ArgumentError);
  EXPECT_THROW(borel_block_frequencies(from_ascii("010"), 4), ArgumentError);
}

TEST(BorelTest, MEqualsOneIsBalance) {
  const auto s = fair_bits(12345, 4);
  const auto r = borel_block_frequencies(s, 1);
  EXPECT_DOUBLE_EQ(r.frequencies[1], balance(s).p1);
  EXPECT_EQ(r.counts[1], balance(s).ones);
}

TEST(BorelProperty, CountsMatchOracle) {
  const auto s = fair_bits(5003, 21);
  const auto str = to_nist_ascii(s);
  for (unsigned m = 1; m <= 16; ++m) {
    std::vector<std::uint64_t> want(std::size_t{1} << m, 0);
    for (std::size_t i = 0; (i + 1) * m <= str.size(); ++i) ++want[std::stoull(str.substr(i * m, m), nullptr, 2)];
    ASSERT_EQ(borel_block_frequencies(s, m).counts, want) << m;
  }
}

TEST(BorelTest, FairTenMillionBelowThreshold) {
  const auto s = fair_bits(10'000'000, 12);
  for (unsigned m = 1; m <= 4; ++m) {
    const auto r = borel_block_frequencies(s, m);
    EXPECT_LT(r.max_deviation, r.threshold) << m;
    EXPECT_DOUBLE_EQ(r.threshold, std::sqrt(std::log2(1e7) / 1e7));
  }
}

}  // namespace
}  // namespace rngaudit
