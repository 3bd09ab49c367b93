#include "rngaudit/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "rngaudit/errors.hpp"

namespace rngaudit {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void check_rows(const TupleCounts& tc) {
  if (tc.row(0) == 0 || tc.row(1) == 0) {
    throw DegenerateError("a conditioning symbol never occurs; conditional entropy undefined");
  }
}

double row_deviation(std::uint64_t to0, std::uint64_t to1) {
  const double diff = static_cast<double>(to1) - static_cast<double>(to0);
  return diff / (2.0 * static_cast<double>(to0 + to1));
}

Entropy from_deficit(double deficit) { return {1.0 - deficit, deficit}; }

}  // namespace

std::string_view to_string(EntropyKind kind) {
  switch (kind) {
    case EntropyKind::shannon_uncond: return "shannon_uncond";
    case EntropyKind::shannon_cond: return "shannon_cond";
    case EntropyKind::min_cond: return "min_cond";
  }
  return "min_cond";
}

EntropyKind parse_entropy_kind(std::string_view name) {
  if (name == "shannon_uncond") return EntropyKind::shannon_uncond;
  if (name == "shannon_cond" || name == "shannon") return EntropyKind::shannon_cond;
  if (name == "min_cond" || name == "min") return EntropyKind::min_cond;
  throw ArgumentError("unknown entropy kind '" + std::string(name) + "'");
}

std::string_view to_string(BoundVariant v) {
  return v == BoundVariant::one_flip_envelope ? "one_flip_envelope" : "m_sigma_bound";
}

double binary_entropy_deficit(double d) {
  const double u = std::min(1.0, std::abs(2.0 * d));
  if (u == 0.0) return 0.0;
  if (u < 0.1) {
    // sum_k u^(2k) / (2k (2k - 1)) / ln 2
    const double u2 = u * u;
    double term = u2, sum = 0.0;
    for (int k = 1; k < 30; ++k) {
      const double add = term / (2.0 * k * (2.0 * k - 1.0));
      sum += add;
      if (add < sum * 1e-18) break;
      term *= u2;
    }
    return sum / kLn2;
  }
  const double a = (1.0 + u) * std::log1p(u);
  const double b = u < 1.0 ? (1.0 - u) * std::log1p(-u) : 0.0;
  return (a + b) / (2.0 * kLn2);
}

Entropy shannon_unconditional(std::uint64_t zeros, std::uint64_t ones) {
  if (zeros + ones == 0) throw ArgumentError("entropy of an empty sample");
  return from_deficit(binary_entropy_deficit(row_deviation(zeros, ones)));
}

Entropy shannon_conditional(const TupleCounts& tc) {
  check_rows(tc);
  const double total = static_cast<double>(tc.total());
  double deficit = 0.0;
  for (int y = 0; y < 2; ++y) {
    const double weight = static_cast<double>(tc.row(y)) / total;
    deficit += weight * binary_entropy_deficit(row_deviation(tc.at(y, 0), tc.at(y, 1)));
  }
  return from_deficit(deficit);
}

Entropy min_entropy_conditional(const TupleCounts& tc) {
  check_rows(tc);
  const std::uint64_t total = tc.total();
  const std::uint64_t best = std::max(tc.c00, tc.c01) + std::max(tc.c10, tc.c11);
  // 1 - H = log2(2 best / total)
  const double excess = static_cast<double>(2 * best - total) / static_cast<double>(total);
  return from_deficit(std::log1p(excess) / kLn2);
}

EntropyPoint block_entropy(BitView block, std::uint64_t block_index) {
  EntropyPoint pt;
  pt.block_size = block.size();
  pt.block_index = block_index;
  const TupleCounts tc = tuple_counts(block, TupleMode::cyclic);
  pt.shannon_uncond = shannon_unconditional(tc.row(0), tc.row(1));
  const bool row0_fixed = tc.c00 == 0 || tc.c01 == 0;
  const bool row1_fixed = tc.c10 == 0 || tc.c11 == 0;
  if (tc.row(0) == 0 || tc.row(1) == 0 || (row0_fixed && row1_fixed)) {
    pt.degenerate = true;
    pt.shannon_cond = {0.0, 1.0};
    pt.min_cond = {0.0, 1.0};
    return pt;
  }
  pt.perfect = tc.c00 == tc.c01 && tc.c10 == tc.c11;
  pt.shannon_cond = shannon_conditional(tc);
  pt.min_cond = min_entropy_conditional(tc);
  return pt;
}

std::vector<BlockwiseSeries> blockwise_entropy(BitView bits, std::span<const std::uint64_t> block_sizes,
                                               unsigned threads) {
  std::vector<BlockwiseSeries> out;
  for (auto size : block_sizes) {
    if (size < 2) throw ArgumentError("entropy block size must be at least 2");
    const auto bs = blocks(bits, size);
    if (bs.empty()) {
      throw ArgumentError("block size " + std::to_string(size) + " exceeds stream length " +
                          std::to_string(bits.size()));
    }
    BlockwiseSeries series;
    series.block_size = size;
    series.points.resize(bs.size());
    const unsigned t = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(bs.size())));
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) series.points[i] = block_entropy(bs[i], i);
    };
    if (t == 1) {
      work(0, bs.size());
    } else {
      std::vector<std::jthread> pool;
      const std::size_t per = bs.size() / t;
      for (unsigned w = 0; w < t; ++w) {
        const std::size_t b = per * w;
        const std::size_t e = w + 1 == t ? bs.size() : b + per;
        pool.emplace_back(work, b, e);
      }
    }
    out.push_back(std::move(series));
  }
  return out;
}

double one_flip_envelope(std::uint64_t n, EntropyKind kind) {
  if (n < 4 || n % 2 != 0) throw ArgumentError("one-flip envelope needs an even block size >= 4");
  if (kind == EntropyKind::shannon_uncond) return binary_entropy_deficit(1.0 / static_cast<double>(n));

  // Cyclic pair counts of an N-bit block are exactly the vectors
  // (c00, c01, c10, c11) = (a, t, t, b) with a + b + 2t = N and t >= 1
  // (t = 0 only for constant blocks). The concave entropy peaks at the
  // balanced point, so the best non-perfect vector lies within a few units
  // of it.
  constexpr std::int64_t kRadius = 3;
  const std::int64_t N = static_cast<std::int64_t>(n);
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t t = std::max<std::int64_t>(1, N / 4 - kRadius); t <= N / 4 + kRadius; ++t) {
    const std::int64_t rest = N - 2 * t;
    if (rest < 0) break;
    for (std::int64_t a = std::max<std::int64_t>(0, rest / 2 - kRadius);
         a <= std::min<std::int64_t>(rest, rest / 2 + kRadius); ++a) {
      const std::int64_t b = rest - a;
      if (a == t && b == t) continue;
      TupleCounts tc{TupleMode::cyclic, static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(t),
                     static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(b)};
      const double deficit = kind == EntropyKind::shannon_cond ? shannon_conditional(tc).deficit
                                                               : min_entropy_conditional(tc).deficit;
      best = std::min(best, deficit);
    }
  }
  return best;
}

namespace {

double bound_delta(std::uint64_t n, double m_sigma) {
  if (n < 2) throw ArgumentError("a priori bound needs N >= 2");
  if (!(m_sigma > 0.0)) throw ArgumentError("m_sigma must be positive");
  return m_sigma * fair_sigma_cond(n);
}

void check_conditional_kind(EntropyKind kind) {
  if (kind == EntropyKind::shannon_uncond) {
    throw ArgumentError("a priori bounds are defined for conditional entropies only");
  }
}

}  // namespace

double apriori_bound(std::uint64_t n, double m_sigma, EntropyKind kind) {
  check_conditional_kind(kind);
  const double delta = bound_delta(n, m_sigma);
  if (delta >= 0.5) {
    throw DomainError("perturbation " + std::to_string(delta) + " >= 1/2: N = " + std::to_string(n) +
                      " too small for " + std::to_string(m_sigma) + " sigma");
  }
  return kind == EntropyKind::shannon_cond ? binary_entropy_deficit(delta) : std::log1p(2.0 * delta) / kLn2;
}

double apriori_bound_linearized(std::uint64_t n, double m_sigma, EntropyKind kind) {
  check_conditional_kind(kind);
  const double delta = bound_delta(n, m_sigma);
  return kind == EntropyKind::shannon_cond ? 2.0 / kLn2 * delta * delta : 2.0 / kLn2 * delta;
}

double equivalent_delta(double deficit, EntropyKind kind) {
  check_conditional_kind(kind);
  if (!(deficit >= 0.0)) throw ArgumentError("entropy deficit must be non-negative");
  if (deficit >= 1.0) return 0.5;
  if (kind == EntropyKind::min_cond) return std::expm1(deficit * kLn2) / 2.0;
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (binary_entropy_deficit(mid) < deficit ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

BoundCurve bound_curve(EntropyKind kind, BoundVariant variant, double m_sigma,
                       std::span<const std::uint64_t> sizes) {
  BoundCurve curve;
  curve.kind = kind;
  curve.variant = variant;
  curve.m_sigma = variant == BoundVariant::m_sigma_bound ? m_sigma : 0.0;
  for (auto n : sizes) {
    if (variant == BoundVariant::one_flip_envelope) {
      if (n < 4 || n % 2 != 0) continue;
      curve.points.push_back({n, one_flip_envelope(n, kind)});
    } else {
      try {
        curve.points.push_back({n, apriori_bound(n, m_sigma, kind)});
      } catch (const DomainError&) {
        // N too small for this many sigmas: no bound at this size.
      }
    }
  }
  return curve;
}

double inverse_erfc(double y) {
  if (!(y > 0.0 && y < 2.0)) throw ArgumentError("inverse_erfc needs 0 < y < 2");
  if (y > 1.0) return -inverse_erfc(2.0 - y);
  if (y == 1.0) return 0.0;
  // Newton on log erfc(x) = log y, safeguarded by the bracket [lo, hi].
  const double target = std::log(y);
  double lo = 0.0, hi = 27.0;
  double x = std::sqrt(std::max(0.0, -std::log(y * std::sqrt(std::numbers::pi))));
  for (int it = 0; it < 100; ++it) {
    const double e = std::erfc(x);
    const double g = std::log(e) - target;
    (g > 0.0 ? lo : hi) = x;
    const double dg = -2.0 / std::sqrt(std::numbers::pi) * std::exp(-x * x) / e;
    double next = x - g / dg;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16 * std::max(1.0, x)) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

double epsilon_to_sigma(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw ArgumentError("epsilon must lie in (0, 1/2)");
  return std::numbers::sqrt2 * inverse_erfc(2.0 * epsilon);
}

}  // namespace rngaudit
