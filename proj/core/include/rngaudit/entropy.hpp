#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rngaudit/bitstream.hpp"
#include "rngaudit/stats.hpp"

namespace rngaudit {

// An entropy in bits per bit together with its deficit 1 - H. The deficit is
// computed directly (series / log1p forms) rather than by subtraction, so
// it stays accurate down to ~1e-15 relative near perfect entropy.
struct Entropy {
  double value = 0.0;
  double deficit = 1.0;

  friend bool operator==(const Entropy&, const Entropy&) = default;
};

enum class EntropyKind { shannon_uncond, shannon_cond, min_cond };

std::string_view to_string(EntropyKind kind);
EntropyKind parse_entropy_kind(std::string_view name);

// 1 - H2(1/2 + d) for |d| <= 1/2.
double binary_entropy_deficit(double d);

// -sum p log2 p over the two symbol counts.
Entropy shannon_unconditional(std::uint64_t zeros, std::uint64_t ones);

// -sum_y p(y) sum_x p(x|y) log2 p(x|y), p(y) = row_y / total and
// p(x|y) = c_yx / row_y. Throws DegenerateError if a conditioning symbol has
// no pairs.
Entropy shannon_conditional(const TupleCounts& tc);

// -log2 sum_y p(y) max_x p(x|y). Same preconditions as shannon_conditional.
Entropy min_entropy_conditional(const TupleCounts& tc);

struct EntropyPoint {
  std::uint64_t block_size = 0;
  std::uint64_t block_index = 0;
  Entropy shannon_uncond;
  Entropy shannon_cond;
  Entropy min_cond;
  // Both conditional rows balanced: H = 1 exactly.
  bool perfect = false;
  // A conditioning symbol is absent or every row is deterministic; the
  // conditional entropies are recorded as 0.
  bool degenerate = false;
};

// Entropies of one block. The pairs are taken cyclically (the last bit
// conditions the first), giving exactly N pairs per N-bit block and
// p(y) equal to the block's symbol frequency.
EntropyPoint block_entropy(BitView block, std::uint64_t block_index = 0);

struct BlockwiseSeries {
  std::uint64_t block_size = 0;
  std::vector<EntropyPoint> points;
};

// One series per requested block size; each size must fit at least once.
std::vector<BlockwiseSeries> blockwise_entropy(BitView bits, std::span<const std::uint64_t> block_sizes,
                                               unsigned threads = 1);

// Deficit of the second-highest entropy reachable by an N-bit block (N even,
// N >= 4): the best non-perfect configuration, which is one unit of count
// away from balance. The lower edge of the region no block can occupy.
double one_flip_envelope(std::uint64_t n, EntropyKind kind);

// Deficit of a fair coin whose conditional probability is pushed to
// 1/2 + m_sigma / sqrt(2N). Throws DomainError when that exceeds 1.
double apriori_bound(std::uint64_t n, double m_sigma, EntropyKind kind);
// First-order version: (2/ln2) delta for min_cond, (2/ln2) delta^2 for
// shannon_cond.
double apriori_bound_linearized(std::uint64_t n, double m_sigma, EntropyKind kind);

// Effective delta = p(x|y) - 1/2 that produces deficit `deficit` through
// apriori_bound's formula; inverse used for sigma distances.
double equivalent_delta(double deficit, EntropyKind kind);

enum class BoundVariant { one_flip_envelope, m_sigma_bound };

std::string_view to_string(BoundVariant v);

struct BoundPoint {
  std::uint64_t n = 0;
  double deficit = 0.0;

  friend bool operator==(const BoundPoint&, const BoundPoint&) = default;
};

struct BoundCurve {
  EntropyKind kind = EntropyKind::min_cond;
  BoundVariant variant = BoundVariant::m_sigma_bound;
  double m_sigma = 0.0;
  std::vector<BoundPoint> points;  // sizes outside a bound's domain are skipped

  friend bool operator==(const BoundCurve&, const BoundCurve&) = default;
};

BoundCurve bound_curve(EntropyKind kind, BoundVariant variant, double m_sigma,
                       std::span<const std::uint64_t> sizes);

// erfc^-1 for y in (0, 2).
double inverse_erfc(double y);

// Upper standard-normal quantile: P(Z > m) = epsilon, 0 < epsilon < 1/2.
double epsilon_to_sigma(double epsilon);

}  // namespace rngaudit
