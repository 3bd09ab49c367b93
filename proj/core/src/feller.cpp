#include "rngaudit/feller.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rngaudit/errors.hpp"

namespace rngaudit {

namespace {

using Float50 = boost::multiprecision::cpp_bin_float_50;

constexpr unsigned kMaxK = 64;

void check_k(unsigned k) {
  if (k < 1) throw ArgumentError("run length k must be at least 1");
}

BigInt count_no_run_ones(std::uint64_t n, unsigned k) {
  // a_j = 2^j for j < k; a_n = a_{n-1} + ... + a_{n-k} afterwards, computed
  // through the telescoped form a_n = 2 a_{n-1} - a_{n-1-k} on a ring buffer.
  if (n < k) return BigInt(1) << n;
  std::vector<BigInt> ring(k + 1);
  for (unsigned j = 0; j < k; ++j) ring[j] = BigInt(1) << j;
  ring[k] = (BigInt(1) << k) - 1;
  for (std::uint64_t m = k + 1; m <= n; ++m) {
    const std::size_t slot = m % (k + 1);  // holds a_{m-1-k}
    const BigInt& prev = ring[(m - 1) % (k + 1)];
    ring[slot] = 2 * prev - ring[slot];
  }
  return ring[n % (k + 1)];
}

BigInt count_no_run_either(std::uint64_t n, unsigned k) {
  if (n == 0) return 1;
  if (k == 1) return 0;
  // state j (index j-1): sequences whose final run has length j < k.
  std::vector<BigInt> v(k - 1), next(k - 1);
  v[0] = 2;
  for (std::uint64_t m = 2; m <= n; ++m) {
    BigInt total = 0;
    for (const auto& x : v) total += x;
    next[0] = total;
    for (unsigned j = 1; j + 1 < k; ++j) next[j] = v[j - 1];
    std::swap(v, next);
  }
  BigInt total = 0;
  for (const auto& x : v) total += x;
  return total;
}

// Root in [1, 2) of x^m = x^(m-1) + ... + 1.
Float50 dominant_root(unsigned m) {
  if (m == 1) return Float50(1);
  auto f = [m](const Float50& x) {
    Float50 lhs = 1, rhs = 0;
    for (unsigned i = 0; i < m; ++i) {
      rhs += lhs;
      lhs *= x;
    }
    return lhs - rhs;
  };
  Float50 lo = 1, hi = 2;
  for (int it = 0; it < 180; ++it) {
    const Float50 mid = (lo + hi) / 2;
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

struct HighPrecisionConstants {
  Float50 root, alpha, beta;
};

HighPrecisionConstants constants_hp(unsigned k, RunMode mode) {
  if (k < 2 || k > kMaxK) throw ArgumentError("alpha_ideal needs 2 <= k <= 64");
  HighPrecisionConstants c;
  if (mode == RunMode::ones_only) {
    c.root = dominant_root(k);
    c.alpha = 2 / c.root;
    c.beta = (2 - c.alpha) / (Float50(k + 1) - Float50(k) * c.alpha);
  } else {
    // Strings avoiding k equal symbols <-> first symbol plus a composition of
    // n into parts < k. p ~ 2 c(n) / 2^n with c(n) ~ rho^-n / (rho P'(rho)),
    // P(z) = z + ... + z^(k-1), rho = 1 / root.
    const unsigned m = k - 1;
    c.root = dominant_root(m);
    c.alpha = 2 / c.root;
    const Float50 rho = 1 / c.root;
    Float50 dp = 0, pw = 1;
    for (unsigned j = 1; j <= m; ++j) {
      dp += Float50(j) * pw;
      pw *= rho;
    }
    c.beta = 4 / dp;
  }
  return c;
}

}  // namespace

std::string_view to_string(RunMode mode) { return mode == RunMode::ones_only ? "ones" : "either"; }

RunMode parse_run_mode(std::string_view name) {
  if (name == "ones" || name == "ones_only") return RunMode::ones_only;
  if (name == "either" || name == "either_symbol") return RunMode::either_symbol;
  throw ArgumentError("unknown run mode '" + std::string(name) + "'");
}

BigInt count_no_run(std::uint64_t n, unsigned k, RunMode mode) {
  check_k(k);
  return mode == RunMode::ones_only ? count_no_run_ones(n, k) : count_no_run_either(n, k);
}

Rational p_no_run(std::uint64_t n, unsigned k, RunMode mode) {
  return Rational(count_no_run(n, k, mode), BigInt(1) << n);
}

double p_no_run_value(std::uint64_t n, unsigned k, RunMode mode) {
  const Float50 p = Float50(count_no_run(n, k, mode)) / pow(Float50(2), n);
  return p.convert_to<double>();
}

FellerConstants alpha_ideal(unsigned k, RunMode mode) {
  const auto c = constants_hp(k, mode);
  return {k, mode, c.alpha.convert_to<double>(), c.beta.convert_to<double>(), c.root.convert_to<double>()};
}

std::vector<double> verify_asymptotics(unsigned k, std::span<const std::uint64_t> ns, RunMode mode) {
  if (!std::is_sorted(ns.begin(), ns.end())) throw ArgumentError("n list must be increasing");
  const auto c = constants_hp(k, mode);
  std::vector<double> out;
  out.reserve(ns.size());
  for (auto n : ns) {
    const Float50 p = Float50(count_no_run(n, k, mode)) / pow(Float50(2), n);
    out.push_back((p * pow(c.alpha, n + 1) - c.beta).convert_to<double>());
  }
  return out;
}

// --- sliding-window scan -----------------------------------------------------

namespace {

// Windows starting in [s_begin, s_end). Runs are tracked from s_begin only;
// a run crossing s_begin is truncated there, which cannot change the answer
// for windows that start at or after s_begin.
void scan_range(BitView bits, std::uint64_t window, unsigned k_min, unsigned k_max, RunMode mode,
                std::uint64_t s_begin, std::uint64_t s_end, std::uint64_t* no_run) {
  const unsigned nk = k_max - k_min + 1;
  // Latest start of a forbidden run of length k, or -inf.
  std::array<std::int64_t, kMaxK> last_start;
  last_start.fill(std::numeric_limits<std::int64_t>::min() / 2);
  std::array<std::uint64_t, kMaxK> counts{};

  const std::uint64_t end_bit = s_end - 1 + window;  // one past the last bit read
  std::uint64_t run = 0;
  bool prev = false;
  for (std::uint64_t pos = s_begin; pos < end_bit; pos += 64) {
    const std::uint64_t w = bits.word_at(pos);
    const unsigned take = end_bit - pos >= 64 ? 64u : static_cast<unsigned>(end_bit - pos);
    for (unsigned b = 0; b < take; ++b) {
      const std::int64_t j = static_cast<std::int64_t>(pos + b);
      const bool bit = (w >> (63 - b)) & 1u;
      if (mode == RunMode::ones_only) {
        run = bit ? run + 1 : 0;
      } else {
        run = (j > static_cast<std::int64_t>(s_begin) && bit == prev) ? run + 1 : 1;
        prev = bit;
      }
      const unsigned upto = static_cast<unsigned>(std::min<std::uint64_t>(run, k_max));
      for (unsigned k = k_min; k <= upto; ++k) last_start[k - k_min] = j - k + 1;
      const std::int64_t s = j - static_cast<std::int64_t>(window) + 1;
      if (s < static_cast<std::int64_t>(s_begin)) continue;
      for (unsigned i = 0; i < nk; ++i) counts[i] += last_start[i] < s;
    }
  }
  for (unsigned i = 0; i < nk; ++i) no_run[i] = counts[i];
}

}  // namespace

NoRunScan scan_no_run_windows(BitView bits, std::uint64_t window, unsigned k_min, unsigned k_max,
                              RunMode mode, unsigned threads) {
  if (window == 0) throw ArgumentError("window length must be at least 1");
  if (window > bits.size()) throw ArgumentError("window length exceeds stream length");
  if (k_min < 1 || k_max < k_min || k_max > kMaxK) throw ArgumentError("need 1 <= k_min <= k_max <= 64");

  NoRunScan out;
  out.window = window;
  out.k_min = k_min;
  out.windows = bits.size() - window + 1;
  const unsigned nk = k_max - k_min + 1;
  out.no_run.assign(nk, 0);

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(out.windows, 1024))));
  std::vector<std::vector<std::uint64_t>> partial(threads, std::vector<std::uint64_t>(nk));
  const std::uint64_t per = out.windows / threads;
  auto bounds = [&](unsigned t) {
    const std::uint64_t b = per * t;
    return std::pair{b, t + 1 == threads ? out.windows : b + per};
  };
  if (threads == 1) {
    scan_range(bits, window, k_min, k_max, mode, 0, out.windows, partial[0].data());
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        const auto [b, e] = bounds(t);
        scan_range(bits, window, k_min, k_max, mode, b, e, partial[t].data());
      });
    }
  }
  for (const auto& p : partial) {
    for (unsigned i = 0; i < nk; ++i) out.no_run[i] += p[i];
  }
  return out;
}

FellerRow make_feller_row(const FellerConstants& ideal, std::uint64_t window, std::uint64_t stream_length,
                          std::uint64_t windows, std::uint64_t no_run) {
  FellerRow row;
  row.k = ideal.k;
  row.alpha_ideal = ideal.alpha;
  row.windows_scanned = windows;
  row.no_run_windows = no_run;
  if (no_run == 0 || windows == 0) return row;

  const double p_hat = static_cast<double>(no_run) / static_cast<double>(windows);
  const double exponent = 1.0 / static_cast<double>(window + 1);
  const double extracted = std::exp(exponent * (std::log(ideal.beta) - std::log(p_hat)));
  row.alpha_extracted = extracted;
  row.relative_change = (ideal.alpha - extracted) / ideal.alpha;

  const double w_eff = std::max(1.0, static_cast<double>(stream_length) / static_cast<double>(window));
  const double se_p = std::sqrt(p_hat * (1.0 - p_hat) / w_eff);
  row.relative_std_error = exponent * se_p / p_hat;
  return row;
}

FellerRow alpha_extracted(BitView bits, std::uint64_t window, unsigned k, RunMode mode) {
  const auto ideal = alpha_ideal(k, mode);
  const auto scan = scan_no_run_windows(bits, window, k, k, mode);
  return make_feller_row(ideal, window, bits.size(), scan.windows, scan.no_run[0]);
}

std::vector<FellerRow> feller_table(BitView bits, const FellerTableConfig& cfg) {
  if (cfg.k_min < 2) throw ArgumentError("feller table needs k_min >= 2");
  const auto scan = scan_no_run_windows(bits, cfg.window, cfg.k_min, cfg.k_max, cfg.mode, cfg.threads);
  std::vector<FellerRow> rows;
  for (unsigned k = cfg.k_min; k <= cfg.k_max; ++k) {
    rows.push_back(make_feller_row(alpha_ideal(k, cfg.mode), cfg.window, bits.size(), scan.windows,
                                   scan.no_run[k - cfg.k_min]));
  }
  return rows;
}

}  // namespace rngaudit
