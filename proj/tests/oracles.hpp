#pragma once

// Reference implementations used only by the tests. They work on plain
// '0'/'1' strings, one bit at a time, and share no code with the library
// paths they check.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string bits_of(std::uint64_t value, unsigned n) {
  std::string s(n, '0');
  for (unsigned i = 0; i < n; ++i) {
    if ((value >> (n - 1 - i)) & 1u) s[i] = '1';
  }
  return s;
}

inline std::uint64_t ones(const std::string& s) {
  std::uint64_t c = 0;
  for (char ch : s) c += ch == '1';
  return c;
}

struct Counts {
  std::uint64_t c[2][2] = {{0, 0}, {0, 0}};
};

inline Counts overlapping(const std::string& s) {
  Counts out;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) ++out.c[s[i] - '0'][s[i + 1] - '0'];
  return out;
}

inline Counts disjoint(const std::string& s) {
  Counts out;
  for (std::size_t i = 0; 2 * i + 1 < s.size(); ++i) ++out.c[s[2 * i] - '0'][s[2 * i + 1] - '0'];
  return out;
}

inline Counts cyclic(const std::string& s) {
  Counts out;
  for (std::size_t i = 0; i < s.size(); ++i) ++out.c[s[i] - '0'][s[(i + 1) % s.size()] - '0'];
  return out;
}

inline std::vector<double> autocorrelation(const std::string& s, std::size_t max_lag) {
  std::vector<double> out;
  const double n = static_cast<double>(s.size());
  for (std::size_t l = 0; l <= max_lag; ++l) {
    long long sum = 0;
    for (std::size_t i = 0; i + l < s.size(); ++i) sum += (s[i] == s[i + l]) ? 1 : -1;
    out.push_back(static_cast<double>(sum) / n);
  }
  return out;
}

// Direct textbook formulas, probabilities from counts, log2 evaluated on
// each probability.
inline double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

inline double shannon(double p1) { return -(plogp(p1) + plogp(1.0 - p1)); }

inline double cond_shannon(const Counts& c) {
  double total = 0;
  for (auto& r : c.c)
    for (auto v : r) total += static_cast<double>(v);
  double h = 0.0;
  for (int y = 0; y < 2; ++y) {
    const double row = static_cast<double>(c.c[y][0] + c.c[y][1]);
    if (row == 0) continue;
    const double py = row / total;
    for (int x = 0; x < 2; ++x) h -= py * plogp(static_cast<double>(c.c[y][x]) / row);
  }
  return h;
}

inline double cond_min(const Counts& c) {
  double total = 0;
  for (auto& r : c.c)
    for (auto v : r) total += static_cast<double>(v);
  double s = 0.0;
  for (int y = 0; y < 2; ++y) {
    const double row = static_cast<double>(c.c[y][0] + c.c[y][1]);
    if (row == 0) continue;
    const double py = row / total;
    s += py * std::max(c.c[y][0], c.c[y][1]) / row;
  }
  return -std::log2(s);
}

inline bool has_run(const std::string& s, std::size_t begin, std::size_t end, unsigned k, bool either) {
  unsigned run = 0;
  for (std::size_t i = begin; i < end; ++i) {
    if (either) {
      run = (i > begin && s[i] == s[i - 1]) ? run + 1 : 1;
    } else {
      run = s[i] == '1' ? run + 1 : 0;
    }
    if (run >= k) return true;
  }
  return false;
}

// Number of n-bit strings without a forbidden run, by enumeration.
inline std::uint64_t brute_no_run(unsigned n, unsigned k, bool either) {
  std::uint64_t c = 0;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) c += !has_run(bits_of(v, n), 0, n, k, either);
  return c;
}

// Re-scans every window from scratch.
inline std::uint64_t naive_window_no_run(const std::string& s, std::size_t window, unsigned k, bool either) {
  std::uint64_t c = 0;
  for (std::size_t st = 0; st + window <= s.size(); ++st) c += !has_run(s, st, st + window, k, either);
  return c;
}

// Non-overlapping scan for pattern p: distances between successive match
// starts.
inline std::vector<std::uint64_t> renewal_distances(const std::string& s, const std::string& p) {
  std::vector<std::uint64_t> starts;
  std::size_t i = 0;
  while (i + p.size() <= s.size()) {
    if (s.compare(i, p.size(), p) == 0) {
      starts.push_back(i);
      i += p.size();
    } else {
      ++i;
    }
  }
  std::vector<std::uint64_t> d;
  for (std::size_t j = 1; j < starts.size(); ++j) d.push_back(starts[j] - starts[j - 1]);
  return d;
}

// Solves A x = b exactly by Gauss-Jordan elimination.
inline std::vector<Rational> solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (a[piv][col] == 0) ++piv;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t r = 0; r < n; ++r) b[r] /= a[r][r];
  return b;
}

struct Moments {
  Rational mean, variance;
};

// First-occurrence time of pattern p in fair tosses, as an absorbing Markov
// chain over "longest prefix of p currently matched" states 0..L-1.
inline Moments waiting_time_chain(const std::string& p) {
  const std::size_t L = p.size();
  auto next_state = [&](std::size_t state, char c) {
    std::string cur = p.substr(0, state) + c;
    for (std::size_t len = std::min(cur.size(), L); len > 0; --len) {
      if (cur.compare(cur.size() - len, len, p, 0, len) == 0) return len;
    }
    return std::size_t{0};
  };
  // Q: transient-to-transient transition probabilities.
  std::vector<std::vector<Rational>> Q(L, std::vector<Rational>(L, 0));
  for (std::size_t s = 0; s < L; ++s) {
    for (char c : {'0', '1'}) {
      const std::size_t t = next_state(s, c);
      if (t < L) Q[s][t] += Rational(1, 2);
    }
  }
  std::vector<std::vector<Rational>> A(L, std::vector<Rational>(L, 0));
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = 0; j < L; ++j) A[i][j] = (i == j ? 1 : 0) - Q[i][j];
  // m1 = (I - Q)^-1 1 ; m2 = (I - Q)^-1 (1 + 2 Q m1) gives E[T^2].
  const auto m1 = solve(A, std::vector<Rational>(L, 1));
  std::vector<Rational> rhs(L, 1);
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = 0; j < L; ++j) rhs[i] += 2 * Q[i][j] * m1[j];
  const auto m2 = solve(A, rhs);
  return {m1[0], m2[0] - m1[0] * m1[0]};
}

// Upper normal tail P(Z > x) for x > 0 from the Laplace continued fraction
// of the Mills ratio, evaluated backwards in long double.
inline long double normal_tail(long double x) {
  long double f = x;
  for (int k = 300; k >= 1; --k) f = x + k / f;
  const long double phi = std::exp(-0.5L * x * x) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
  return phi / f;
}

}  // namespace oracle
