#include "rngaudit/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rngaudit/errors.hpp"

namespace rngaudit {

std::vector<std::uint64_t> default_block_sizes(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t size = 100; size <= 10'000'000 && size <= n; size *= 10) out.push_back(size);
  return out;
}

namespace {

class CheckList {
 public:
  explicit CheckList(double threshold) : threshold_(threshold) {}

  void add(std::string statistic, double observed, double expected, double sigma_distance) {
    checks_.push_back({std::move(statistic), observed, expected, sigma_distance, threshold_});
  }

  std::vector<AnomalyFlag> take() && { return std::move(checks_); }

 private:
  double threshold_;
  std::vector<AnomalyFlag> checks_;
};

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_exact_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

void run_stats(const BitStream& bits, const AuditConfig& cfg, Audit& audit, CheckList& checks) {
  auto& r = audit.report;
  const std::uint64_t n = bits.size();

  r.balance = balance(bits);
  checks.add("balance.p1", r.balance->p1, 0.5, std::abs(r.balance->p1 - 0.5) / fair_sigma_single(n));

  for (auto size : cfg.block_sizes) {
    if (size > n) continue;
    BlockBalance bb = block_balance(bits, size);
    r.block_balance.push_back({size, bb.p1.size(), bb.mean(), bb.sample_stddev(), bb.predicted_sigma});
    audit.block_balances.push_back(std::move(bb));
  }

  if (n >= 2) {
    r.tuples_overlapping = tuple_counts(bits, TupleMode::overlapping);
    r.tuples_disjoint = tuple_counts(bits, TupleMode::disjoint);
  }

  try {
    r.conditionals = conditional_probs(bits);
  } catch (const DegenerateError& e) {
    throw DegenerateError(std::string("audit input is degenerate: ") + e.what());
  }
  const auto& cp = *r.conditionals;
  const std::pair<const char*, double> cond[] = {{"conditional.p(0|0)", cp.p_0_given_0},
                                                 {"conditional.p(1|0)", cp.p_1_given_0},
                                                 {"conditional.p(0|1)", cp.p_0_given_1},
                                                 {"conditional.p(1|1)", cp.p_1_given_1}};
  for (const auto& [name, p] : cond) checks.add(name, p, 0.5, std::abs(p - 0.5) / cp.sigma_cond);

  const std::size_t max_lag = std::min<std::size_t>(cfg.max_lag, n - 1);
  r.autocorrelation = autocorrelation(bits, max_lag);
  if (max_lag >= 1) {
    std::size_t worst = 1;
    double worst_z = -1.0;
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
      const double z = std::abs(r.autocorrelation[lag]) * static_cast<double>(n) /
                       std::sqrt(static_cast<double>(n - lag));
      if (z > worst_z) {
        worst_z = z;
        worst = lag;
      }
    }
    checks.add("autocorrelation.lag" + std::to_string(worst), r.autocorrelation[worst], 0.0, worst_z);
  }

  for (const auto& text : cfg.patterns) {
    const Pattern pattern = Pattern::parse(text);
    const auto moments = waiting_time_moments(pattern);
    WaitingTimeEntry entry;
    entry.pattern = pattern.str();
    const Rational mean = waiting_time_theoretical(pattern);
    entry.theoretical_exact = to_exact_string(mean);
    entry.theoretical_mean = to_double(mean);
    entry.theoretical_variance = to_double(moments.variance);
    try {
      entry.empirical = waiting_times_empirical(bits, pattern);
      const double se = std::sqrt(entry.theoretical_variance / static_cast<double>(entry.empirical->distance_count));
      checks.add("waiting_time." + entry.pattern, entry.empirical->mean_distance, entry.theoretical_mean,
                 std::abs(entry.empirical->mean_distance - entry.theoretical_mean) / se);
    } catch (const InsufficientDataError&) {
      // Reported without an empirical value.
    }
    r.waiting_times.push_back(std::move(entry));
  }

  for (unsigned m : cfg.borel_ms) {
    if (m > n) continue;
    BorelResult br = borel_block_frequencies(bits, m);
    const double p = std::ldexp(1.0, -static_cast<int>(m));
    const double sd = std::sqrt(p * (1.0 - p) / static_cast<double>(br.blocks));
    std::size_t worst = 0;
    for (std::size_t w = 1; w < br.frequencies.size(); ++w) {
      if (std::abs(br.frequencies[w] - p) > std::abs(br.frequencies[worst] - p)) worst = w;
    }
    checks.add("borel.m" + std::to_string(m), br.frequencies[worst], p, std::abs(br.frequencies[worst] - p) / sd);
    r.borel.push_back(std::move(br));
  }
}

void run_entropy(const BitStream& bits, const AuditConfig& cfg, Audit& audit, CheckList& checks) {
  const std::uint64_t n = bits.size();
  EntropySection section;

  const TupleCounts full = tuple_counts(bits, TupleMode::overlapping);
  const auto bal = balance(bits);
  section.full_shannon_uncond = shannon_unconditional(bal.n - bal.ones, bal.ones);
  section.full_shannon_cond = shannon_conditional(full);
  section.full_min_cond = min_entropy_conditional(full);
  section.epsilon = cfg.epsilon;
  section.epsilon_sigma = epsilon_to_sigma(cfg.epsilon);

  const double sigma_full = fair_sigma_cond(n);
  checks.add("entropy.full.shannon_cond", section.full_shannon_cond.value, 1.0,
             equivalent_delta(section.full_shannon_cond.deficit, EntropyKind::shannon_cond) / sigma_full);
  checks.add("entropy.full.min_cond", section.full_min_cond.value, 1.0,
             equivalent_delta(section.full_min_cond.deficit, EntropyKind::min_cond) / sigma_full);

  std::vector<double> ms = cfg.bound_sigmas;
  ms.push_back(section.epsilon_sigma);
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());

  audit.entropy_series = blockwise_entropy(bits, cfg.block_sizes, cfg.threads);
  for (const auto& series : audit.entropy_series) {
    const std::uint64_t N = series.block_size;
    EntropySizeSummary s;
    s.block_size = N;
    s.blocks = series.points.size();
    if (N >= 4 && N % 2 == 0) {
      s.envelope_shannon_cond = one_flip_envelope(N, EntropyKind::shannon_cond);
      s.envelope_min_cond = one_flip_envelope(N, EntropyKind::min_cond);
    }
    for (double m : ms) {
      BoundComparison bc;
      bc.m_sigma = m;
      try {
        bc.shannon_bound = apriori_bound(N, m, EntropyKind::shannon_cond);
        bc.min_bound = apriori_bound(N, m, EntropyKind::min_cond);
      } catch (const DomainError&) {
      }
      s.bounds.push_back(bc);
    }

    const EntropyPoint* worst_sh = &series.points.front();
    const EntropyPoint* worst_min = &series.points.front();
    for (const auto& pt : series.points) {
      s.perfect += pt.perfect;
      s.degenerate += pt.degenerate;
      s.mean_shannon_cond += pt.shannon_cond.value;
      s.mean_min_cond += pt.min_cond.value;
      s.mean_deficit_shannon_cond += pt.shannon_cond.deficit;
      s.mean_deficit_min_cond += pt.min_cond.deficit;
      if (pt.shannon_cond.deficit > worst_sh->shannon_cond.deficit) worst_sh = &pt;
      if (pt.min_cond.deficit > worst_min->min_cond.deficit) worst_min = &pt;
      if (!pt.perfect && s.envelope_shannon_cond &&
          (pt.shannon_cond.deficit < *s.envelope_shannon_cond - 1e-12 ||
           pt.min_cond.deficit < *s.envelope_min_cond - 1e-12)) {
        ++s.forbidden_region_violations;
      }
      for (auto& bc : s.bounds) {
        if (bc.shannon_bound && pt.shannon_cond.deficit > *bc.shannon_bound) ++bc.shannon_exceeding;
        if (bc.min_bound && pt.min_cond.deficit > *bc.min_bound) ++bc.min_exceeding;
      }
    }
    const double count = static_cast<double>(s.blocks);
    s.mean_shannon_cond /= count;
    s.mean_min_cond /= count;
    s.mean_deficit_shannon_cond /= count;
    s.mean_deficit_min_cond /= count;
    s.max_deficit_shannon_cond = worst_sh->shannon_cond.deficit;
    s.max_deficit_min_cond = worst_min->min_cond.deficit;

    const double sigma = fair_sigma_cond(N);
    const std::string prefix = "entropy.block" + std::to_string(N) + ".";
    checks.add(prefix + "shannon_cond", worst_sh->shannon_cond.value, 1.0,
               equivalent_delta(worst_sh->shannon_cond.deficit, EntropyKind::shannon_cond) / sigma);
    checks.add(prefix + "min_cond", worst_min->min_cond.value, 1.0,
               equivalent_delta(worst_min->min_cond.deficit, EntropyKind::min_cond) / sigma);
    section.sizes.push_back(std::move(s));
  }

  for (auto kind : {EntropyKind::shannon_cond, EntropyKind::min_cond}) {
    section.curves.push_back(bound_curve(kind, BoundVariant::one_flip_envelope, 0.0, cfg.block_sizes));
    for (double m : ms) section.curves.push_back(bound_curve(kind, BoundVariant::m_sigma_bound, m, cfg.block_sizes));
  }
  audit.report.entropy = std::move(section);
}

void run_feller(const BitStream& bits, const AuditConfig& cfg, Audit& audit, CheckList& checks) {
  if (bits.size() < cfg.feller.window) return;
  FellerTableConfig fc = cfg.feller;
  fc.threads = cfg.threads;
  audit.report.feller = feller_table(bits, fc);
  for (const auto& row : audit.report.feller) {
    if (!row.measurable() || !row.relative_std_error || *row.relative_std_error <= 0.0) continue;
    checks.add("feller.k" + std::to_string(row.k), *row.alpha_extracted, row.alpha_ideal,
               std::abs(*row.relative_change) / *row.relative_std_error);
  }
}

}  // namespace

Audit run_audit(const BitStream& bits, const AuditConfig& config) {
  if (bits.size() < 2) throw ArgumentError("audit needs at least two bits");
  AuditConfig cfg = config;
  if (cfg.block_sizes.empty()) cfg.block_sizes = default_block_sizes(bits.size());
  if (!(cfg.threshold_sigma > 0.0)) throw ArgumentError("flag threshold must be positive");

  Audit audit;
  auto& r = audit.report;
  r.metadata.input = cfg.input_name;
  r.metadata.length = bits.size();
  r.metadata.timestamp = cfg.timestamp;
  r.config = cfg;

  CheckList checks(cfg.threshold_sigma);
  if (cfg.run_stats) run_stats(bits, cfg, audit, checks);
  if (cfg.run_entropy) run_entropy(bits, cfg, audit, checks);
  if (cfg.run_feller) run_feller(bits, cfg, audit, checks);

  r.checks = std::move(checks).take();
  for (const auto& c : r.checks) {
    if (c.raised()) r.flags.push_back(c);
  }
  return audit;
}

}  // namespace rngaudit
