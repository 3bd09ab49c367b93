#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rngaudit/bitstream.hpp"
#include "rngaudit/entropy.hpp"
#include "rngaudit/feller.hpp"
#include "rngaudit/stats.hpp"

namespace rngaudit {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.3.0";

struct AuditConfig {
  std::string input_name;
  std::optional<std::string> timestamp;  // omitted from the report when unset

  bool run_stats = true;
  bool run_entropy = true;
  bool run_feller = true;

  // Empty: powers of ten from 1e2 to 1e7 that fit in the input.
  std::vector<std::uint64_t> block_sizes;
  std::size_t max_lag = 100;
  std::vector<unsigned> borel_ms = {1, 2, 3, 4};
  std::vector<std::string> patterns = {"01", "10", "00", "11"};
  FellerTableConfig feller;

  double threshold_sigma = 11.5;
  std::vector<double> bound_sigmas = {1.0, 11.5};
  double epsilon = 0x1p-100;

  unsigned threads = 1;

  friend bool operator==(const AuditConfig&, const AuditConfig&) = default;
};

std::vector<std::uint64_t> default_block_sizes(std::uint64_t n);

struct AnomalyFlag {
  std::string statistic;
  double observed = 0.0;
  double expected = 0.0;
  double sigma_distance = 0.0;
  double threshold_sigma = 11.5;

  bool raised() const noexcept { return sigma_distance > threshold_sigma; }

  friend bool operator==(const AnomalyFlag&, const AnomalyFlag&) = default;
};

struct ReportMetadata {
  int schema_version = kReportSchemaVersion;
  std::string tool_version = kToolVersion;
  std::string input;
  std::uint64_t length = 0;
  std::optional<std::string> timestamp;

  friend bool operator==(const ReportMetadata&, const ReportMetadata&) = default;
};

struct BlockBalanceSummary {
  std::uint64_t block_size = 0;
  std::uint64_t blocks = 0;
  double mean_p1 = 0.0;
  double sample_stddev = 0.0;
  double predicted_sigma = 0.0;

  friend bool operator==(const BlockBalanceSummary&, const BlockBalanceSummary&) = default;
};

struct WaitingTimeEntry {
  std::string pattern;
  std::string theoretical_exact;  // rational, e.g. "6"
  double theoretical_mean = 0.0;
  double theoretical_variance = 0.0;
  std::optional<WaitingTimeEmpirical> empirical;

  friend bool operator==(const WaitingTimeEntry&, const WaitingTimeEntry&) = default;
};

struct BoundComparison {
  double m_sigma = 0.0;
  std::optional<double> shannon_bound;  // deficit; absent outside the domain
  std::optional<double> min_bound;
  std::uint64_t shannon_exceeding = 0;  // blocks with deficit above the bound
  std::uint64_t min_exceeding = 0;

  friend bool operator==(const BoundComparison&, const BoundComparison&) = default;
};

struct EntropySizeSummary {
  std::uint64_t block_size = 0;
  std::uint64_t blocks = 0;
  std::uint64_t perfect = 0;
  std::uint64_t degenerate = 0;
  double mean_shannon_cond = 0.0;
  double mean_min_cond = 0.0;
  double mean_deficit_shannon_cond = 0.0;
  double mean_deficit_min_cond = 0.0;
  double max_deficit_shannon_cond = 0.0;
  double max_deficit_min_cond = 0.0;
  std::optional<double> envelope_shannon_cond;
  std::optional<double> envelope_min_cond;
  std::uint64_t forbidden_region_violations = 0;
  std::vector<BoundComparison> bounds;

  friend bool operator==(const EntropySizeSummary&, const EntropySizeSummary&) = default;
};

struct EntropySection {
  // Whole input, overlapping pairs.
  Entropy full_shannon_uncond;
  Entropy full_shannon_cond;
  Entropy full_min_cond;
  double epsilon = 0.0;
  double epsilon_sigma = 0.0;
  std::vector<EntropySizeSummary> sizes;
  std::vector<BoundCurve> curves;

  friend bool operator==(const EntropySection&, const EntropySection&) = default;
};

struct AuditReport {
  ReportMetadata metadata;
  AuditConfig config;
  std::optional<BalanceStats> balance;
  std::vector<BlockBalanceSummary> block_balance;
  std::optional<ConditionalProbs> conditionals;
  std::optional<TupleCounts> tuples_overlapping;
  std::optional<TupleCounts> tuples_disjoint;
  std::vector<WaitingTimeEntry> waiting_times;
  std::vector<FellerRow> feller;
  std::vector<BorelResult> borel;
  std::vector<double> autocorrelation;
  std::optional<EntropySection> entropy;
  // Every statistic tested against the threshold; `flags` holds the raised ones.
  std::vector<AnomalyFlag> checks;
  std::vector<AnomalyFlag> flags;

  friend bool operator==(const AuditReport&, const AuditReport&) = default;
};

// Report plus the per-block data that goes to the CSV bundle but not into
// the JSON document.
struct Audit {
  AuditReport report;
  std::vector<BlockBalance> block_balances;
  std::vector<BlockwiseSeries> entropy_series;
};

Audit run_audit(const BitStream& bits, const AuditConfig& config);

// Deterministic JSON: fixed key order, doubles with 17 significant digits.
std::string report_to_json(const AuditReport& report);
AuditReport report_from_json(std::string_view text);

std::string feller_csv(const std::vector<FellerRow>& rows);

enum class EmitFormat { json, csv_bundle };

// Writes report.json, or one CSV per present analysis, into `dir`. Returns
// the files written.
std::vector<std::filesystem::path> emit(const Audit& audit, EmitFormat format, const std::filesystem::path& dir);

}  // namespace rngaudit
