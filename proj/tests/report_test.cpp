#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "rngaudit/errors.hpp"
#include "rngaudit/report.hpp"
#include "rngaudit/sources.hpp"

namespace rngaudit {
namespace {

namespace fs = std::filesystem;

BitStream simulate(SourceKind kind, std::uint64_t n, std::uint64_t seed, double p1 = 0.5, double p10 = 0.5,
                   double p11 = 0.5) {
  SourceConfig cfg;
  cfg.kind = kind;
  cfg.n = n;
  cfg.seed = seed;
  cfg.p1 = p1;
  cfg.p_1_given_0 = p10;
  cfg.p_1_given_1 = p11;
  return generate_bits(cfg);
}

bool raised(const AuditReport& r, const std::string& prefix) {
  for (const auto& f : r.flags)
    if (f.statistic.rfind(prefix, 0) == 0) return true;
  return false;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AuditConfig fast_config() {
  AuditConfig cfg;
  cfg.input_name = "sim";
  cfg.run_feller = false;
  return cfg;
}

TEST(AnomalyFlagTest, RaisedStrictlyAboveThreshold) {
  AnomalyFlag f{"x", 0, 0, 11.5, 11.5};
  EXPECT_FALSE(f.raised());
  f.sigma_distance = 11.5000001;
  EXPECT_TRUE(f.raised());
}

TEST(RunAuditTest, FairStreamRaisesNothing) {
  const auto a = run_audit(fair_bits(1'000'000, 1), AuditConfig{});
  EXPECT_TRUE(a.report.flags.empty());
  EXPECT_FALSE(a.report.checks.empty());
  EXPECT_FALSE(a.report.feller.empty());
  for (const auto& c : a.report.checks) {
    EXPECT_EQ(c.threshold_sigma, 11.5);
    EXPECT_LT(c.sigma_distance, 11.5) << c.statistic;
  }
}

TEST(RunAuditTest, BiasedStreamRaisesBalanceFlag) {
  const auto a = run_audit(simulate(SourceKind::biased, 1'000'000, 2, 0.55), fast_config());
  ASSERT_TRUE(raised(a.report, "balance.p1"));
  for (const auto& f : a.report.flags) {
    if (f.statistic != "balance.p1") continue;
    EXPECT_NEAR(f.sigma_distance, 100.0, 10.0);
    EXPECT_EQ(f.expected, 0.5);
  }
}

TEST(RunAuditTest, MarkovStreamRaisesConditionalNotBalance) {
  const auto a = run_audit(simulate(SourceKind::markov, 1'000'000, 3, 0.5, 0.6, 0.4), fast_config());
  EXPECT_FALSE(raised(a.report, "balance"));
  EXPECT_TRUE(raised(a.report, "conditional."));
  EXPECT_TRUE(raised(a.report, "entropy.full.shannon_cond"));
  EXPECT_TRUE(raised(a.report, "entropy.full.min_cond"));
  // The unconditional entropy looks perfect.
  EXPECT_LT(a.report.entropy->full_shannon_uncond.deficit, 1e-4);
}

TEST(RunAuditTest, DegenerateInputIsReportedWithContext) {
  const auto zeros = from_ascii(std::string(1000, '0'));
  try {
    run_audit(zeros, fast_config());
    FAIL();
  } catch (const DegenerateError& e) {
    EXPECT_NE(std::string(e.what()).find("audit"), std::string::npos);
  }
  EXPECT_THROW(run_audit(from_ascii("1"), fast_config()), ArgumentError);
}

TEST(RunAuditTest, DefaultBlockSizesAndSections) {
  EXPECT_EQ(default_block_sizes(99), std::vector<std::uint64_t>{});
  EXPECT_EQ(default_block_sizes(123'456), (std::vector<std::uint64_t>{100, 1000, 10000, 100000}));
  EXPECT_EQ(default_block_sizes(1'000'000'000).back(), 10'000'000u);

  auto cfg = fast_config();
  cfg.run_entropy = false;
  const auto a = run_audit(fair_bits(50'000, 4), cfg);
  EXPECT_FALSE(a.report.entropy.has_value());
  EXPECT_TRUE(a.report.feller.empty());
  EXPECT_EQ(a.report.config.block_sizes, (std::vector<std::uint64_t>{100, 1000, 10000}));
  EXPECT_EQ(a.report.metadata.length, 50'000u);
  EXPECT_EQ(a.report.waiting_times.size(), 4u);
  EXPECT_EQ(a.report.waiting_times[0].theoretical_exact, "4");
  EXPECT_EQ(a.report.autocorrelation.size(), 101u);
}

TEST(RunAuditTest, EntropySummaryRespectsForbiddenRegion) {
  const auto a = run_audit(fair_bits(1'000'000, 5), fast_config());
  ASSERT_TRUE(a.report.entropy.has_value());
  const auto& e = *a.report.entropy;
  EXPECT_NEAR(e.epsilon_sigma, 11.4845, 1e-3);
  ASSERT_EQ(e.sizes.size(), 5u);
  for (const auto& s : e.sizes) {
    EXPECT_EQ(s.forbidden_region_violations, 0u) << s.block_size;
    for (const auto& b : s.bounds)
      if (b.m_sigma > 11) EXPECT_EQ(b.min_exceeding, 0u) << s.block_size;
  }
  EXPECT_GT(e.sizes[0].perfect, 0u);
}

TEST(ReportJsonTest, RoundTrip) {
  auto cfg = AuditConfig{};
  cfg.input_name = "roundtrip";
  cfg.timestamp = "2026-01-01T00:00:00Z";
  const auto a = run_audit(fair_bits(200'000, 6), cfg);
  const auto text = report_to_json(a.report);
  const auto back = report_from_json(text);
  EXPECT_EQ(back, a.report);
  EXPECT_EQ(report_to_json(back), text);
}

TEST(ReportJsonTest, DeterministicBytes) {
  const auto s = fair_bits(300'000, 7);
  const auto a1 = run_audit(s, AuditConfig{});
  auto cfg = AuditConfig{};
  cfg.threads = 4;
  const auto a2 = run_audit(s, AuditConfig{});
  EXPECT_EQ(report_to_json(a1.report), report_to_json(a2.report));
  // Thread count is echoed in the config, nothing else may differ.
  auto r3 = run_audit(s, cfg).report;
  r3.config.threads = 1;
  r3.config.feller.threads = a1.report.config.feller.threads;
  EXPECT_EQ(report_to_json(r3), report_to_json(a1.report));
}

TEST(ReportJsonTest, OmitsAbsentOptionals) {
  auto cfg = fast_config();
  cfg.run_entropy = false;
  const auto a = run_audit(fair_bits(10'000, 8), cfg);
  const auto j = nlohmann::ordered_json::parse(report_to_json(a.report));
  EXPECT_FALSE(j.contains("entropy"));
  EXPECT_FALSE(j.contains("feller"));
  EXPECT_FALSE(j["metadata"].contains("timestamp"));
  EXPECT_EQ(j["metadata"]["schema_version"], kReportSchemaVersion);
  for (auto it = j.begin(); it != j.end(); ++it) EXPECT_FALSE(it.value().is_null()) << it.key();
}

TEST(ReportJsonTest, RejectsForeignSchema) {
  const auto a = run_audit(fair_bits(10'000, 8), fast_config());
  auto j = nlohmann::ordered_json::parse(report_to_json(a.report));
  j["metadata"]["schema_version"] = 99;
  EXPECT_THROW(report_from_json(j.dump()), FormatError);
  EXPECT_THROW(report_from_json("{"), FormatError);
}

TEST(FellerCsvTest, HeaderAndRows) {
  const auto rows = feller_table(fair_bits(100'000, 2));
  const auto csv = feller_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,alpha_ideal,alpha_extracted,relative_change,windows,no_run_windows");
  EXPECT_NE(csv.find("\n2,1.2360679774997898,,,"), std::string::npos) << csv;
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 15);
}

TEST(EmitTest, JsonAndCsvBundle) {
  const auto dir = fs::temp_directory_path() / "rngaudit_report_test";
  fs::remove_all(dir);
  const auto a = run_audit(fair_bits(100'000, 9), AuditConfig{});
  const auto json_files = emit(a, EmitFormat::json, dir / "json");
  ASSERT_EQ(json_files.size(), 1u);
  EXPECT_EQ(slurp(json_files[0]), report_to_json(a.report));

  const auto files = emit(a, EmitFormat::csv_bundle, dir / "csv");
  std::vector<std::string> names;
  for (const auto& f : files) names.push_back(f.filename().string());
  for (const char* want : {"balance.csv", "conditionals.csv", "tuples.csv", "waiting_times.csv", "feller.csv",
                           "borel.csv", "autocorrelation.csv", "entropy_scatter.csv", "entropy_bounds.csv",
                           "flags.csv"})
    EXPECT_NE(std::find(names.begin(), names.end(), want), names.end()) << want;
  const auto scatter = slurp(dir / "csv" / "entropy_scatter.csv");
  EXPECT_EQ(scatter.substr(0, scatter.find('\n')), "N,block_index,kind,one_minus_H");
  EXPECT_EQ(slurp(dir / "csv" / "feller.csv"), feller_csv(a.report.feller));
  fs::remove_all(dir);
}

}  // namespace
}  // namespace rngaudit
