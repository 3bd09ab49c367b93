// rng-audit: command-line front end for the rngaudit library.
//
// Exit status: 0 ran clean, 2 anomaly flags raised, 1 error.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "rngaudit/rngaudit.hpp"

namespace fs = std::filesystem;
using namespace rngaudit;

namespace {

constexpr int kExitClean = 0;
constexpr int kExitError = 1;
constexpr int kExitFlags = 2;

struct Globals {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string format = "json";
  std::string threads = "1";
  std::optional<std::string> timestamp;
};

unsigned resolve_threads(const std::string& text) {
  if (text == "auto") return std::max(1u, std::thread::hardware_concurrency());
  unsigned k = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (ec != std::errc{} || p != text.data() + text.size() || k == 0)
    throw ArgumentError("--threads expects 'auto' or a positive integer, got '" + text + "'");
  return k;
}

double parse_number(const std::string& text) {
  // "a^b" for powers such as 2^-100; otherwise any floating literal.
  if (const auto caret = text.find('^'); caret != std::string::npos) {
    return std::pow(parse_number(text.substr(0, caret)), parse_number(text.substr(caret + 1)));
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw ArgumentError("not a number: '" + text + "'");
  return v;
}

// Block sizes may be written 1e4 or 10000.
std::uint64_t parse_count(const std::string& text) {
  const double v = parse_number(text);
  if (!(v >= 1) || v > 1e18 || v != std::floor(v)) throw ArgumentError("not a positive count: '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

std::vector<std::uint64_t> parse_counts(const std::vector<std::string>& items) {
  std::vector<std::uint64_t> out;
  for (const auto& s : items) out.push_back(parse_count(s));
  return out;
}

InputFormat parse_input_format(const std::string& s) {
  if (s == "auto") return InputFormat::automatic;
  if (s == "ascii") return InputFormat::ascii;
  if (s == "packed") return InputFormat::packed;
  throw ArgumentError("unknown input format '" + s + "'");
}

EmitFormat emit_format(const Globals& g) {
  if (g.format == "json") return EmitFormat::json;
  if (g.format == "csv") return EmitFormat::csv_bundle;
  throw ArgumentError("--format expects json or csv");
}

// Options shared by every analysis subcommand.
struct AnalysisArgs {
  std::string input;
  std::string input_format = "auto";
  std::vector<std::string> blocks;
  std::size_t max_lag = 100;
  std::vector<unsigned> borel_ms = {1, 2, 3, 4};
  std::vector<std::string> patterns = {"01", "10", "00", "11"};
  std::uint64_t window = 400;
  unsigned k_min = 2;
  unsigned k_max = 15;
  std::string mode = "ones";
  std::vector<double> bounds = {1.0, 11.5};
  std::string epsilon = "2^-100";
  double flag_sigma = 11.5;
  bool strict = false;
  bool no_feller = false;
};

void add_input(CLI::App* cmd, AnalysisArgs& a) {
  cmd->add_option("input", a.input, "Bit file (ASCII '0'/'1' or packed)")->required();
  cmd->add_option("--input-format", a.input_format, "auto|ascii|packed")->capture_default_str();
  cmd->add_option("--flag-sigma", a.flag_sigma, "Flag threshold in standard deviations")->capture_default_str();
  cmd->add_flag("--strict", a.strict, "Exploratory 5 sigma flag threshold");
}

void add_stats_options(CLI::App* cmd, AnalysisArgs& a) {
  cmd->add_option("--blocks", a.blocks, "Block sizes, e.g. 1e2,1e3")->delimiter(',');
  cmd->add_option("--max-lag", a.max_lag, "Largest autocorrelation lag")->capture_default_str();
  cmd->add_option("--borel-m", a.borel_ms, "Borel word lengths")->delimiter(',')->capture_default_str();
  cmd->add_option("--patterns", a.patterns, "Waiting-time patterns")->delimiter(',')->capture_default_str();
}

void add_feller_options(CLI::App* cmd, AnalysisArgs& a) {
  cmd->add_option("--window", a.window, "Window length n")->capture_default_str();
  cmd->add_option("--k-min", a.k_min)->capture_default_str();
  cmd->add_option("--k-max", a.k_max)->capture_default_str();
  cmd->add_option("--mode", a.mode, "ones|either")->capture_default_str();
}

void add_entropy_options(CLI::App* cmd, AnalysisArgs& a, bool with_blocks) {
  if (with_blocks) cmd->add_option("--blocks", a.blocks, "Block sizes, e.g. 1e2,1e3")->delimiter(',');
  cmd->add_option("--bounds", a.bounds, "Sigma multiples for bound curves")->delimiter(',')->capture_default_str();
  cmd->add_option("--epsilon", a.epsilon, "Outlier probability, e.g. 2^-100")->capture_default_str();
}

AuditConfig make_config(const AnalysisArgs& a, const Globals& g) {
  AuditConfig cfg;
  cfg.input_name = a.input;
  cfg.timestamp = g.timestamp;
  cfg.block_sizes = parse_counts(a.blocks);
  cfg.max_lag = a.max_lag;
  cfg.borel_ms = a.borel_ms;
  cfg.patterns = a.patterns;
  cfg.feller.window = a.window;
  cfg.feller.k_min = a.k_min;
  cfg.feller.k_max = a.k_max;
  cfg.feller.mode = parse_run_mode(a.mode);
  cfg.bound_sigmas = a.bounds;
  cfg.epsilon = parse_number(a.epsilon);
  cfg.threshold_sigma = a.strict ? 5.0 : a.flag_sigma;
  cfg.threads = resolve_threads(g.threads);
  return cfg;
}

int run_and_emit(const AnalysisArgs& a, const Globals& g, AuditConfig cfg) {
  const BitStream bits = load_bits(a.input, parse_input_format(a.input_format));
  // The all-in-one audit just skips the table on short inputs; asking for it alone is an error.
  if (cfg.run_feller && !cfg.run_stats && !cfg.run_entropy && bits.size() < cfg.feller.window)
    throw ArgumentError("window " + std::to_string(cfg.feller.window) + " exceeds stream length " +
                        std::to_string(bits.size()));
  const Audit audit = run_audit(bits, cfg);
  for (const auto& path : emit(audit, emit_format(g), g.out_dir)) std::cout << path.string() << "\n";
  for (const auto& f : audit.report.flags) {
    std::fprintf(stderr, "flag: %s observed %.10g expected %.10g (%.2f sigma > %.2f)\n", f.statistic.c_str(),
                 f.observed, f.expected, f.sigma_distance, f.threshold_sigma);
  }
  return audit.report.flags.empty() ? kExitClean : kExitFlags;
}

struct IngestArgs {
  std::string input;
  std::string format = "phase-csv";
  std::string out;
  double threshold = 0.0;
  double guard = 0.1;
  double min_separation = 400.0;
};

int run_ingest(const IngestArgs& a) {
  if (a.format == "ascii" || a.format == "packed") {
    const auto bits = load_bits(a.input, parse_input_format(a.format));
    save_packed(a.out, bits);
    std::cout << "bits " << bits.size() << "\n";
    return kExitClean;
  }
  if (a.format != "phase-csv") throw ArgumentError("--format expects ascii, packed or phase-csv");
  const auto bytes = read_file_bytes(a.input);
  const auto trace = parse_phase_csv(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  ThresholdConfig th;
  th.threshold_phase = a.threshold;
  th.guard_band = a.guard;
  th.min_separation_sigmas = a.min_separation;
  const auto r = from_phase_trace(trace, th);
  save_packed(a.out, r.bits);
  std::printf("entries %zu\nbits %zu\nambiguous %llu\n", trace.size(), r.bits.size(),
              static_cast<unsigned long long>(r.ambiguous_count));
  if (r.center0) std::printf("center0 %.17g\n", *r.center0);
  if (r.center1) std::printf("center1 %.17g\n", *r.center1);
  std::printf("cluster_width_sigma %.17g\n", r.cluster_width_sigma);
  if (r.separation_sigmas) std::printf("separation_sigmas %.17g\n", *r.separation_sigmas);
  if (!r.separation_ok(th) || r.ambiguous_count > 0) {
    std::fprintf(stderr, "flag: phase classes not separated by more than %.1f sigma or ambiguous tosses present\n",
                 th.min_separation_sigmas);
    return kExitFlags;
  }
  return kExitClean;
}

struct SimulateArgs {
  std::string kind = "fair";
  std::string n = "1e6";
  double p1 = 0.5;
  double p10 = 0.5;
  double p11 = 0.5;
  double phase_sigma = 0.0023;
  double control_bias = 0.05;
  std::string out;
  bool ascii = false;
};

int run_simulate(const SimulateArgs& a, const Globals& g) {
  SourceConfig cfg;
  cfg.kind = parse_source_kind(a.kind);
  cfg.seed = g.seed;
  cfg.n = a.n == "0" ? 0 : parse_count(a.n);
  cfg.p1 = a.p1;
  cfg.p_1_given_0 = a.p10;
  cfg.p_1_given_1 = a.p11;
  cfg.phase_sigma = a.phase_sigma;
  cfg.control_bias_amplitude = a.control_bias;
  fs::path out = a.out;
  if (cfg.kind == SourceKind::p2_toy) {
    if (out.empty()) out = fs::path(g.out_dir) / "trace.csv";
    write_file_text(out, format_phase_csv(generate_phase_trace(cfg)));
  } else {
    if (out.empty()) out = fs::path(g.out_dir) / (a.ascii ? "bits.txt" : "bits.bin");
    const auto bits = generate_bits(cfg);
    if (a.ascii) {
      write_file_text(out, to_nist_ascii(bits) + "\n");
    } else {
      save_packed(out, bits);
    }
  }
  std::cout << out.string() << "\n";
  return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audit binary random-number streams"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolVersion));

  Globals g;
  app.add_option("--seed", g.seed, "Seed for simulated sources")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Directory for reports")->capture_default_str();
  app.add_option("--format", g.format, "Report format: json|csv")->capture_default_str();
  app.add_option("--threads", g.threads, "auto or a worker count")->capture_default_str();
  app.add_option("--timestamp", g.timestamp, "Timestamp recorded in report metadata");

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Convert ASCII, packed or phase-trace input to a packed file");
  ingest_cmd->add_option("input", ingest.input)->required();
  ingest_cmd->add_option("--format", ingest.format, "ascii|packed|phase-csv")->capture_default_str();
  ingest_cmd->add_option("--out", ingest.out, "Packed output file")->required();
  ingest_cmd->add_option("--threshold", ingest.threshold, "Threshold phase (rad)")->capture_default_str();
  ingest_cmd->add_option("--guard", ingest.guard, "Guard band half-width (rad)")->capture_default_str();
  ingest_cmd->add_option("--min-separation", ingest.min_separation, "Required class separation (sigma)")
      ->capture_default_str();

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Write a seeded simulated bit stream or phase trace");
  sim_cmd->add_option("--kind", sim.kind, "fair|biased|markov|p2-toy")->capture_default_str();
  sim_cmd->add_option("--n", sim.n, "Number of tosses")->capture_default_str();
  sim_cmd->add_option("--p1", sim.p1, "P(1) for biased")->capture_default_str();
  sim_cmd->add_option("--p10", sim.p10, "P(1|0) for markov")->capture_default_str();
  sim_cmd->add_option("--p11", sim.p11, "P(1|1) for markov")->capture_default_str();
  sim_cmd->add_option("--phase-sigma", sim.phase_sigma, "Toss phase width (rad)")->capture_default_str();
  sim_cmd->add_option("--control-bias", sim.control_bias, "Control phase density amplitude")->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "Output file");
  sim_cmd->add_flag("--ascii", sim.ascii, "Write ASCII instead of packed");

  AnalysisArgs an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Balance, tuples, conditionals, autocorrelation, waiting times, Borel");
  add_input(analyze_cmd, an);
  add_stats_options(analyze_cmd, an);

  AnalysisArgs fe;
  auto* feller_cmd = app.add_subcommand("feller", "Coin-tossing constant table");
  add_input(feller_cmd, fe);
  add_feller_options(feller_cmd, fe);

  AnalysisArgs en;
  auto* entropy_cmd = app.add_subcommand("entropy", "Blockwise Shannon and min-entropy with bound curves");
  add_input(entropy_cmd, en);
  add_entropy_options(entropy_cmd, en, true);

  AnalysisArgs au;
  auto* audit_cmd = app.add_subcommand("audit", "Every analysis in one report");
  add_input(audit_cmd, au);
  add_stats_options(audit_cmd, au);
  add_feller_options(audit_cmd, au);
  add_entropy_options(audit_cmd, au, false);
  audit_cmd->add_flag("--no-feller", au.no_feller, "Skip the coin-tossing constant extraction");

  std::string nist_in, nist_out, nist_format = "auto";
  auto* nist_cmd = app.add_subcommand("export-nist", "Write headerless ASCII for external test suites");
  nist_cmd->add_option("input", nist_in)->required();
  nist_cmd->add_option("--out", nist_out, "ASCII output file")->required();
  nist_cmd->add_option("--input-format", nist_format, "auto|ascii|packed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitClean : kExitError;
  }

  try {
    if (*ingest_cmd) return run_ingest(ingest);
    if (*sim_cmd) return run_simulate(sim, g);
    if (*analyze_cmd) {
      auto cfg = make_config(an, g);
      cfg.run_entropy = cfg.run_feller = false;
      return run_and_emit(an, g, cfg);
    }
    if (*feller_cmd) {
      auto cfg = make_config(fe, g);
      cfg.run_stats = cfg.run_entropy = false;
      return run_and_emit(fe, g, cfg);
    }
    if (*entropy_cmd) {
      auto cfg = make_config(en, g);
      cfg.run_stats = cfg.run_feller = false;
      return run_and_emit(en, g, cfg);
    }
    if (*audit_cmd) {
      auto cfg = make_config(au, g);
      cfg.run_feller = !au.no_feller;
      return run_and_emit(au, g, cfg);
    }
    if (*nist_cmd) {
      write_file_text(nist_out, to_nist_ascii(load_bits(nist_in, parse_input_format(nist_format))));
      return kExitClean;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rng-audit: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
