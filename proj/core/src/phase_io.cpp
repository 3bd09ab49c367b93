#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <utility>

#include "rngaudit/bitstream.hpp"
#include "rngaudit/errors.hpp"

namespace rngaudit {

namespace {

constexpr double kPi = std::numbers::pi;

bool in_phase_range(double phi) { return phi > -kPi && phi <= kPi; }

struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double stddev() const { return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0; }
};

}  // namespace

PhaseTrace::PhaseTrace(std::vector<PhaseEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (!in_phase_range(e.control_phase) || !in_phase_range(e.toss_phase)) {
      throw ArgumentError("phase outside (-pi, pi] at entry " + std::to_string(i));
    }
    if (i > 0 && e.index <= entries_[i - 1].index) {
      throw ArgumentError("phase trace indices must strictly increase (entry " + std::to_string(i) + ")");
    }
  }
}

void ThresholdConfig::validate() const {
  if (!(min_separation_sigmas > 0.0)) throw ArgumentError("min_separation_sigmas must be positive");
  if (!(guard_band >= 0.0)) throw ArgumentError("guard_band must be non-negative");
  if (!std::isfinite(threshold_phase)) throw ArgumentError("threshold_phase must be finite");
}

IngestReport from_phase_trace(const PhaseTrace& trace, const ThresholdConfig& cfg) {
  cfg.validate();
  if (trace.empty()) throw ArgumentError("phase trace is empty");

  IngestReport report;
  BitStreamBuilder bits;
  bits.reserve(trace.size());
  Moments cls[2];
  for (const auto& e : trace.entries()) {
    const double d = e.toss_phase - cfg.threshold_phase;
    if (std::abs(d) <= cfg.guard_band || d == 0.0) {
      ++report.ambiguous_count;
      continue;
    }
    const bool one = d > 0.0;
    bits.push_back(one);
    cls[one].add(e.toss_phase);
  }
  if (bits.size() == 0) throw DegenerateError("every toss phase falls inside the guard band");

  report.bits = std::move(bits).finish(Origin::phase_trace);
  if (cls[0].n) report.center0 = cls[0].mean;
  if (cls[1].n) report.center1 = cls[1].mean;
  report.cluster_width_sigma = std::max(cls[0].stddev(), cls[1].stddev());
  if (report.center0 && report.center1 && report.cluster_width_sigma > 0.0) {
    report.separation_sigmas = std::abs(*report.center1 - *report.center0) / report.cluster_width_sigma;
  }
  return report;
}

// --- CSV -------------------------------------------------------------------

namespace {

constexpr std::string_view kHeader = "index,control_phase_rad,toss_phase_rad";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_field(std::string_view field, std::size_t line) {
  field = trim(field);
  T value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw FormatError("bad numeric field '" + std::string(field) + "'", line);
  }
  return value;
}

}  // namespace

// Offsets reported in FormatError are 1-based line numbers.
PhaseTrace parse_phase_csv(std::string_view text) {
  std::vector<PhaseEntry> entries;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kHeader) throw FormatError("expected header '" + std::string(kHeader) + "'", line_no);
      saw_header = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      throw FormatError("expected three comma-separated fields", line_no);
    }
    PhaseEntry e;
    e.index = parse_field<std::uint64_t>(line.substr(0, c1), line_no);
    e.control_phase = parse_field<double>(line.substr(c1 + 1, c2 - c1 - 1), line_no);
    e.toss_phase = parse_field<double>(line.substr(c2 + 1), line_no);
    entries.push_back(e);
  }
  if (!saw_header) throw FormatError("missing phase CSV header", line_no);
  return PhaseTrace(std::move(entries));
}

std::string format_phase_csv(const PhaseTrace& trace) {
  std::string out(kHeader);
  out += '\n';
  char buf[96];
  for (const auto& e : trace.entries()) {
    const int n = std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g\n",
                                static_cast<unsigned long long>(e.index), e.control_phase, e.toss_phase);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

}  // namespace rngaudit
