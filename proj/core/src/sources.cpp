#include "rngaudit/sources.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rngaudit/errors.hpp"

namespace rngaudit {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

// Maps into (-pi, pi].
double wrap_phase(double phi) {
  if (phi > -kPi && phi <= kPi) return phi;
  phi = std::remainder(phi, 2 * kPi);
  return phi <= -kPi ? phi + 2 * kPi : phi;
}

}  // namespace

double Xoshiro256StarStar::gaussian() noexcept {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2 * kPi * u2);
  have_spare_ = true;
  return r * std::cos(2 * kPi * u2);
}

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::fair: return "fair";
    case SourceKind::biased: return "biased";
    case SourceKind::markov: return "markov";
    case SourceKind::p2_toy: return "p2-toy";
  }
  return "fair";
}

SourceKind parse_source_kind(std::string_view name) {
  if (name == "fair") return SourceKind::fair;
  if (name == "biased") return SourceKind::biased;
  if (name == "markov") return SourceKind::markov;
  if (name == "p2-toy" || name == "p2_toy") return SourceKind::p2_toy;
  throw ArgumentError("unknown source kind '" + std::string(name) + "'");
}

void SourceConfig::validate() const {
  if (!is_probability(p1) || !is_probability(p_1_given_0) || !is_probability(p_1_given_1)) {
    throw ArgumentError("source probabilities must lie in [0, 1]");
  }
  if (!(phase_sigma > 0.0) || !std::isfinite(phase_sigma)) throw ArgumentError("phase_sigma must be positive");
  if (!(control_bias_amplitude >= 0.0 && control_bias_amplitude <= 1.0)) {
    throw ArgumentError("control_bias_amplitude must lie in [0, 1]");
  }
}

BitStream generate_bits(const SourceConfig& cfg) {
  cfg.validate();
  Xoshiro256StarStar rng(cfg.seed);
  const std::uint64_t n = cfg.n;
  switch (cfg.kind) {
    case SourceKind::fair: {
      std::vector<std::uint64_t> words((n + 63) / 64);
      for (auto& w : words) w = rng();
      return BitStream(std::move(words), n, Origin::simulated);
    }
    case SourceKind::biased: {
      BitStreamBuilder b;
      b.reserve(n);
      for (std::uint64_t i = 0; i < n; ++i) b.push_back(rng.uniform() < cfg.p1);
      return std::move(b).finish(Origin::simulated);
    }
    case SourceKind::markov: {
      // Stationary start: pi1 = P(0->1) / (P(0->1) + P(1->0)).
      const double up = cfg.p_1_given_0;
      const double down = 1.0 - cfg.p_1_given_1;
      const double pi1 = (up + down) > 0.0 ? up / (up + down) : 0.5;
      BitStreamBuilder b;
      b.reserve(n);
      bool prev = false;
      for (std::uint64_t i = 0; i < n; ++i) {
        const double p = i == 0 ? pi1 : (prev ? cfg.p_1_given_1 : cfg.p_1_given_0);
        prev = rng.uniform() < p;
        b.push_back(prev);
      }
      return std::move(b).finish(Origin::simulated);
    }
    case SourceKind::p2_toy:
      throw ArgumentError("p2_toy produces a phase trace; use generate_phase_trace");
  }
  throw ArgumentError("unknown source kind");
}

P2Sample generate_p2_toy(const SourceConfig& cfg) {
  if (cfg.kind != SourceKind::p2_toy) throw ArgumentError("generate_phase_trace requires kind p2_toy");
  cfg.validate();
  Xoshiro256StarStar rng(cfg.seed);
  const double amp = cfg.control_bias_amplitude;

  std::vector<PhaseEntry> entries;
  entries.reserve(cfg.n);
  BitStreamBuilder signs;
  signs.reserve(cfg.n);
  for (std::uint64_t i = 0; i < cfg.n; ++i) {
    // Control phase: density proportional to 1 + amp * cos(2 phi) on
    // (-pi, pi], sampled by rejection.
    double control;
    do {
      control = kPi - 2 * kPi * rng.uniform();
    } while (amp > 0.0 && rng.uniform() * (1.0 + amp) > 1.0 + amp * std::cos(2 * control));

    const bool up = (rng() >> 63) != 0;
    const double toss = wrap_phase((up ? kPi / 2 : -kPi / 2) + cfg.phase_sigma * rng.gaussian());
    entries.push_back({i, control, toss});
    signs.push_back(up);
  }
  return {PhaseTrace(std::move(entries)), std::move(signs).finish(Origin::simulated)};
}

PhaseTrace generate_phase_trace(const SourceConfig& cfg) { return generate_p2_toy(cfg).trace; }

BitStream fair_bits(std::uint64_t n, std::uint64_t seed) {
  SourceConfig cfg;
  cfg.kind = SourceKind::fair;
  cfg.n = n;
  cfg.seed = seed;
  return generate_bits(cfg);
}

}  // namespace rngaudit
