#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

#include "rngaudit/bitstream.hpp"

namespace rngaudit {

// SplitMix64 (Steele, Lea, Flood 2014). Used only to expand a 64-bit seed
// into xoshiro state.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// xoshiro256** 1.0 (Blackman, Vigna). Satisfies UniformRandomBitGenerator.
// The output sequence for a given seed is fixed everywhere, which is what
// makes the simulated controls reproducible.
class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Xoshiro256StarStar(std::uint64_t seed) noexcept {
    SplitMix64 sm(seed);
    for (auto& s : s_) s = sm();
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller on two uniforms. std::normal_distribution
  // is not specified bit-for-bit, so it is avoided here.
  double gaussian() noexcept;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
  bool have_spare_ = false;
  double spare_ = 0.0;
};

enum class SourceKind { fair, biased, markov, p2_toy };

std::string_view to_string(SourceKind kind);
SourceKind parse_source_kind(std::string_view name);

struct SourceConfig {
  SourceKind kind = SourceKind::fair;
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  double p1 = 0.5;             // biased
  double p_1_given_0 = 0.5;    // markov
  double p_1_given_1 = 0.5;    // markov
  double phase_sigma = 0.0023; // p2_toy, radians
  // p2_toy: relative amplitude of the sinusoidal control-phase density
  // perturbation, in [0, 1].
  double control_bias_amplitude = 0.05;

  void validate() const;
};

BitStream generate_bits(const SourceConfig& cfg);

struct P2Sample {
  PhaseTrace trace;
  BitStream signs;  // 1 where the toss phase was drawn around +pi/2
};

P2Sample generate_p2_toy(const SourceConfig& cfg);
PhaseTrace generate_phase_trace(const SourceConfig& cfg);

// Shorthand used throughout the tests and the CLI.
BitStream fair_bits(std::uint64_t n, std::uint64_t seed);

}  // namespace rngaudit
