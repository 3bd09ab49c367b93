#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rngaudit {

enum class Origin { file, simulated, phase_trace };

std::string_view to_string(Origin origin);

class BitView;

// Immutable packed sequence of tosses.
//
// Bits are stored in 64-bit words, bit i living in word i / 64 at bit
// position 63 - i % 64 (MSB-first). Serialized to octets this is exactly the
// MSB-first-within-each-byte layout of the packed file format. Pad bits past
// size() are always zero.
class BitStream {
 public:
  BitStream() = default;

  // Takes ownership of `words`; bits past `length` are cleared. Throws
  // BoundsError if `words` is too short to hold `length` bits.
  BitStream(std::vector<std::uint64_t> words, std::size_t length, Origin origin = Origin::file);

  std::size_t size() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }
  Origin origin() const noexcept { return origin_; }

  bool operator[](std::size_t i) const noexcept {
    return (words_[i >> 6] >> (63 - (i & 63))) & 1u;
  }

  // 64 bits starting at bit `pos`, first bit in the MSB. Positions at or
  // past size() read as zero.
  std::uint64_t word_at(std::size_t pos) const noexcept {
    const std::size_t w = pos >> 6;
    const unsigned shift = pos & 63;
    if (w >= words_.size()) return 0;
    std::uint64_t out = words_[w] << shift;
    if (shift != 0 && w + 1 < words_.size()) out |= words_[w + 1] >> (64 - shift);
    return out;
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  // ceil(size() / 8) octets, MSB-first.
  std::vector<std::uint8_t> packed_bytes() const;

  BitView view() const noexcept;
  BitView view(std::size_t offset, std::size_t length) const;

  // Equality is over the bit content and length; provenance is ignored.
  friend bool operator==(const BitStream& a, const BitStream& b) noexcept {
    return a.length_ == b.length_ && a.words_ == b.words_;
  }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t length_ = 0;
  Origin origin_ = Origin::file;
};

// Non-owning window [offset, offset + size) into a BitStream. The stream must
// outlive the view.
class BitView {
 public:
  BitView() = default;
  BitView(const BitStream& s) noexcept : stream_(&s), offset_(0), length_(s.size()) {}  // NOLINT
  BitView(const BitStream& s, std::size_t offset, std::size_t length) noexcept
      : stream_(&s), offset_(offset), length_(length) {}

  std::size_t size() const noexcept { return length_; }
  std::size_t offset() const noexcept { return offset_; }
  bool empty() const noexcept { return length_ == 0; }

  bool operator[](std::size_t i) const noexcept { return (*stream_)[offset_ + i]; }

  // Like BitStream::word_at, but bits past the end of the view read as zero.
  std::uint64_t word_at(std::size_t pos) const noexcept {
    if (pos >= length_) return 0;
    const std::uint64_t w = stream_->word_at(offset_ + pos);
    const std::size_t remaining = length_ - pos;
    return remaining >= 64 ? w : w & ~(~std::uint64_t{0} >> remaining);
  }

  BitView subview(std::size_t offset, std::size_t length) const;

  BitStream to_stream() const;

 private:
  const BitStream* stream_ = nullptr;
  std::size_t offset_ = 0;
  std::size_t length_ = 0;
};

// Mask selecting the top `n` bits of a word (n in [0, 64]).
constexpr std::uint64_t top_bits(std::size_t n) noexcept {
  return n >= 64 ? ~std::uint64_t{0} : ~(~std::uint64_t{0} >> n);
}

// Incremental construction of a BitStream.
class BitStreamBuilder {
 public:
  void reserve(std::size_t bits) { words_.reserve((bits + 63) / 64); }

  void push_back(bool bit) {
    if ((length_ & 63) == 0) words_.push_back(0);
    if (bit) words_.back() |= std::uint64_t{1} << (63 - (length_ & 63));
    ++length_;
  }

  // Appends the top `count` bits of `bits` (count <= 64).
  void append(std::uint64_t bits, unsigned count);

  std::size_t size() const noexcept { return length_; }

  BitStream finish(Origin origin) &&;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t length_ = 0;
};

struct PhaseEntry {
  std::uint64_t index = 0;
  double control_phase = 0.0;  // radians, (-pi, pi]
  double toss_phase = 0.0;     // radians, (-pi, pi]

  friend bool operator==(const PhaseEntry&, const PhaseEntry&) = default;
};

// Paired control/toss phase measurements. Construction validates that every
// phase lies in (-pi, pi] and that indices strictly increase.
class PhaseTrace {
 public:
  PhaseTrace() = default;
  explicit PhaseTrace(std::vector<PhaseEntry> entries);

  std::span<const PhaseEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  friend bool operator==(const PhaseTrace&, const PhaseTrace&) = default;

 private:
  std::vector<PhaseEntry> entries_;
};

struct ThresholdConfig {
  double threshold_phase = 0.0;
  double min_separation_sigmas = 400.0;
  // Half-width around the threshold inside which a toss phase is ambiguous.
  double guard_band = 0.1;

  void validate() const;
};

struct IngestReport {
  BitStream bits;
  std::uint64_t ambiguous_count = 0;
  // Mean toss phase of the 0 and 1 classes; absent when a class is empty.
  std::optional<double> center0;
  std::optional<double> center1;
  // Largest of the two per-class standard deviations.
  double cluster_width_sigma = 0.0;
  // |center1 - center0| / cluster_width_sigma; absent when undefined.
  std::optional<double> separation_sigmas;

  bool separation_ok(const ThresholdConfig& cfg) const {
    return separation_sigmas && *separation_sigmas > cfg.min_separation_sigmas;
  }
};

BitStream from_ascii(std::string_view text, Origin origin = Origin::file);
BitStream from_packed(std::span<const std::uint8_t> bytes, std::size_t length,
                      Origin origin = Origin::file);
IngestReport from_phase_trace(const PhaseTrace& trace, const ThresholdConfig& cfg = {});

std::string to_nist_ascii(BitView bits);

// floor(size / block_size) consecutive non-overlapping blocks.
std::vector<BitView> blocks(BitView stream, std::size_t block_size);

// --- file formats --------------------------------------------------------

// 8-byte little-endian bit count followed by MSB-first payload.
std::vector<std::uint8_t> encode_packed_file(const BitStream& bits);
BitStream decode_packed_file(std::span<const std::uint8_t> data);

PhaseTrace parse_phase_csv(std::string_view text);
std::string format_phase_csv(const PhaseTrace& trace);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> data);
void write_file_text(const std::filesystem::path& path, std::string_view text);

enum class InputFormat { automatic, ascii, packed };

// Packed if the size matches the header exactly, otherwise ASCII.
BitStream load_bits(const std::filesystem::path& path, InputFormat format = InputFormat::automatic);
void save_packed(const std::filesystem::path& path, const BitStream& bits);

}  // namespace rngaudit
