#include "rngaudit/bitstream.hpp"

#include <fstream>
#include <iterator>
#include <utility>

#include "rngaudit/errors.hpp"

namespace rngaudit {

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::file: return "file";
    case Origin::simulated: return "simulated";
    case Origin::phase_trace: return "phase-trace";
  }
  return "file";
}

BitStream::BitStream(std::vector<std::uint64_t> words, std::size_t length, Origin origin)
    : words_(std::move(words)), length_(length), origin_(origin) {
  const std::size_t needed = (length + 63) / 64;
  if (words_.size() < needed) throw BoundsError("bit length exceeds word storage");
  words_.resize(needed);
  if (length_ & 63) words_.back() &= top_bits(length_ & 63);
}

std::vector<std::uint8_t> BitStream::packed_bytes() const {
  std::vector<std::uint8_t> out((length_ + 7) / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(words_[i >> 3] >> (56 - 8 * (i & 7)));
  }
  return out;
}

BitView BitStream::view() const noexcept { return BitView(*this); }

BitView BitStream::view(std::size_t offset, std::size_t length) const {
  if (offset > length_ || length > length_ - offset) throw BoundsError("view out of range");
  return BitView(*this, offset, length);
}

BitView BitView::subview(std::size_t offset, std::size_t length) const {
  if (offset > length_ || length > length_ - offset) throw BoundsError("subview out of range");
  return BitView(*stream_, offset_ + offset, length);
}

BitStream BitView::to_stream() const {
  std::vector<std::uint64_t> words((length_ + 63) / 64);
  for (std::size_t i = 0; i < words.size(); ++i) words[i] = word_at(64 * i);
  return BitStream(std::move(words), length_, stream_ ? stream_->origin() : Origin::file);
}

void BitStreamBuilder::append(std::uint64_t bits, unsigned count) {
  if (count == 0) return;
  bits &= top_bits(count);
  const unsigned used = length_ & 63;
  if (used == 0) {
    words_.push_back(bits);
  } else {
    words_.back() |= bits >> used;
    if (used + count > 64) words_.push_back(bits << (64 - used));
  }
  length_ += count;
}

BitStream BitStreamBuilder::finish(Origin origin) && {
  return BitStream(std::move(words_), length_, origin);
}

// --- encodings -------------------------------------------------------------

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

}  // namespace

BitStream from_ascii(std::string_view text, Origin origin) {
  BitStreamBuilder b;
  b.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '0' || c == '1') {
      b.push_back(c == '1');
    } else if (!is_space(c)) {
      throw FormatError(std::string("unexpected character '") + c + "' in bit text", i);
    }
  }
  return std::move(b).finish(origin);
}

BitStream from_packed(std::span<const std::uint8_t> bytes, std::size_t length, Origin origin) {
  if (length > 8 * bytes.size()) {
    throw BoundsError("packed length " + std::to_string(length) + " exceeds " +
                      std::to_string(8 * bytes.size()) + " available bits");
  }
  const std::size_t used_bytes = (length + 7) / 8;
  std::vector<std::uint64_t> words((length + 63) / 64, 0);
  for (std::size_t i = 0; i < used_bytes; ++i) {
    words[i >> 3] |= std::uint64_t{bytes[i]} << (56 - 8 * (i & 7));
  }
  return BitStream(std::move(words), length, origin);
}

std::string to_nist_ascii(BitView bits) {
  std::string out(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[i] = '1';
  }
  return out;
}

std::vector<BitView> blocks(BitView stream, std::size_t block_size) {
  if (block_size == 0) throw ArgumentError("block size must be at least 1");
  const std::size_t count = stream.size() / block_size;
  std::vector<BitView> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(stream.subview(i * block_size, block_size));
  return out;
}

std::vector<std::uint8_t> encode_packed_file(const BitStream& bits) {
  std::vector<std::uint8_t> out(8);
  std::uint64_t n = bits.size();
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(n >> (8 * i));
  const auto payload = bits.packed_bytes();
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

BitStream decode_packed_file(std::span<const std::uint8_t> data) {
  if (data.size() < 8) throw FormatError("packed file shorter than its 8-byte header", data.size());
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n |= std::uint64_t{data[i]} << (8 * i);
  const auto payload = data.subspan(8);
  if (n > 8 * static_cast<std::uint64_t>(payload.size())) {
    throw BoundsError("packed header declares " + std::to_string(n) + " bits but payload holds " +
                      std::to_string(8 * payload.size()));
  }
  if ((n + 7) / 8 != payload.size()) {
    throw FormatError("packed payload has trailing bytes beyond the declared length", 8 + (n + 7) / 8);
  }
  return from_packed(payload, static_cast<std::size_t>(n), Origin::file);
}

// --- files -----------------------------------------------------------------

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> data(static_cast<std::size_t>(size));
  if (size > 0) in.read(reinterpret_cast<char*>(data.data()), size);
  if (!in) throw IoError("failed reading " + path.string());
  return data;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

void write_file_text(const std::filesystem::path& path, std::string_view text) {
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

BitStream load_bits(const std::filesystem::path& path, InputFormat format) {
  const auto data = read_file_bytes(path);
  const std::string_view text(reinterpret_cast<const char*>(data.data()), data.size());
  switch (format) {
    case InputFormat::ascii: return from_ascii(text);
    case InputFormat::packed: return decode_packed_file(data);
    case InputFormat::automatic: break;
  }
  if (data.size() >= 8) {
    std::uint64_t n = 0;
    for (int i = 0; i < 8; ++i) n |= std::uint64_t{data[i]} << (8 * i);
    if (n <= 8 * static_cast<std::uint64_t>(data.size()) && (n + 7) / 8 == data.size() - 8) {
      return decode_packed_file(data);
    }
  }
  return from_ascii(text);
}

void save_packed(const std::filesystem::path& path, const BitStream& bits) {
  write_file_bytes(path, encode_packed_file(bits));
}

}  // namespace rngaudit
