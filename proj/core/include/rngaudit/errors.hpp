#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rngaudit {

// Base of every error raised by the library. Callers that only need a message
// can catch this; the subclasses distinguish the failure class.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual or binary input. `offset` is a character/byte/line
// position in the input, depending on the reader.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Input is well-formed but a statistic is undefined on it (a symbol never
// occurs, every phase is ambiguous, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// A numeric parameter combination lies outside the domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rngaudit
