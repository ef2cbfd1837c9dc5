#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace mebench {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Frame/block geometry does not fit (non-divisible dimensions, invalid
// candidate, mismatched motion field).
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Parameter or configuration outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed or unsupported input stream. Carries the byte offset at which
// the problem was detected when one is meaningful.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::optional<std::uint64_t> offset = std::nullopt)
      : Error(offset ? what + " (at byte offset " + std::to_string(*offset) + ")" : what),
        offset_(offset) {}

  std::optional<std::uint64_t> offset() const noexcept { return offset_; }

 private:
  std::optional<std::uint64_t> offset_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mebench
