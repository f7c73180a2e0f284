#pragma once

#include <stdexcept>
#include <string>

namespace rf {

/// Malformed scenario/config input. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base for binary artifact decoding failures.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VersionError : public FormatError {
 public:
  VersionError(const std::string& what, unsigned found, unsigned expected)
      : FormatError(what), found_(found), expected_(expected) {}
  unsigned found() const { return found_; }
  unsigned expected() const { return expected_; }

 private:
  unsigned found_;
  unsigned expected_;
};

class ChecksumError : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace rf
