#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evq {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested size does not fit the available data.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or simulation cap would be exceeded.
class CapError : public Error {
 public:
  using Error::Error;
};

/// A pseudo-polynomial or iteration budget would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : what + " at line " + std::to_string(line)), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Invalid experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace evq
