#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skewclust {

/// Input data that cannot be used: malformed files, invalid graphs,
/// degenerate partitions.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file that failed to parse; carries the 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Iterative kernel failed to converge, or a requested spectral quantity
/// does not exist (e.g. more nonzero singular values than the rank).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace skewclust
