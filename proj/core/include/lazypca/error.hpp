#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lazypca {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Shapes do not line up (multiply, stack, apply, config vs. matrix, ...).
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

// Invalid argument values (k < 1, density outside (0,1], empty block list, ...).
class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(const std::string& what) : Error(what) {}
};

// A factorization hit numerical rank deficiency. `index` identifies the offending
// column (QR), eigenvalue position (truncated SVD), or slice (streaming); -1 if n/a.
class RankDeficiencyError : public Error {
 public:
  RankDeficiencyError(const std::string& what, std::int64_t index = -1)
      : Error(what), index_(index) {}
  std::int64_t index() const { return index_; }

 private:
  std::int64_t index_;
};

// An iteration failed to reach its tolerance within the iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_gap = 0.0)
      : Error(what), last_gap_(last_gap) {}
  double last_gap() const { return last_gap_; }

 private:
  double last_gap_;
};

// Malformed input file. `line` is 1-based; 0 when the failure is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::int64_t line = 0) : Error(what), line_(line) {}
  std::int64_t line() const { return line_; }

 private:
  std::int64_t line_;
};

}  // namespace lazypca
