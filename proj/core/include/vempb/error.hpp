#pragma once

#include <stdexcept>
#include <string>

namespace vempb {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid mesh topology or geometry (dangling indices, open cells, inverted orientation).
class MeshError : public Error {
 public:
  explicit MeshError(const std::string& message, int cell = -1) : Error(message), cell_(cell) {}

  /// Index of the offending cell, or -1 when the error is not tied to a cell.
  int cell() const noexcept { return cell_; }

 private:
  int cell_;
};

/// Malformed input file; carries the 1-based line number of the offending record.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Evaluation of the Coulomb part at (or numerically at) a point charge.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// sinh/cosh argument left the representable range; the caller should damp.
class DivergedStateError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failure (CG or Newton).
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vempb
