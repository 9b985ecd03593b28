#pragma once

#include <stdexcept>
#include <string>

namespace scanplan {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, int line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_(-1) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Filesystem-level failure (missing file, unwritable destination, ...).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Precondition violation on otherwise well-formed data (too few points,
/// invalid permutation, zero feature vector, size guards, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Geometry that admits no answer (zero-area mesh, coincident points, ...).
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

}  // namespace scanplan
