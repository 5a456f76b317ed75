#pragma once

#include <stdexcept>
#include <string>

namespace conelyap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Double description conversion exceeded the configured ray/row cap.
class RepresentationBlowup : public Error {
 public:
  using Error::Error;
};

/// LP/QP failure: iteration cap, nonconvexity, numerical breakdown.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, int iterations = 0)
      : Error(what), iterations_(iterations) {}
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

/// A mathematical invariant that must hold was observed to be violated.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace conelyap
