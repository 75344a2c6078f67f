#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hydroelastic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain of an operation (h <= 0, m == n, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A field violates its declared parity beyond tolerance.
class ParityError : public Error {
 public:
  using Error::Error;
};

/// A pointwise composition produced a non-finite value on the collocation grid.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, std::size_t grid_index)
      : Error(what + " (grid index " + std::to_string(grid_index) + ")"),
        grid_index_(grid_index) {}

  std::size_t grid_index() const noexcept { return grid_index_; }

 private:
  std::size_t grid_index_;
};

/// Stretch nu collapsed (or the conformal map degenerated) somewhere on the grid.
class DegenerateProfileError : public Error {
 public:
  using Error::Error;
};

/// Energy model violates the rest-state / local convexity hypotheses.
class ModelError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Finite-difference estimate dominated by noise.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// A state that theory rules out was observed (e.g. a triple kernel).
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hydroelastic
