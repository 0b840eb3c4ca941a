#pragma once

#include <stdexcept>
#include <string>

namespace owc {

/// Base class of every failure this library raises on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Water depth h = h_rest + zeta is not strictly positive.
class DryState : public Error {
 public:
  explicit DryState(double depth)
      : Error("dry state: h = " + std::to_string(depth)), depth(depth) {}
  double depth;
};

/// Subcriticality g h > q^2/h^2 fails (eigenstructure degenerates).
class CriticalFlow : public Error {
 public:
  explicit CriticalFlow(double margin)
      : Error("critical flow: g h - q^2/h^2 = " + std::to_string(margin)),
        margin(margin) {}
  double margin;
};

/// A matrix required to be invertible is numerically singular.
class Singular : public Error {
 public:
  using Error::Error;
};

/// Boundary quadratic form is not negative definite on ker M.
class NotDissipative : public Error {
 public:
  explicit NotDissipative(double kernel_min)
      : Error("kernel minimum of -v^T S A v is " + std::to_string(kernel_min)),
        kernel_min(kernel_min) {}
  double kernel_min;
};

/// A scalar closure equation has no root in the search bracket.
class NoSolution : public Error {
 public:
  using Error::Error;
};

/// Reconstructed inflow state violates subcriticality.
class SupercriticalInflow : public Error {
 public:
  using Error::Error;
};

/// Field sizes do not match the domain layout.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Time step exceeds the CFL bound.
class CflViolation : public Error {
 public:
  CflViolation(double dt, double dt_max)
      : Error("dt = " + std::to_string(dt) + " exceeds CFL bound " +
              std::to_string(dt_max)),
        dt(dt), dt_max(dt_max) {}
  double dt, dt_max;
};

/// Picard iteration failed to contract within max_iter.
class NoConvergence : public Error {
 public:
  NoConvergence(int iterations, double last_norm)
      : Error("no convergence after " + std::to_string(iterations) +
              " iterations, last low-norm difference " +
              std::to_string(last_norm)),
        iterations(iterations), last_norm(last_norm) {}
  int iterations;
  double last_norm;
};

/// Config text could not be parsed; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line(line) {}
  int line;
};

/// Config key not in the schema; carries the offending key.
class UnknownKey : public Error {
 public:
  explicit UnknownKey(const std::string& key)
      : Error("unknown key '" + key + "'"), key(key) {}
  std::string key;
};

/// Required config key absent.
class MissingKey : public Error {
 public:
  explicit MissingKey(const std::string& key)
      : Error("missing key '" + key + "'"), key(key) {}
  std::string key;
};

}  // namespace owc
