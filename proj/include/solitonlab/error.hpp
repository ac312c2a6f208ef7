#pragma once

#include <stdexcept>
#include <string>

namespace solitonlab {

enum class ErrorKind {
  Domain,            // argument outside the admissible range
  GridMismatch,      // operands live on different grids
  NonFinite,         // NaN or Inf in an input or output
  Convergence,       // iterative solver exhausted its budget
  OrbitalStability,  // m'(mu) <= 0
  Placement,         // soliton tail reaches the periodic boundary
  BlowUp,            // time stepping produced a non-finite or exploding field
  ChargeDrift,       // integrity guard on the conserved charge
  DegenerateFrame,   // decomposition Jacobian is numerically singular
  Config,            // malformed or inconsistent experiment configuration
  Io,                // filesystem errors
  Format,            // malformed checkpoint or CSV data
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by iterative solvers; carries the last residual reached.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double last_residual, int iterations)
      : Error(ErrorKind::Convergence, message),
        last_residual_(last_residual),
        iterations_(iterations) {}

  double last_residual() const noexcept { return last_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

}  // namespace solitonlab
