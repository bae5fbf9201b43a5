#pragma once

#include <stdexcept>
#include <string>

namespace fermass {

/// Operand shapes do not agree.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An input violates an algebraic invariant (anti-Hermiticity, closure, ...).
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VacuumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimizer stopped at a critical point with a negative transversal Hessian eigenvalue.
class SaddleConverged : public VacuumError {
 public:
  using VacuumError::VacuumError;
};

/// Transversal Hessian has a zero eigenvalue; the vacuum is not isolated modulo the orbit.
class DegenerateVacuum : public VacuumError {
 public:
  using VacuumError::VacuumError;
};

class NonConvergence : public VacuumError {
 public:
  using VacuumError::VacuumError;
};

class BlockStructureViolation : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class LemmaViolation : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class NotMultiplicationOperator : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class NonHermitian : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class NonUnitary : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

/// Malformed or inconsistent model file. Carries the source location when known.
class ModelError : public std::runtime_error {
 public:
  ModelError(const std::string& msg, int line = -1)
      : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace fermass
