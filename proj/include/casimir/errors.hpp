#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

// Input problems: bad files, unknown names, invalid parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, int line)
      : ConfigError(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class LookupError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Target outside an achievable interval (e.g. a suspension height).
class RangeError : public ConfigError {
 public:
  RangeError(const std::string& what, double lo, double hi)
      : ConfigError(what), lo_(lo), hi_(hi) {}
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_, hi_;
};

// Numerical failures.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EvaluationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class AccuracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace casimir
