#pragma once

#include <stdexcept>
#include <string>

namespace fkdv {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid, configuration key, or parameter outside its admissible range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operation applied outside its mathematical domain (e.g. negative-order
/// derivative of a field with nonzero mean).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or overflow.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double last_good_time = 0.0)
      : Error(what), last_good_time_(last_good_time) {}
  double last_good_time() const { return last_good_time_; }

 private:
  double last_good_time_;
};

/// Time step rejected by the CFL re-check.
class StepError : public Error {
 public:
  StepError(const std::string& what, double suggested_dt)
      : Error(what), suggested_dt_(suggested_dt) {}
  double suggested_dt() const { return suggested_dt_; }

 private:
  double suggested_dt_;
};

/// Duhamel fixed-point iterates grew instead of contracting.
class OracleDivergence : public Error {
 public:
  using Error::Error;
};

/// Stein-derivative evaluation requested where the integral is infinite.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Probe inputs whose normalising denominator vanishes.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Filesystem failures, always carrying the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

std::string format_double(double v);

}  // namespace fkdv
