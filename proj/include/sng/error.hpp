#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sng {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid, parameter, or packet geometry.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Caller violated an operation's contract (mismatched grids, bad labels...).
class UsageError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Löwdin orthonormalization of a (nearly) linearly dependent mode set.
class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// Indefinite Gram matrix handed to the branch factorization.
class NumericalInputError : public Error {
 public:
  using Error::Error;
};

/// The time step does not resolve the per-step phase advance.
class StepSizeError : public Error {
 public:
  StepSizeError(const std::string& what, double suggested_dt)
      : Error(what), suggested_dt_(suggested_dt) {}
  double suggested_dt() const noexcept { return suggested_dt_; }

 private:
  double suggested_dt_;
};

/// Non-finite amplitudes detected after a step.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Config document error with location context.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, std::string section)
      : Error(what), line_(line), section_(std::move(section)) {}
  int line() const noexcept { return line_; }
  const std::string& section() const noexcept { return section_; }

 private:
  int line_;
  std::string section_;
};

}  // namespace sng
