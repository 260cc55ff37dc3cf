// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace adhesim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input; maps to CLI exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A material law violates one of the structural hypotheses.
class ValidationError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Numerical failure while time stepping; maps to CLI exit code 2.
class SolverError : public Error {
 public:
  using Error::Error;
};

class ResolventError : public SolverError {
 public:
  ResolventError(const std::string& what, double x, double eps, double lo, double hi)
      : SolverError(what), x_(x), eps_(eps), lo_(lo), hi_(hi) {}
  double x() const { return x_; }
  double eps() const { return eps_; }
  double bracket_lo() const { return lo_; }
  double bracket_hi() const { return hi_; }

 private:
  double x_, eps_, lo_, hi_;
};

class QuadratureError : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace adhesim
