#pragma once

#include <stdexcept>
#include <string>

namespace sawdil {

// Base of every error thrown by the library. The CLI maps the subclasses
// onto process exit codes (see tools/sawdil_main.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Polar angle for which no ray from the origin meets the target boundary.
class NoBoundaryError : public Error {
 public:
  using Error::Error;
};

class UndefinedDilation : public Error {
 public:
  using Error::Error;
};

class WindowedOut : public Error {
 public:
  using Error::Error;
};

class CheckpointFormatError : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Density evaluated on or outside the boundary of its parameter range.
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedRegion : public Error {
 public:
  using Error::Error;
};

class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double estimate, double error_estimate)
      : Error(what), estimate_(estimate), error_estimate_(error_estimate) {}

  double estimate() const { return estimate_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

class BracketError : public Error {
 public:
  using Error::Error;
};

class BinningError : public Error {
 public:
  using Error::Error;
};

}  // namespace sawdil
