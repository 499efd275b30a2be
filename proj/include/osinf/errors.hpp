#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace osinf {

// Base of every error raised by the library. The C API maps each subclass to
// exactly one status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (bad k, arity
// mismatch, c <= -1/2, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Requested method or option does not apply to the given function class.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Quadrature failed to converge, or a numerically ambiguous branch was hit.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double achieved_tolerance = 0.0)
      : Error(what), achieved_tolerance_(achieved_tolerance) {}
  double achieved_tolerance() const noexcept { return achieved_tolerance_; }

 private:
  double achieved_tolerance_;
};

// Variance-normalised quantities (R^2, r) requested for a constant function.
class DegenerateVarianceError : public Error {
 public:
  using Error::Error;
};

// An evaluator produced a non-finite value during Monte-Carlo sampling.
class TaintedSampleError : public Error {
 public:
  TaintedSampleError(const std::string& what, std::vector<double> point, std::uint64_t sample_index)
      : Error(what), point_(std::move(point)), sample_index_(sample_index) {}
  const std::vector<double>& point() const noexcept { return point_; }
  std::uint64_t sample_index() const noexcept { return sample_index_; }

 private:
  std::vector<double> point_;
  std::uint64_t sample_index_;
};

// Malformed function specification document; `location` is a JSON-pointer-like path.
class SpecError : public Error {
 public:
  SpecError(const std::string& location, const std::string& message)
      : Error(location + ": " + message), location_(location) {}
  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

}  // namespace osinf
