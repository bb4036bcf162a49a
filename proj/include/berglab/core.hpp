#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace berglab {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (a radius outside [0,1), a point outside the disk, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Parameters are inconsistent with each other (s > r for a lattice,
/// p <= q for an l^{pq/(p-q)} quantity, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not reach its accuracy target.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, std::size_t required_terms = 0)
      : Error(what), required_terms_(required_terms) {}

  /// Truncation length that would satisfy the target, when known.
  std::size_t required_terms() const { return required_terms_; }

 private:
  std::size_t required_terms_;
};

/// Malformed scenario or object specification.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace berglab
