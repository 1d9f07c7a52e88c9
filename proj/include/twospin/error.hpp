#ifndef TWOSPIN_ERROR_HPP
#define TWOSPIN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace twospin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A density matrix or Bloch vector that violates its invariants.
class InvalidState : public Error {
public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Rate matrix that is not positive semidefinite.
class InvalidRates : public Error {
public:
  using Error::Error;
};

/// Quadrature or extrapolation that did not reach its tolerance.
class NumericalFailure : public Error {
public:
  using Error::Error;
};

/// Spectrum whose mode taxonomy cannot be assigned unambiguously.
class DegenerateSpectrum : public Error {
public:
  DegenerateSpectrum(const std::string& what, double first, double second)
      : Error(what), first_candidate(first), second_candidate(second) {}
  double first_candidate;
  double second_candidate;
};

/// Generator without a complete eigenbasis.
class DefectiveSpectrum : public Error {
public:
  using Error::Error;
};

/// Adaptive integrator could not keep the step size above its floor.
class IntegrationFailure : public Error {
public:
  using Error::Error;
};

/// Coefficients of the zero-temperature state that give a non-positive matrix.
class InvalidCoefficients : public Error {
public:
  using Error::Error;
};

/// File that could not be opened or written.
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace twospin

#endif // TWOSPIN_ERROR_HPP
