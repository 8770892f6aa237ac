#ifndef WSSPEC_ERRORS_HPP
#define WSSPEC_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace wsspec {

/// Base for every numerical failure raised by the library. Argument
/// validation failures use std::invalid_argument instead.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Potential evaluated within 1e-300 of a pole of 1 + q e^{2 alpha x}.
class PoleProximityError : public Error {
public:
  using Error::Error;
};

/// The NU radicand admits no finite k (degenerate sigma coefficients).
class StructuralError : public Error {
public:
  using Error::Error;
};

/// A k value does not turn the radicand into a perfect square.
class ConsistencyError : public Error {
public:
  using Error::Error;
};

/// Secant iteration failed; carries the last iterate.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string &what, std::complex<double> last,
                   int iterations)
      : Error(what), last_iterate(last), iterations(iterations) {}

  std::complex<double> last_iterate;
  int iterations;
};

/// sigma is outside the factorizable families {const, linear, two roots}.
class UnsupportedSigmaError : public Error {
public:
  using Error::Error;
};

/// Jacobi recurrence hit a vanishing denominator.
class DegenerateParameterError : public Error {
public:
  using Error::Error;
};

/// Coordinate map or residual evaluated outside its domain.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Wavefunction evaluated at a branch point where it diverges.
class SingularPointError : public Error {
public:
  using Error::Error;
};

class NormalizationError : public Error {
public:
  using Error::Error;
};

/// Finite-difference grid too coarse for the requested number of levels.
class ResolutionError : public Error {
public:
  using Error::Error;
};

} // namespace wsspec

#endif
