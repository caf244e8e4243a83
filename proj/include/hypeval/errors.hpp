#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace hypeval {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid or out-of-range parameters (nonpositive moduli, spectral point
// outside the admissible window, and so on).
struct DomainError : Error {
  using Error::Error;
};

// Evaluation point coincides with (or is too close to) a pole.
struct PoleError : Error {
  std::complex<double> nearest;
  PoleError(const std::string& msg, std::complex<double> p)
      : Error(msg), nearest(p) {}
};

// Raised when no separating path exists between the declared pole
// sequences, or when a declared pole sits on the integration path.
struct ContourError : Error {
  std::complex<double> offending;
  ContourError(const std::string& msg, std::complex<double> p)
      : Error(msg), offending(p) {}
};

// Argument left the strip where the defining integral converges.
struct StripError : Error {
  std::complex<double> z;
  StripError(const std::string& msg, std::complex<double> zz)
      : Error(msg), z(zz) {}
};

// Pairing of two functions whose combined growth does not decay.
struct DivergenceError : Error {
  using Error::Error;
};

}  // namespace hypeval
