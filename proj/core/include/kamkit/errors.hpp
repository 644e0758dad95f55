// kamkit :: error taxonomy shared by all modules.
#ifndef KAMKIT_ERRORS_HPP
#define KAMKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kamkit {

/// Base class of all kamkit exceptions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric argument violated a precondition (scale out of range, bad
/// truncation, malformed configuration, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The input series does not have the shape an operation requires
/// (wrong mode, unexpected momentum/parameter dependence, dimension
/// mismatch).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A small divisor fell below the configured floor, or an exact
/// resonance was hit.  Carries the offending lattice index as text.
class ResonanceError : public Error {
 public:
  ResonanceError(const std::string& what, std::string index)
      : Error(what), index_(std::move(index)) {}
  const std::string& index() const noexcept { return index_; }

 private:
  std::string index_;
};

/// The momentum Hessian at t = 0 is singular (or too ill conditioned),
/// so no frequency correction exists.
class NonDegeneracyError : public Error {
 public:
  using Error::Error;
};

/// An iteration exhausted its budget without reaching the target
/// tolerance.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Functional calculus evaluated outside the radius of convergence.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// A Lie series cannot be exponentiated between the requested scales.
/// Carries the offending scale and the estimated geometric ratio.
class ExponentiabilityError : public Error {
 public:
  ExponentiabilityError(const std::string& what, double scale, double nu)
      : Error(what), scale_(scale), nu_(nu) {}
  double scale() const noexcept { return scale_; }
  double nu() const noexcept { return nu_; }

 private:
  double scale_;
  double nu_;
};

/// A computation would exceed a hard resource cap (e.g. an exhaustive
/// lattice scan over too large a box).
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace kamkit

#endif  // KAMKIT_ERRORS_HPP
