#pragma once

#include <stdexcept>
#include <string>

namespace ct {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The request cannot be served as posed: bad input, bad configuration, or a
// precondition the caller is responsible for. The CLI exits with code 2.
struct ValidationError : Error {
  using Error::Error;
};

// A numerical breakdown inside an otherwise well-posed computation. The CLI
// exits with code 1.
struct NumericalError : Error {
  using Error::Error;
};

// A 1-form whose top wedge degenerates (|density| below the degeneracy
// threshold), or a frame solve whose residual shows the defining equations
// are inconsistent at the evaluation point.
struct SingularForm : NumericalError {
  explicit SingularForm(const std::string& what) : NumericalError(what) {}
};

// A finite-difference stencil produced a non-finite or meaningless value.
struct DerivativeFailure : NumericalError {
  explicit DerivativeFailure(const std::string& what) : NumericalError(what) {}
};

// NaN or infinity where a finite value is required (quadrature nodes,
// densities below the representable floor, log of a non-positive ratio).
struct NonFiniteValue : NumericalError {
  explicit NonFiniteValue(const std::string& what) : NumericalError(what) {}
};

// Total mass of a measure came out non-positive.
struct NonPositiveMass : NumericalError {
  explicit NonPositiveMass(const std::string& what) : NumericalError(what) {}
};

// An operation that only makes sense for one representation of a contact
// form (scale factor over the catalog base vs. a general coefficient field)
// was handed the other one.
struct RepresentationMismatch : ValidationError {
  explicit RepresentationMismatch(const std::string& what) : ValidationError(what) {}
};

// An exponent escaped the guarded range before a max-shift could tame it.
struct Overflow : NumericalError {
  explicit Overflow(const std::string& what) : NumericalError(what) {}
};

// The constrained optimization cannot reach the requested targets (outside
// the moment range, Newton stalled, or the Hessian lost rank).
struct NotAttainable : ValidationError {
  explicit NotAttainable(const std::string& what) : ValidationError(what) {}
};

// A map failed the contactomorphism test: it does not carry the contact
// hyperplanes to themselves within tolerance.
struct NotContactomorphism : ValidationError {
  explicit NotContactomorphism(const std::string& what) : ValidationError(what) {}
};

// A reference measure failed the invariance spot-check it was declared with.
struct NotInvariant : ValidationError {
  explicit NotInvariant(const std::string& what) : ValidationError(what) {}
};

// A dynamical ball contains no grid point, so the requested ratio is 0/0.
struct EmptyBall : ValidationError {
  explicit EmptyBall(const std::string& what) : ValidationError(what) {}
};

// An integrator or path step larger than the configured bound.
struct StepTooLarge : ValidationError {
  explicit StepTooLarge(const std::string& what) : ValidationError(what) {}
};

// Command line: no such subcommand.
struct UnknownSubcommand : ValidationError {
  explicit UnknownSubcommand(const std::string& what) : ValidationError(what) {}
};

// Command line or config file: unusable key, value, or combination.
struct ConfigInvalid : ValidationError {
  explicit ConfigInvalid(const std::string& what) : ValidationError(what) {}
};

}  // namespace ct
