#pragma once

#include <stdexcept>
#include <string>

namespace disklab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation outside a density's domain (log H^2 at H=0, fractional powers of
// negative numbers, kappa < 0).
struct DomainError : Error {
  using Error::Error;
};

// Fractional-exponent density differentiated past its smoothness at H = c0.
struct NonSmoothError : Error {
  using Error::Error;
};

struct QuadratureError : Error {
  using Error::Error;
};

struct DifferentiationError : Error {
  using Error::Error;
};

struct StepFailure : Error {
  using Error::Error;
};

struct AxisError : Error {
  using Error::Error;
};

struct DegenerateProfile : Error {
  using Error::Error;
};

// P''(H) = 0: the generic profile equation cannot be solved for H'.
struct DegenerateDensity : Error {
  using Error::Error;
};

// First-integral residual exceeded tolerance along a trajectory.
struct ConservationFailure : Error {
  using Error::Error;
};

struct NoConvergence : Error {
  using Error::Error;
};

// kappa_n = 0 at a shooting endpoint: geodesic regime does not apply.
struct SingularBC : Error {
  using Error::Error;
};

struct RegimeViolation : Error {
  using Error::Error;
};

struct InfeasibleCap : Error {
  using Error::Error;
};

struct BranchError : Error {
  using Error::Error;
};

// |H - c0| too small for the integrated Helfrich relation.
struct NearSpontaneous : Error {
  using Error::Error;
};

struct AxisSingularity : Error {
  using Error::Error;
};

struct BranchStall : Error {
  using Error::Error;
};

// Lambda'(kappa)/kappa requested at kappa ~ 0.
struct SingularG : Error {
  using Error::Error;
};

struct NoRoot : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace disklab
