#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "disklab/errors.hpp"

namespace disklab {

// Surface energy density P(H). Derivatives up to order 3 are closed-form per
// family; finite differencing is reserved for tests.
struct PWillmore {
  double sigma = 1.0;  // bending rigidity, > 0
  double c0 = 0.0;     // spontaneous curvature
  double p = 2.0;      // exponent, >= 0 (non-integer admitted away from H = c0)
};

struct ExpSquare {};  // P(H) = exp(H^2)

struct LogSquare {};  // P(H) = log(H^2), H bounded away from 0

struct PolyDensity {
  std::vector<double> coefficients;  // P(H) = sum_i a_i H^i
};

using DensitySpec = std::variant<PWillmore, ExpSquare, LogSquare, PolyDensity>;

// d^order P / dH^order, exact per family.
double eval_density(const DensitySpec& spec, double H, int order);

// Boundary bending density Lambda(kappa).
struct QuadraticBend {};  // Lambda = kappa^2

struct TotalCurvatureBend {
  double alpha = 1.0;  // Lambda = alpha * kappa
};

struct PolyBend {
  std::vector<double> coefficients;
};

using CurveDensitySpec = std::variant<QuadraticBend, TotalCurvatureBend, PolyBend>;

// d^order Lambda / dkappa^order for kappa >= 0, order in 0..3.
double eval_curve_density(const CurveDensitySpec& spec, double kappa, int order);

// kappa*Lambda' - Lambda - beta, the circle condition that recurs in every
// boundary regime.
double circle_condition(const CurveDensitySpec& spec, double kappa, double beta);

struct EnergyParams {
  double eta = 0.0;    // total Gaussian curvature weight
  double varpi = 0.0;  // boundary torsion weight
  double beta = 0.0;   // boundary length multiplier
  DensitySpec density = PWillmore{};
  CurveDensitySpec boundary_density = QuadraticBend{};
};

// x^p with negative bases allowed for integer p; DomainError otherwise.
double real_power(double x, double p);

std::string density_family_name(const DensitySpec& spec);
std::string curve_density_family_name(const CurveDensitySpec& spec);

}  // namespace disklab
