#pragma once

#include <vector>

#include "disklab/curve.hpp"
#include "disklab/densities.hpp"
#include "disklab/profile.hpp"
#include "disklab/residuals.hpp"

namespace disklab {

// Axisymmetric linear Weingarten family K = 2 c0 H built from the explicit
// profile-curvature quadrature; parameterized by chi in [-c0, -2c0/3].
struct WeingartenSpec {
  double c0 = 1.0;  // > 0 after the family's orientation normalization
  double d = 2.0;   // first-integral constant, >= c0^2
};

// kappa_n of the parallel through chi: -c0 chi / (chi + c0). Equals 2 c0 at
// the boundary value chi = -2c0/3.
double weingarten_kn(double chi, double c0);

struct WeingartenSurface {
  ProfileTrajectory trajectory;  // samples away from the cone point
  double apex_z = 0.0;           // axis point; surface is only C0 there
  std::vector<double> chi;       // per-sample parameter
  double boundary_kappa_n = 0.0;  // reported in the family's own branch
  double max_weingarten_residual = 0.0;  // max |K - 2 c0 H| over samples
  CriticalityReport report;
};

WeingartenSurface weingarten_profile(const WeingartenSpec& spec, int n);

struct CapSpec {
  double p = 2.0;
  double sigma = 1.0;
  double c0 = 0.0;
  double H0 = -1.0;     // < 0; for p != 2 it is prescribed by the branch
  double kappa0 = 1.0;  // boundary circle curvature, >= -H0
};

struct CapResult {
  ProfileTrajectory trajectory;
  CapCriticality criticality;
  CriticalityReport report;
};

// Exact spherical cap over the circle satisfying the boundary condition; all
// residuals are analytic. Throws InfeasibleCap when kappa0 < -H0.
CapResult build_cap(const CapSpec& spec, const CurveDensitySpec& lambda, double beta,
                    int n_samples = 201);

// Boundary equations of the area-functional regime (surface energy = area)
// on a supplied curve lying on a minimal surface: eta kappa_n, J'.nu + eta
// tau_g', J'.n - eta tau_g^2 + sigma, evaluated per sample.
struct P0BoundaryResiduals {
  std::vector<double> el02, el03, el04;
  double max02 = 0.0, max03 = 0.0, max04 = 0.0;
  std::vector<double> planar_elastica;  // filled when the data is planar
  double conormal_closure = 0.0;        // |oint n ds|
};

struct DarbouxCurvePoint {
  double s = 0.0;
  BoundaryPoint darboux;
  Vec3 conormal{};  // ambient n, for the closure integral
};

P0BoundaryResiduals p0_minimal_boundary_conditions(const std::vector<DarbouxCurvePoint>& curve,
                                                   const CurveDensitySpec& lambda,
                                                   double varpi, double beta, double sigma,
                                                   double eta);

// Total-mean-curvature regime at an axisymmetric boundary parallel:
// sigma + 4 eta c0, kappa_n - 2 c0, the circle condition, and the linear
// Weingarten relation K - 2 c0 H at the boundary.
struct P1AxisymResiduals {
  double sigma_relation = 0.0;
  double kappa_n_relation = 0.0;
  double circle_relation = 0.0;
  double weingarten_relation = 0.0;
};

P1AxisymResiduals p1_axisym_conditions(double kappa_n, double kappa, double H, double K,
                                       double sigma, double eta, double c0,
                                       const CurveDensitySpec& lambda, double beta);

}  // namespace disklab
