#pragma once

#include <optional>
#include <string>
#include <vector>

#include "disklab/densities.hpp"
#include "disklab/profile.hpp"
#include "disklab/surface.hpp"

namespace disklab {

// Darboux data of a boundary point with the arclength derivatives the
// expanded boundary equations need. All derivatives vanish on parallels.
struct BoundaryPoint {
  double kappa = 0.0;
  double tau = 0.0;
  double kappa_g = 0.0;
  double kappa_n = 0.0;
  double tau_g = 0.0;
  double theta = 0.0;
  double kappa_s = 0.0, kappa_ss = 0.0;
  double kappa_g_s = 0.0, kappa_g_ss = 0.0;
  double kappa_n_s = 0.0, kappa_n_ss = 0.0;
  double tau_g_s = 0.0, tau_g_ss = 0.0;

  static BoundaryPoint from_parallel(const ParallelData& d);
};

struct BoundaryResiduals {
  double el2 = 0.0;  // P' + 2 eta kappa_n
  double el3 = 0.0;  // 2 J'.nu + 2 eta tau_g' - d_n P'
  double el4 = 0.0;  // J'.n + eta K + P
};

// Scalar expansions of J'.nu and J'.n (G = Lambda'/kappa; requires kappa > 0).
double j_prime_nu(const BoundaryPoint& bp, const CurveDensitySpec& lambda, double varpi,
                  double beta);
double j_prime_n(const BoundaryPoint& bp, const CurveDensitySpec& lambda, double varpi,
                 double beta);

// General boundary equations via the expanded forms; K recovered from
// K = kappa_n (2H - kappa_n) - tau_g^2.
BoundaryResiduals boundary_residuals(const BoundaryPoint& bp, const EnergyParams& params,
                                     double H, double dnH, double dnPdot);

// Reduced forms for parallels, implemented independently of the expansion.
struct GeodesicBC {
  double bc1 = 0.0;  // P' + 2 eta kappa_n
  double bc2 = 0.0;  // 2 (kappa L' - L - beta) kappa_n - d_n P'
  double bc3 = 0.0;  // P + eta K
};
GeodesicBC geodesic_bc_residuals(const ParallelData& d, const EnergyParams& params, double H,
                                 double dnPdot);

struct NonGeodesicBC {
  double bc1 = 0.0;     // kappa L' - L - beta
  double bc2 = 0.0;     // P' + 2 eta kappa_n
  double bc3 = 0.0;     // 2P - (2H - kappa_n) P'
  double pdot_s = 0.0;  // d_n P', kept as an explicit condition
};
NonGeodesicBC nongeodesic_bc_residuals(const ParallelData& d, const EnergyParams& params,
                                       double H, double dnPdot);

// Interior equilibrium residual Delta P' + 2 P'(2H^2 - K) - 4 H P on a
// surface of revolution: Delta P' = (P')'' + (r'/r)(P')'. H'' is estimated
// from the stored H' samples by local quartic fits (independent of the
// integrator's own H' formula).
std::vector<double> interior_residual(const ProfileTrajectory& traj,
                                      const DensitySpec& density);

// Same residuals normalized by max(1, sum of |term| magnitudes): folding
// trajectories reach |H| ~ 1e2 with equation terms ~ 1e6, where the absolute
// residual has no meaning.
std::vector<double> interior_residual_relative(const ProfileTrajectory& traj,
                                               const DensitySpec& density);

// The p-Willmore specialization of the interior equation, evaluated from its
// own written form as a cross-check (equals the general residual / sigma).
std::vector<double> p_willmore_interior_residual(const ProfileTrajectory& traj,
                                                 const PWillmore& density);

// int (2P - H P') dSigma - oint (kappa L' - L - beta) ds.
double rescaling_defect(const ProfileTrajectory& traj, const EnergyParams& params,
                        double quad_tol = 1e-9);

// int (H - c0)^(p-1) ((2-p) H - 2 c0) dSigma.
double flux_value(const ProfileTrajectory& traj, double c0, double p,
                  double quad_tol = 1e-9);

struct CapCriticality {
  double eta = 0.0;
  std::optional<double> H0;  // absent for p = 2, where H0 < 0 is free
  bool c0_forced_zero = false;
  bool feasible = false;      // kappa0 >= -H0
  bool eta_sign_ok = false;   // parity constraint on eta for p > 2
  double beta_required(const CurveDensitySpec& lambda, double kappa0) const;
};

// Constraints under which a spherical cap over a circle of curvature kappa0
// is an equilibrium. Branches: p = 1 (c0 < 0), p = 2 (c0 = 0), integer p > 2.
CapCriticality cap_criticality(double p, double kappa0, double sigma, double c0);

enum class CmcBranch { Isoparametric, GroundState, NotCritical };

struct CmcClassification {
  CmcBranch branch = CmcBranch::NotCritical;
  std::optional<double> K;  // branch (i): K from 2(p-1)H^2 + 2 c0 H - p K = 0
};

CmcClassification cmc_classify(double H0, double c0, double p);

struct CriticalityReport {
  std::string regime;
  double el1_max = 0.0;
  double el2 = 0.0;
  double el3 = 0.0;
  double el4 = 0.0;
  double rescaling = 0.0;
  std::optional<double> flux;
  double eta = 0.0;
  double beta = 0.0;
  std::optional<double> sigma;
  std::optional<double> c0;
  std::optional<double> p;
  double varpi = 0.0;
  std::string orientation_branch = kOrientationBranch;
  std::optional<std::string> regularity;  // "C0_at_axis" for cone-point families
  std::optional<int> h_sign;
  double tolerance = 0.0;
  bool critical = false;

  std::string to_json() const;
};

inline constexpr double kAnalyticTol = 1e-10;
inline constexpr double kOdeTol = 1e-6;

// Assemble the full report for an axisymmetric configuration: interior
// residual along the trajectory, reduced boundary conditions at the end
// parallel, the dilation identity, and the flux integral for p-Willmore
// densities.
CriticalityReport assess_trajectory(const ProfileTrajectory& traj, const EnergyParams& params,
                                    const std::string& regime, double tolerance,
                                    double quad_tol = 1e-9);

}  // namespace disklab
