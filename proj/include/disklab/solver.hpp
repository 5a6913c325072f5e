#pragma once

#include <optional>
#include <string>
#include <vector>

#include "disklab/densities.hpp"
#include "disklab/profile.hpp"
#include "disklab/residuals.hpp"

namespace disklab {

struct StopSpec {
  double max_length = 10.0;
  double r_collapse = 1e-6;       // stop when r falls back below this
  double H_blowup = 1e6;          // stop when |H| exceeds this
  double min_abs_H = 0.0;         // stop when |H| falls below this (log H^2 guard)
  int stop_at_vertical_tangent = 0;  // stop at the k-th crossing when > 0
};

struct SolverOptions {
  double rtol = 1e-9;
  double atol = 1e-9;
  double series_step = 1e-4;
  double first_integral_tol = 1e-9;  // relative to max(1, |P| + |P'|)
  double crossing_band = 0.02;       // |cos phi| below this switches formulations
  double crossing_locate_tol = 1e-13;
  double crossing_assert_tol = 1e-8;
  double h_initial = 1e-3;
  double h_max = 0.05;
};

struct ProfileDerivatives {
  double r_prime = 0.0;
  double z_prime = 0.0;
  double phi_prime = 0.0;
  double H_prime = 0.0;
};

// First-order reduction of the profile system: phi' is recovered from the
// mean-curvature relation, H' by solving the first integral. Requires
// P''(H) != 0 and |cos phi| away from 0 (crossings are handled by the
// integrator's regularized formulation).
ProfileDerivatives ode_rhs(const ProfileState& state, const DensitySpec& density);

// Scalar residual of the first integral at a sample:
// P sin(phi) - (1/2) P' phi' sin(phi) - (1/2) P'' H' cos(phi).
double first_integral_residual(const ProfileState& state, double phi_prime, double H_prime,
                               const DensitySpec& density);

// Taylor state at arclength h from the axis: H(0) = phi'(0), odd H-derivatives
// vanish, and H''(0) = phi'(0) (2P - phi'(0) P') / P'' from the axis limit of
// the interior equation. Validated by the step-halving oracle in tests.
ProfileSample series_start(double phi_prime0, double z0, double h,
                           const DensitySpec& density);

ProfileTrajectory integrate_profile(double phi_prime0, const DensitySpec& density,
                                    const StopSpec& stop, const SolverOptions& opts = {},
                                    double z0 = 1.0);

struct HelfrichCheck {
  double z0_fit = 0.0;         // arclength mean of z + nu3 / (H - c0)
  double max_deviation = 0.0;
  double std_deviation = 0.0;
};

// The integrated first-order relation for quadratic densities:
// z + cos(phi)/(H - c0) is constant along trajectories.
HelfrichCheck helfrich_first_integral(const ProfileTrajectory& traj, double sigma, double c0);

struct ShootingGuess {
  double phi_prime0 = -1.0;
  std::optional<double> length;  // scanned when absent
};

struct ShootingResult {
  double phi_prime0 = 0.0;
  double length = 0.0;
  double eta = 0.0;
  double beta = 0.0;
  std::array<double, 2> target_residual{};
  std::string regime;
  int iterations = 0;
  ProfileTrajectory trajectory;
  CriticalityReport report;
};

// Geodesic boundary: targets (kappa_g(L), P + eta K at L) with eta recovered
// pointwise from the first boundary equation; beta from the second.
ShootingResult shoot_geodesic(const DensitySpec& density, const CurveDensitySpec& lambda,
                              const ShootingGuess& guess, const StopSpec& stop,
                              const SolverOptions& opts = {}, double varpi = 0.0);

// Non-geodesic boundary: targets (P'_s(L), 2P - (2H - kappa_n) P' at L);
// eta and beta recovered afterwards.
ShootingResult shoot_nongeodesic(const DensitySpec& density, const CurveDensitySpec& lambda,
                                 const ShootingGuess& guess, const StopSpec& stop,
                                 const SolverOptions& opts = {}, double varpi = 0.0);

// phi'(0) sweep utility: integrates a grid and reports per-point conservation
// and candidate boundary data. Parallel over grid points when jobs > 1;
// output ordering is index-deterministic.
struct SweepPoint {
  double phi_prime0 = 0.0;
  bool ok = false;
  std::string error;
  double max_first_integral_residual = 0.0;
  double length = 0.0;
  StopReason stop_reason = StopReason::MaxLength;
};

std::vector<SweepPoint> sweep_phi0(const DensitySpec& density, double lo, double hi, int n,
                                   const StopSpec& stop, const SolverOptions& opts = {},
                                   int jobs = 1);

}  // namespace disklab
