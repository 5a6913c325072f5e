#pragma once

#include "disklab/densities.hpp"
#include "disklab/profile.hpp"

namespace disklab {

struct EnergyBreakdown {
  double surface_P = 0.0;      // int P(H) dSigma
  double surface_K = 0.0;      // int K dSigma (unweighted)
  double boundary_lambda = 0.0;  // oint Lambda(kappa) ds
  double boundary_tau = 0.0;     // oint tau ds (0 for parallels)
  double boundary_beta = 0.0;    // beta * boundary length
  double total = 0.0;  // surface_P + eta*surface_K + boundary_lambda + varpi*boundary_tau + boundary_beta
};

// Axisymmetric energy of a disk-type trajectory; dSigma = 2 pi r ds, boundary
// circle at the last sample.
EnergyBreakdown total_energy(const ProfileTrajectory& traj, const EnergyParams& params,
                             double quad_tol = 1e-9);

// int (2P - H P') dSigma, the dilation derivative of the surface term.
double surface_rescaling_integral(const ProfileTrajectory& traj, const DensitySpec& density,
                                  double quad_tol = 1e-9);

// Surface area 2 pi int r ds.
double surface_area(const ProfileTrajectory& traj, double quad_tol = 1e-9);

// int (H - c0) dSigma.
double total_mean_curvature_excess(const ProfileTrajectory& traj, double c0,
                                   double quad_tol = 1e-9);

}  // namespace disklab
