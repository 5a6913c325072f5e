#pragma once

#include <array>
#include <string>
#include <vector>

#include "disklab/profile.hpp"

namespace disklab {

// Orientation: unit normal nu = (-sin phi cos t, -sin phi sin t, cos phi),
// pointing out of the convex side; a sphere integrated from the pole with
// phi' < 0 has H = -1/R.  nu_3 = cos phi.
inline constexpr const char* kOrientationBranch = "nu_out_of_convex";

struct SurfaceCurvatures {
  double H = 0.0;
  double K = 0.0;
  double k_meridian = 0.0;  // phi'
  double k_parallel = 0.0;  // sin phi / r
};

// Principal curvature data of the revolution surface at a profile point with
// r > 0. k_parallel is the normal curvature of the parallel circle.
SurfaceCurvatures profile_curvatures(const ProfileState& state, double phi_prime);

// Umbilic limit at the axis point: H = phi'(0), K = phi'(0)^2.
SurfaceCurvatures axis_curvatures(double phi_prime0);

struct ParallelData {
  double kappa_g = 0.0;  // -cos phi / r  (Darboux, conormal = +d/ds of profile)
  double kappa_n = 0.0;  // sin phi / r
  double tau_g = 0.0;    // identically 0 on parallels
  double kappa = 0.0;    // 1/r, Frenet curvature of the circle
  double theta = 0.0;    // contact angle: kappa_g = kappa sin, kappa_n = kappa cos
};

ParallelData parallel_data(const ProfileState& state);

struct RevolvedMesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<double> H;
  std::vector<double> K;
  std::vector<std::array<int, 3>> triangles;  // 0-based
  std::vector<int> boundary_loop;             // last parallel, 0-based

  double area() const;
  double boundary_length() const;
  double min_triangle_area() const;
  std::array<double, 3> bbox_extent() const;
};

// Revolve a disk-type profile (samples.front() at r = 0) into a triangulated
// disk: a single fan at the pole, quad strips elsewhere.
RevolvedMesh revolve(const ProfileTrajectory& traj, int n_t);

// 2*pi - int K dSigma - (Gauss-Bonnet oriented) boundary turning. Flags
// cusps and branch points on solver output when it fails to vanish.
double gauss_bonnet_defect(const ProfileTrajectory& traj, double quad_tol = 1e-10);

// OBJ with v/f records at 9 significant digits plus an `l` polyline for the
// boundary loop.
std::string mesh_to_obj(const RevolvedMesh& mesh);

}  // namespace disklab
