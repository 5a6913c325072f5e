#pragma once

#include <string>
#include <vector>

namespace disklab {

// State of the meridian curve of a surface of revolution, arclength s:
// (r, z) the profile position, phi the tangent angle (r' = cos phi,
// z' = sin phi), H the mean curvature of the surface at that parallel.
struct ProfileState {
  double s = 0.0;
  double r = 0.0;
  double z = 0.0;
  double phi = 0.0;
  double H = 0.0;
};

struct ProfileSample : ProfileState {
  double phi_prime = 0.0;
  double H_prime = 0.0;
};

enum class StopReason {
  MaxLength,
  VerticalTangent,
  CollapseToAxis,
  BlowUp,
  SmallH,
  DensityDegeneracy,  // H approached a zero of P'' (e.g. H -> c0 for p >= 3)
};

struct ProfileEvent {
  enum class Kind { VerticalTangent, SmallH, DensityDegeneracy } kind =
      Kind::VerticalTangent;
  double s = 0.0;
  // For crossings: the first-integral constraint |2P - P' phi'| at the
  // located crossing, which measures accumulated conservation drift.
  double constraint_residual = 0.0;
};

struct ProfileTrajectory {
  std::vector<ProfileSample> samples;  // samples.front() is the axis point (r = 0)
  double length = 0.0;
  StopReason stop_reason = StopReason::MaxLength;
  std::vector<ProfileEvent> events;
  double max_first_integral_residual = 0.0;  // over accepted samples, scaled
  int h_sign = 0;                            // sign of H along the trajectory; 0 if mixed
  bool axis_is_regular = true;               // false for cone-point families

  const ProfileSample& boundary() const { return samples.back(); }

  // Cubic Hermite reconstruction of (r, z, phi, H) between stored samples.
  ProfileSample at(double s) const;

  // Dilation by factor c > 0: lengths scale by c, curvatures by 1/c.
  ProfileTrajectory scaled(double c) const;
};

// Analytic builders used as exact references.
// Spherical cap of mean curvature H0 < 0 (radius -1/H0), from the pole down to
// polar angle alpha, n samples, z(0) = z0.
ProfileTrajectory spherical_cap_profile(double H0, double alpha, int n, double z0 = 1.0);

// Flat disk of radius R at height z0.
ProfileTrajectory planar_disk_profile(double R, int n, double z0 = 1.0);

// CSV with header varsigma,r,z,phi,H,K at 17 significant digits.
std::string profile_to_csv(const ProfileTrajectory& traj);
ProfileTrajectory profile_from_csv(const std::string& text);

}  // namespace disklab
