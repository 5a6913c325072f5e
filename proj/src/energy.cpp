#include "disklab/energy.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "disklab/errors.hpp"
#include "disklab/quadrature.hpp"

namespace disklab {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sample_breaks(const ProfileTrajectory& traj) {
  std::vector<double> b;
  b.reserve(traj.samples.size());
  for (const auto& q : traj.samples) b.push_back(q.s);
  return b;
}

template <typename F>
double surface_integral(const ProfileTrajectory& traj, double quad_tol, F&& pointwise) {
  const auto breaks = sample_breaks(traj);
  auto integrand = [&](double s) {
    const auto q = traj.at(s);
    return pointwise(q) * q.r;
  };
  return 2.0 * kPi * composite_gauss(integrand, breaks, quad_tol).value;
}

}  // namespace

EnergyBreakdown total_energy(const ProfileTrajectory& traj, const EnergyParams& params,
                             double quad_tol) {
  if (traj.samples.size() < 2) throw DomainError("trajectory too short");
  for (std::size_t i = 1; i < traj.samples.size(); ++i)
    if (!(traj.samples[i].r > 0.0))
      throw DomainError("total_energy requires r > 0 away from the axis");

  EnergyBreakdown e;
  e.surface_P = surface_integral(traj, quad_tol, [&](const ProfileSample& q) {
    return eval_density(params.density, q.H, 0);
  });
  // K r = phi' sin(phi), finite at the axis.
  {
    const auto breaks = sample_breaks(traj);
    auto integrand = [&](double s) {
      const auto q = traj.at(s);
      return q.phi_prime * std::sin(q.phi);
    };
    e.surface_K = 2.0 * kPi * composite_gauss(integrand, breaks, quad_tol).value;
  }
  const auto& b = traj.boundary();
  const double kappa_b = 1.0 / b.r;
  const double len = 2.0 * kPi * b.r;
  e.boundary_lambda = len * eval_curve_density(params.boundary_density, kappa_b, 0);
  e.boundary_tau = 0.0;  // parallel circles are planar
  e.boundary_beta = params.beta * len;
  e.total = e.surface_P + params.eta * e.surface_K + e.boundary_lambda +
            params.varpi * e.boundary_tau + e.boundary_beta;
  return e;
}

double surface_rescaling_integral(const ProfileTrajectory& traj, const DensitySpec& density,
                                  double quad_tol) {
  return surface_integral(traj, quad_tol, [&](const ProfileSample& q) {
    return 2.0 * eval_density(density, q.H, 0) - q.H * eval_density(density, q.H, 1);
  });
}

double surface_area(const ProfileTrajectory& traj, double quad_tol) {
  return surface_integral(traj, quad_tol, [](const ProfileSample&) { return 1.0; });
}

double total_mean_curvature_excess(const ProfileTrajectory& traj, double c0, double quad_tol) {
  return surface_integral(traj, quad_tol,
                          [&](const ProfileSample& q) { return q.H - c0; });
}

}  // namespace disklab
