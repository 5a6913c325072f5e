#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "disklab/densities.hpp"
#include "disklab/vec3.hpp"

namespace disklab {

struct CurveSample {
  double s = 0.0;
  Vec3 position{};
  Vec3 T{}, N{}, B{};
  double kappa = 0.0;
  double tau = 0.0;
};

struct ClosedCurve {
  std::vector<CurveSample> samples;
  double length = 0.0;
  double curvature_period = 0.0;
  double closure_defect = 0.0;
};

struct RodFirstIntegral {
  std::vector<Vec3> V;  // ambient coordinates per sample
  Vec3 mean{};
  double max_deviation = 0.0;
};

struct FrenetOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.05;
};

// Integrate position + Frenet frame from curvature and torsion profiles.
// Frame re-orthonormalized once per accepted step (nearest orthonormal).
std::vector<CurveSample> frenet_evolve(const std::function<double(double)>& kappa,
                                       const std::function<double(double)>& tau, double L,
                                       const FrenetOptions& opts = {});

ClosedCurve make_closed_curve(std::vector<CurveSample> samples, double curvature_period,
                              double closure_tol = 1e-6);

// Noether vector of the rod energy Int(Lambda(kappa) + varpi tau + beta) +
// eta*kappa coupling, evaluated in ambient coordinates:
//   V = (kappa L' - L - beta) T + L'_s N + (tau L' + eta tau - varpi kappa) B.
// kappa_prime: analytic d kappa/ds when available; otherwise estimated from
// the samples by local quartic fits.
RodFirstIntegral rod_criticality(const ClosedCurve& curve, const CurveDensitySpec& lambda,
                                 double eta, double varpi, double beta,
                                 const std::function<double(double)>* kappa_prime = nullptr);

// Int over one curvature period of (kappa Lambda' - Lambda - beta) ds.
double closure_integral(const std::function<double(double)>& kappa,
                        const CurveDensitySpec& lambda, double beta, double period);

// Sampled form: s must cover exactly one period of the curvature.
double closure_integral(const std::vector<double>& s, const std::vector<double>& kappa,
                        const CurveDensitySpec& lambda, double beta);

// Planar curvature profile with two arclength derivatives.
struct CurvatureProfile {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

CurvatureProfile constant_curvature_profile(double kappa0);

// Quintic local interpolation through (s_i, kappa_i); derivatives from the
// fitted polynomial.
CurvatureProfile curvature_profile_from_samples(std::vector<double> s,
                                                std::vector<double> kappa);

// Residual of Lambda''' kappa'^2 + Lambda'' kappa'' + kappa^2 Lambda'
//   - kappa (Lambda + beta) + sign*sigma_area at the given arclengths.
// sign = 0 selects the unconstrained planar equation.
std::vector<double> planar_elastica_residual(const CurvatureProfile& kappa,
                                             const std::vector<double>& s,
                                             const CurveDensitySpec& lambda, double beta,
                                             double sigma_area, int sign);

struct CircleRootOptions {
  double scan_min = 1e-6;
  double scan_max = 1e3;
  int scan_points = 20000;
  double value_tol = 1e-10;
};

// Positive roots of kappa^2 Lambda' - kappa (Lambda + beta) + sign*sigma_area,
// ascending. Sign changes are bisected; tangential (double) roots are caught
// as |g| minima and polished on g'. Throws NoRoot, with a degeneracy note when
// the condition vanishes identically.
std::vector<double> solve_circle_curvature(const CurveDensitySpec& lambda, double beta,
                                           double sigma_area, int sign,
                                           const CircleRootOptions& opts = {});

// CSV with header s,x,y,z,Tx,Ty,Tz,kappa,tau at 17 significant digits.
std::string curve_to_csv(const std::vector<CurveSample>& samples);
std::vector<CurveSample> curve_from_csv(const std::string& text);

}  // namespace disklab
