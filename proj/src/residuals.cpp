#include "disklab/residuals.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "disklab/energy.hpp"
#include "disklab/errors.hpp"
#include "disklab/quadrature.hpp"

#include "json.hpp"

namespace disklab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinKappaForG = 1e-12;

double derivative_at(const std::vector<double>& xs, const std::vector<double>& fs,
                     double x) {
  const int m = static_cast<int>(xs.size());
  std::vector<double> c(fs);
  for (int j = 1; j < m; ++j)
    for (int k = m - 1; k >= j; --k) c[k] = (c[k] - c[k - 1]) / (xs[k] - xs[k - j]);
  double val = 0.0, dval = 0.0;
  for (int k = m - 1; k >= 0; --k) {
    dval = dval * (x - xs[k]) + val;
    val = val * (x - xs[k]) + c[k];
  }
  return dval;
}

// Differentiation grid with a minimum node separation: adaptive integrators
// cluster samples around vertical-tangent crossings, and stencils built from
// near-duplicate nodes amplify the integrator jitter beyond any tolerance.
struct FdGrid {
  std::vector<double> xs;
  std::vector<double> fs;

  FdGrid(const std::vector<double>& s, const std::vector<double>& f) {
    const int n = static_cast<int>(s.size());
    if (n < 5) throw DifferentiationError("too few samples to differentiate");
    // Only true near-duplicates are dropped; the adaptive spacing elsewhere
    // tracks the dynamics and is the right stencil scale.
    const double gap_min = 1e-6 * std::max(1.0, s.back() - s.front());
    xs.push_back(s[0]);
    fs.push_back(f[0]);
    for (int i = 1; i < n; ++i) {
      if (s[i] - xs.back() >= gap_min) {
        xs.push_back(s[i]);
        fs.push_back(f[i]);
      } else if (i == n - 1) {
        // keep the endpoint, but never as a near-duplicate node
        xs.back() = s[i];
        fs.back() = f[i];
      }
    }
    if (xs.size() < 5) throw DifferentiationError("sample spacing too coarse");
  }

  // Derivative at x from the 5 retained nodes bracketing it.
  double derivative(double x) const {
    const int n = static_cast<int>(xs.size());
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    int lo = std::clamp(static_cast<int>(it - xs.begin()) - 2, 0, n - 5);
    return derivative_at({xs.begin() + lo, xs.begin() + lo + 5},
                         {fs.begin() + lo, fs.begin() + lo + 5}, x);
  }
};

}  // namespace

BoundaryPoint BoundaryPoint::from_parallel(const ParallelData& d) {
  BoundaryPoint bp;
  bp.kappa = d.kappa;
  bp.tau = 0.0;
  bp.kappa_g = d.kappa_g;
  bp.kappa_n = d.kappa_n;
  bp.tau_g = d.tau_g;
  bp.theta = d.theta;
  return bp;
}

double j_prime_nu(const BoundaryPoint& bp, const CurveDensitySpec& lambda, double varpi,
                  double beta) {
  if (bp.kappa < kMinKappaForG)
    throw SingularG("Lambda'/kappa requested at kappa ~ 0 on the boundary");
  const double k = bp.kappa;
  const double L0 = eval_curve_density(lambda, k, 0);
  const double L1 = eval_curve_density(lambda, k, 1);
  const double L2 = eval_curve_density(lambda, k, 2);
  const double L3 = eval_curve_density(lambda, k, 3);
  const double G = L1 / k;
  const double W = (L2 * k - L1) / (k * k);          // dG/dkappa
  const double Wp = L3 / k - 2.0 * (L2 * k - L1) / (k * k * k);
  const double Gs = bp.kappa_s * W;
  const double Gss = bp.kappa_ss * W + bp.kappa_s * bp.kappa_s * Wp;
  const double circ = k * L1 - L0 - beta;
  const double Gkn_ss = Gss * bp.kappa_n + 2.0 * Gs * bp.kappa_n_s + G * bp.kappa_n_ss;
  return Gkn_ss + circ * bp.kappa_n +
         (G * bp.tau_g + varpi) * (bp.kappa_g_s - bp.kappa_n * bp.tau_g) +
         2.0 * Gs * bp.kappa_g * bp.tau_g +
         G * (bp.kappa_g_s * bp.tau_g + bp.kappa_g * bp.tau_g_s);
}

double j_prime_n(const BoundaryPoint& bp, const CurveDensitySpec& lambda, double varpi,
                 double beta) {
  if (bp.kappa < kMinKappaForG)
    throw SingularG("Lambda'/kappa requested at kappa ~ 0 on the boundary");
  const double k = bp.kappa;
  const double L0 = eval_curve_density(lambda, k, 0);
  const double L1 = eval_curve_density(lambda, k, 1);
  const double L2 = eval_curve_density(lambda, k, 2);
  const double L3 = eval_curve_density(lambda, k, 3);
  const double G = L1 / k;
  const double W = (L2 * k - L1) / (k * k);
  const double Wp = L3 / k - 2.0 * (L2 * k - L1) / (k * k * k);
  const double Gs = bp.kappa_s * W;
  const double Gss = bp.kappa_ss * W + bp.kappa_s * bp.kappa_s * Wp;
  const double circ = k * L1 - L0 - beta;
  const double Gkg_ss = Gss * bp.kappa_g + 2.0 * Gs * bp.kappa_g_s + G * bp.kappa_g_ss;
  return Gkg_ss + circ * bp.kappa_g -
         (G * bp.tau_g + varpi) * (bp.kappa_n_s + bp.kappa_g * bp.tau_g) -
         2.0 * Gs * bp.kappa_n * bp.tau_g -
         G * (bp.kappa_n_s * bp.tau_g + bp.kappa_n * bp.tau_g_s);
}

BoundaryResiduals boundary_residuals(const BoundaryPoint& bp, const EnergyParams& params,
                                     double H, double /*dnH*/, double dnPdot) {
  BoundaryResiduals r;
  const double P0 = eval_density(params.density, H, 0);
  const double P1 = eval_density(params.density, H, 1);
  const double K = bp.kappa_n * (2.0 * H - bp.kappa_n) - bp.tau_g * bp.tau_g;
  r.el2 = P1 + 2.0 * params.eta * bp.kappa_n;
  r.el3 = 2.0 * j_prime_nu(bp, params.boundary_density, params.varpi, params.beta) +
          2.0 * params.eta * bp.tau_g_s - dnPdot;
  r.el4 = j_prime_n(bp, params.boundary_density, params.varpi, params.beta) +
          params.eta * K + P0;
  return r;
}

GeodesicBC geodesic_bc_residuals(const ParallelData& d, const EnergyParams& params, double H,
                                 double dnPdot) {
  GeodesicBC g;
  const double P0 = eval_density(params.density, H, 0);
  const double P1 = eval_density(params.density, H, 1);
  const double circ = circle_condition(params.boundary_density, d.kappa, params.beta);
  const double K = d.kappa_n * (2.0 * H - d.kappa_n);
  g.bc1 = P1 + 2.0 * params.eta * d.kappa_n;
  g.bc2 = 2.0 * circ * d.kappa_n - dnPdot;
  g.bc3 = P0 + params.eta * K;
  return g;
}

NonGeodesicBC nongeodesic_bc_residuals(const ParallelData& d, const EnergyParams& params,
                                       double H, double dnPdot) {
  NonGeodesicBC g;
  const double P0 = eval_density(params.density, H, 0);
  const double P1 = eval_density(params.density, H, 1);
  g.bc1 = circle_condition(params.boundary_density, d.kappa, params.beta);
  g.bc2 = P1 + 2.0 * params.eta * d.kappa_n;
  g.bc3 = 2.0 * P0 - (2.0 * H - d.kappa_n) * P1;
  g.pdot_s = dnPdot;
  return g;
}

std::vector<double> interior_residual(const ProfileTrajectory& traj,
                                      const DensitySpec& density) {
  const auto& smp = traj.samples;
  if (smp.size() < 5) throw DifferentiationError("too few samples for interior residual");
  std::vector<double> ss(smp.size()), hp(smp.size());
  for (std::size_t i = 0; i < smp.size(); ++i) {
    ss[i] = smp[i].s;
    hp[i] = smp[i].H_prime;
  }
  const FdGrid grid(ss, hp);
  std::vector<double> out(smp.size());
  for (std::size_t i = 0; i < smp.size(); ++i) {
    const auto& q = smp[i];
    const double P0 = eval_density(density, q.H, 0);
    const double P1 = eval_density(density, q.H, 1);
    const double P2 = eval_density(density, q.H, 2);
    const double P3 = eval_density(density, q.H, 3);
    const double Hpp = grid.derivative(q.s);
    const double Pdot_s = P2 * q.H_prime;
    const double Pdot_ss = P3 * q.H_prime * q.H_prime + P2 * Hpp;
    double laplacian;
    double K;
    if (q.r > 0.0) {
      laplacian = Pdot_ss + (std::cos(q.phi) / q.r) * Pdot_s;
      K = q.phi_prime * std::sin(q.phi) / q.r;
    } else {
      // Axis limit: (cos(phi)/r) Pdot_s -> Pdot_ss, so Delta P' -> 2 Pdot_ss.
      laplacian = 2.0 * Pdot_ss;
      K = q.phi_prime * q.phi_prime;
    }
    out[i] = laplacian + 2.0 * P1 * (2.0 * q.H * q.H - K) - 4.0 * q.H * P0;
  }
  return out;
}

std::vector<double> interior_residual_relative(const ProfileTrajectory& traj,
                                               const DensitySpec& density) {
  auto out = interior_residual(traj, density);
  const auto& smp = traj.samples;
  for (std::size_t i = 0; i < smp.size(); ++i) {
    const auto& q = smp[i];
    const double P0 = eval_density(density, q.H, 0);
    const double P1 = eval_density(density, q.H, 1);
    const double P2 = eval_density(density, q.H, 2);
    double K, transport;
    if (q.r > 0.0) {
      K = q.phi_prime * std::sin(q.phi) / q.r;
      transport = std::abs(std::cos(q.phi) / q.r * P2 * q.H_prime);
    } else {
      K = q.phi_prime * q.phi_prime;
      transport = 0.0;
    }
    const double scale =
        std::max(1.0, transport + std::abs(2.0 * P1 * (2.0 * q.H * q.H - K)) +
                          std::abs(4.0 * q.H * P0));
    out[i] /= scale;
  }
  return out;
}

std::vector<double> p_willmore_interior_residual(const ProfileTrajectory& traj,
                                                 const PWillmore& d) {
  const auto& smp = traj.samples;
  if (smp.size() < 5) throw DifferentiationError("too few samples for interior residual");
  std::vector<double> ss(smp.size()), qs(smp.size());
  // Q := p (H - c0)^(p-1); Delta Q + 2 (H-c0)^(p-1)(2(p-1)H^2 - pK + 2 c0 H).
  for (std::size_t i = 0; i < smp.size(); ++i) {
    ss[i] = smp[i].s;
    qs[i] = d.p == 0.0 ? 0.0 : d.p * real_power(smp[i].H - d.c0, d.p - 1.0);
  }
  const FdGrid grid(ss, qs);
  std::vector<double> qs1(smp.size());
  for (std::size_t i = 0; i < smp.size(); ++i) qs1[i] = grid.derivative(ss[i]);
  const FdGrid grid1(ss, qs1);
  std::vector<double> out(smp.size());
  for (std::size_t i = 0; i < smp.size(); ++i) {
    const auto& q = smp[i];
    const double Qss = grid1.derivative(q.s);
    double laplacian, K;
    if (q.r > 0.0) {
      laplacian = Qss + (std::cos(q.phi) / q.r) * qs1[i];
      K = q.phi_prime * std::sin(q.phi) / q.r;
    } else {
      laplacian = 2.0 * Qss;
      K = q.phi_prime * q.phi_prime;
    }
    const double pw = real_power(q.H - d.c0, d.p - 1.0);
    out[i] = laplacian + 2.0 * pw * (2.0 * (d.p - 1.0) * q.H * q.H - d.p * K +
                                     2.0 * d.c0 * q.H);
  }
  return out;
}

double rescaling_defect(const ProfileTrajectory& traj, const EnergyParams& params,
                        double quad_tol) {
  const double lhs = surface_rescaling_integral(traj, params.density, quad_tol);
  const auto& b = traj.boundary();
  const double kappa_b = 1.0 / b.r;
  const double rhs =
      2.0 * kPi * b.r * circle_condition(params.boundary_density, kappa_b, params.beta);
  return lhs - rhs;
}

double flux_value(const ProfileTrajectory& traj, double c0, double p, double quad_tol) {
  std::vector<double> breaks;
  for (const auto& q : traj.samples) breaks.push_back(q.s);
  auto integrand = [&](double s) {
    const auto q = traj.at(s);
    return real_power(q.H - c0, p - 1.0) * ((2.0 - p) * q.H - 2.0 * c0) * q.r;
  };
  return 2.0 * kPi * composite_gauss(integrand, breaks, quad_tol).value;
}

double CapCriticality::beta_required(const CurveDensitySpec& lambda, double kappa0) const {
  return kappa0 * eval_curve_density(lambda, kappa0, 1) - eval_curve_density(lambda, kappa0, 0);
}

CapCriticality cap_criticality(double p, double kappa0, double sigma, double c0) {
  if (!(kappa0 > 0.0)) throw DomainError("cap needs kappa0 > 0");
  if (!(sigma > 0.0)) throw DomainError("cap needs sigma > 0");
  if (p <= 0.0) throw BranchError("cap criticality is stated for p > 0");

  CapCriticality out;
  if (p == 1.0) {
    if (!(c0 < 0.0)) throw BranchError("p = 1 caps require c0 < 0");
    out.eta = -sigma / (4.0 * c0);
    out.H0 = 2.0 * c0;
    out.eta_sign_ok = out.eta > 0.0;
  } else if (p == 2.0) {
    out.c0_forced_zero = c0 != 0.0;
    out.eta = -sigma;
    out.H0.reset();  // free negative constant
    out.eta_sign_ok = out.eta < 0.0;
  } else {
    if (p != std::floor(p)) throw BranchError("p > 2 cap branch needs integer p");
    if (!(c0 > 0.0)) throw BranchError("p > 2 caps require c0 > 0");
    const double num = sigma * real_power(p, p) * real_power(-c0, p - 2.0);
    const double den = 4.0 * real_power(p - 2.0, p - 2.0);
    out.eta = -num / den;
    out.H0 = -2.0 * c0 / (p - 2.0);
    const bool even = std::fmod(p, 2.0) == 0.0;
    out.eta_sign_ok = even ? out.eta < 0.0 : out.eta > 0.0;
  }
  out.feasible = !out.H0 || kappa0 >= -*out.H0;
  return out;
}

CmcClassification cmc_classify(double H0, double c0, double p) {
  CmcClassification out;
  const double tol = 1e-12 * std::max({1.0, std::abs(H0), std::abs(c0)});
  if (std::abs(H0 - c0) <= tol) {
    if (p >= 2.0) {
      out.branch = CmcBranch::GroundState;
    } else {
      out.branch = CmcBranch::NotCritical;
    }
    return out;
  }
  if (p == 0.0) {
    // Interior equation forces H = 0; K is unconstrained.
    if (std::abs(H0) <= tol) {
      out.branch = CmcBranch::Isoparametric;
      out.K.reset();
    } else {
      out.branch = CmcBranch::NotCritical;
    }
    return out;
  }
  out.branch = CmcBranch::Isoparametric;
  out.K = (2.0 * (p - 1.0) * H0 * H0 + 2.0 * c0 * H0) / p;
  return out;
}

std::string CriticalityReport::to_json() const {
  nlohmann::ordered_json j;
  j["regime"] = regime;
  j["residuals"] = {{"el1_max", el1_max}, {"el2", el2}, {"el3", el3}, {"el4", el4}};
  j["rescaling_defect"] = rescaling;
  if (flux)
    j["flux_value"] = *flux;
  else
    j["flux_value"] = nullptr;
  nlohmann::ordered_json params;
  params["eta"] = eta;
  params["beta"] = beta;
  if (sigma) params["sigma"] = *sigma; else params["sigma"] = nullptr;
  if (c0) params["c0"] = *c0; else params["c0"] = nullptr;
  if (p) params["p"] = *p; else params["p"] = nullptr;
  params["varpi"] = varpi;
  j["params"] = params;
  j["orientation_branch"] = orientation_branch;
  if (regularity) j["regularity"] = *regularity;
  if (h_sign) j["H_sign"] = *h_sign;
  j["tolerance"] = tolerance;
  j["critical"] = critical;
  return j.dump(2) + "\n";
}

CriticalityReport assess_trajectory(const ProfileTrajectory& traj, const EnergyParams& params,
                                    const std::string& regime, double tolerance,
                                    double quad_tol) {
  CriticalityReport rep;
  rep.regime = regime;
  rep.varpi = params.varpi;
  rep.eta = params.eta;
  rep.beta = params.beta;
  rep.tolerance = tolerance;
  if (const auto* pw = std::get_if<PWillmore>(&params.density)) {
    rep.sigma = pw->sigma;
    rep.c0 = pw->c0;
    rep.p = pw->p;
  }
  rep.h_sign = traj.h_sign;

  const auto el1 = interior_residual_relative(traj, params.density);
  for (double v : el1) rep.el1_max = std::max(rep.el1_max, std::abs(v));

  const auto& b = traj.boundary();
  const auto pd = parallel_data(b);
  const double dnPdot = eval_density(params.density, b.H, 2) * b.H_prime;
  const auto br = boundary_residuals(BoundaryPoint::from_parallel(pd), params, b.H,
                                     b.H_prime, dnPdot);
  rep.el2 = br.el2;
  rep.el3 = br.el3;
  rep.el4 = br.el4;
  rep.rescaling = rescaling_defect(traj, params, quad_tol);
  if (const auto* pw = std::get_if<PWillmore>(&params.density))
    rep.flux = flux_value(traj, pw->c0, pw->p, quad_tol);

  rep.critical = rep.el1_max < tolerance && std::abs(rep.el2) < tolerance &&
                 std::abs(rep.el3) < tolerance && std::abs(rep.el4) < tolerance &&
                 std::abs(rep.rescaling) < tolerance;
  return rep;
}

}  // namespace disklab
