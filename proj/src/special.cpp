#include "disklab/special.hpp"

#include <cmath>

#include "disklab/errors.hpp"
#include "disklab/quadrature.hpp"

namespace disklab {

namespace {

struct WeingartenKernel {
  double c0, d;
  double u(double chi) const { return std::sqrt(-(chi * chi + 2.0 * c0 * chi)); }
  double g(double chi) const { return -(d + c0 * c0) * chi * chi - 2.0 * c0 * d * chi; }
  double chi_prime(double chi) const {
    const double uu = u(chi);
    return uu * uu * std::sqrt(g(chi)) / (c0 * c0);
  }
  double ds_dchi(double chi) const { return 1.0 / chi_prime(chi); }
  double dz_dchi(double chi) const {
    const double uu = u(chi);
    return c0 * c0 * c0 * chi / (std::sqrt(d) * uu * uu * uu * std::sqrt(g(chi)));
  }
  double r(double chi) const { return (chi + c0) / (std::sqrt(d) * u(chi)); }
  double sin_phi(double chi) const { return c0 * chi / (std::sqrt(d) * u(chi)); }
  double cos_phi(double chi) const { return std::sqrt(g(chi)) / (std::sqrt(d) * u(chi)); }
  double H(double chi) const { return -chi * chi / (2.0 * (chi + c0)); }
  double H_prime(double chi) const {
    const double uu = u(chi);
    const double cc = chi + c0;
    return uu * uu * uu * uu * std::sqrt(g(chi)) / (2.0 * c0 * c0 * cc * cc);
  }
};

}  // namespace

double weingarten_kn(double chi, double c0) {
  if (std::abs(chi + c0) < 1e-14 * std::max(1.0, std::abs(c0)))
    throw AxisSingularity("kappa_n formula is singular at the axis value chi = -c0");
  return -c0 * chi / (chi + c0);
}

WeingartenSurface weingarten_profile(const WeingartenSpec& spec, int n) {
  if (!(spec.c0 > 0.0)) throw DomainError("weingarten family requires c0 > 0");
  if (n < 100) throw DomainError("weingarten family requires n >= 100");
  if (!(spec.d >= spec.c0 * spec.c0))
    throw DomainError("weingarten family requires d >= c0^2");
  const WeingartenKernel ker{spec.c0, spec.d};
  const double chi_axis = -spec.c0;
  const double chi_end = -2.0 * spec.c0 / 3.0;
  if (ker.g(chi_axis) <= 1e-12 * spec.c0 * spec.c0 * spec.d)
    throw BranchStall("chi' vanishes at the axis value (d = c0^2 is degenerate)");

  WeingartenSurface out;
  out.apex_z = 1.0;  // z anchored at the axis point

  // chi is monotone here (no turning point inside [-c0, -2c0/3] for d > c0^2),
  // so arclength and height come from plain quadrature in chi.
  const double dchi = (chi_end - chi_axis) / (n - 1);
  double s_acc = 0.0, z_acc = out.apex_z;
  out.trajectory.axis_is_regular = false;
  out.trajectory.h_sign = -1;
  for (int j = 1; j < n; ++j) {
    const double a = chi_axis + dchi * (j - 1);
    const double b = chi_axis + dchi * j;
    if (ker.g(b) <= 0.0) throw BranchStall("chi' lost positivity inside the domain");
    s_acc += gauss7([&](double x) { return ker.ds_dchi(x); }, a, b);
    z_acc += gauss7([&](double x) { return ker.dz_dchi(x); }, a, b);
    ProfileSample q;
    q.s = s_acc;
    q.r = ker.r(b);
    q.z = z_acc;
    q.phi = std::atan2(ker.sin_phi(b), ker.cos_phi(b));
    q.H = ker.H(b);
    q.phi_prime = -b;
    q.H_prime = ker.H_prime(b);
    out.trajectory.samples.push_back(q);
    out.chi.push_back(b);
  }
  // Cone point: position is well defined, curvature is not (C0 only). The
  // apex sample carries the first ring's H so exports stay finite.
  {
    ProfileSample apex;
    apex.s = 0.0;
    apex.r = 0.0;
    apex.z = out.apex_z;
    apex.phi = std::atan2(-spec.c0 / std::sqrt(spec.d),
                          std::sqrt(1.0 - spec.c0 * spec.c0 / spec.d));
    apex.H = out.trajectory.samples.front().H;
    apex.phi_prime = spec.c0;
    apex.H_prime = out.trajectory.samples.front().H_prime;
    out.trajectory.samples.insert(out.trajectory.samples.begin(), apex);
  }
  out.trajectory.length = s_acc;
  out.trajectory.stop_reason = StopReason::MaxLength;

  double max_res = 0.0;
  for (const auto& q : out.trajectory.samples) {
    if (!(q.r > 0.0)) continue;  // cone point carries no curvature
    const auto c = profile_curvatures(q, q.phi_prime);
    max_res = std::max(max_res, std::abs(c.K - 2.0 * spec.c0 * c.H));
  }
  out.max_weingarten_residual = max_res;
  out.boundary_kappa_n = weingarten_kn(chi_end, spec.c0);

  CriticalityReport rep;
  rep.regime = "weingarten";
  rep.el1_max = max_res;  // linear Weingarten relation plays the interior role
  rep.el2 = out.boundary_kappa_n - 2.0 * spec.c0;
  rep.el3 = 0.0;
  rep.el4 = 0.0;
  rep.rescaling = 0.0;
  rep.eta = 0.0;
  rep.beta = 0.0;
  rep.p = 1.0;
  rep.c0 = spec.c0;
  rep.varpi = 0.0;
  rep.regularity = "C0_at_axis";
  rep.h_sign = -1;
  rep.tolerance = kAnalyticTol;
  rep.critical = max_res < 1e-6 && std::abs(rep.el2) < 1e-8;
  out.report = rep;
  return out;
}

CapResult build_cap(const CapSpec& spec, const CurveDensitySpec& lambda, double beta,
                    int n_samples) {
  CapResult out;
  out.criticality = cap_criticality(spec.p, spec.kappa0, spec.sigma, spec.c0);
  const double H0 = out.criticality.H0 ? *out.criticality.H0 : spec.H0;
  if (!(H0 < 0.0)) throw DomainError("cap mean curvature must be negative");
  if (spec.kappa0 < -H0)
    throw InfeasibleCap("boundary circle cannot lie on the sphere: kappa0 < -H0");
  const double c0_eff = out.criticality.c0_forced_zero ? 0.0 : spec.c0;

  const double alpha = std::asin(-H0 / spec.kappa0);
  out.trajectory = spherical_cap_profile(H0, alpha, n_samples);

  EnergyParams params;
  params.eta = out.criticality.eta;
  params.beta = beta;
  params.varpi = 0.0;
  params.density = PWillmore{spec.sigma, c0_eff, spec.p};
  params.boundary_density = lambda;
  out.report = assess_trajectory(out.trajectory, params, "cap", kAnalyticTol);
  return out;
}

P0BoundaryResiduals p0_minimal_boundary_conditions(const std::vector<DarbouxCurvePoint>& curve,
                                                   const CurveDensitySpec& lambda,
                                                   double varpi, double beta, double sigma,
                                                   double eta) {
  P0BoundaryResiduals out;
  bool planar = !curve.empty();
  for (const auto& pt : curve) {
    const auto& bp = pt.darboux;
    const double jn = j_prime_n(bp, lambda, varpi, beta);
    const double jnu = j_prime_nu(bp, lambda, varpi, beta);
    out.el02.push_back(eta * bp.kappa_n);
    out.el03.push_back(jnu + eta * bp.tau_g_s);
    out.el04.push_back(jn - eta * bp.tau_g * bp.tau_g + sigma);
    if (std::abs(bp.kappa_n) > 1e-12 || std::abs(bp.tau_g) > 1e-12) planar = false;
  }
  for (double v : out.el02) out.max02 = std::max(out.max02, std::abs(v));
  for (double v : out.el03) out.max03 = std::max(out.max03, std::abs(v));
  for (double v : out.el04) out.max04 = std::max(out.max04, std::abs(v));

  if (planar) {
    // kappa_g = +/- kappa on planar data; the constrained elastica equation
    // carries the matching sign on sigma.
    for (const auto& pt : curve) {
      const auto& bp = pt.darboux;
      const double sg = bp.kappa_g >= 0.0 ? 1.0 : -1.0;
      const double L0 = eval_curve_density(lambda, bp.kappa, 0);
      const double L1 = eval_curve_density(lambda, bp.kappa, 1);
      const double L2 = eval_curve_density(lambda, bp.kappa, 2);
      const double L3 = eval_curve_density(lambda, bp.kappa, 3);
      const double lp_ss = L3 * bp.kappa_s * bp.kappa_s + L2 * bp.kappa_ss;
      out.planar_elastica.push_back(lp_ss + bp.kappa * bp.kappa * L1 -
                                    bp.kappa * (L0 + beta) + sg * sigma);
    }
  }

  Vec3 acc{0, 0, 0};
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const double w = curve[i + 1].s - curve[i].s;
    acc = acc + (0.5 * w) * (curve[i].conormal + curve[i + 1].conormal);
  }
  out.conormal_closure = norm(acc);
  return out;
}

P1AxisymResiduals p1_axisym_conditions(double kappa_n, double kappa, double H, double K,
                                       double sigma, double eta, double c0,
                                       const CurveDensitySpec& lambda, double beta) {
  P1AxisymResiduals r;
  r.sigma_relation = sigma + 4.0 * eta * c0;
  r.kappa_n_relation = kappa_n - 2.0 * c0;
  r.circle_relation = circle_condition(lambda, kappa, beta);
  r.weingarten_relation = K - 2.0 * c0 * H;
  return r;
}

}  // namespace disklab
