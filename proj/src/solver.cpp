#include "disklab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "disklab/errors.hpp"
#include "disklab/ode.hpp"
#include "disklab/rootfind.hpp"

namespace disklab {

namespace {

// Magnitude of the first-integral residual's terms. The |P'' H'| piece
// matters at near-cusp folds, where H' ~ 1e5 makes the third product O(1)
// even while cos(phi) passes through zero; without it the bound is stricter
// than double precision can represent.
double density_scale(const DensitySpec& density, double H, double phi_prime,
                     double H_prime) {
  const double P0 = eval_density(density, H, 0);
  const double P1 = eval_density(density, H, 1);
  const double P2 = eval_density(density, H, 2);
  return std::max(1.0, std::abs(P0) + std::abs(P1) * std::max(1.0, std::abs(phi_prime)) +
                           std::abs(P2 * H_prime));
}

void check_nondegenerate(const DensitySpec& density, double H) {
  const double P2 = eval_density(density, H, 2);
  const double scale = std::max({1.0, std::abs(eval_density(density, H, 0)),
                                 std::abs(eval_density(density, H, 1))});
  if (std::abs(P2) < 1e-12 * scale)
    throw DegenerateDensity("P''(H) = 0: profile equation cannot be solved for H'");
}

// Second derivative of H from the interior equilibrium equation; regular at
// vertical tangents (only r > 0 and P'' != 0 are needed).
double H_second_derivative(const ProfileState& st, double W, const DensitySpec& density) {
  const double P0 = eval_density(density, st.H, 0);
  const double P1 = eval_density(density, st.H, 1);
  const double P2 = eval_density(density, st.H, 2);
  const double P3 = eval_density(density, st.H, 3);
  const double sphi = std::sin(st.phi);
  const double cphi = std::cos(st.phi);
  const double k_par = sphi / st.r;
  const double phi_p = 2.0 * st.H - k_par;
  const double K = phi_p * k_par;
  return -(P3 * W * W + (cphi / st.r) * P2 * W +
           2.0 * P1 * (2.0 * st.H * st.H - K) - 4.0 * st.H * P0) /
         P2;
}

struct RecordingContext {
  ProfileTrajectory* traj;
  const DensitySpec* density;
  double fias_tol;
  int h_sign_seen = 0;
  bool h_sign_mixed = false;

  void push(double s, double r, double z, double phi, double H, double phi_p, double H_p) {
    auto& samples = traj->samples;
    if (!samples.empty() && s <= samples.back().s + 1e-10 * std::max(1.0, s)) return;
    ProfileSample q;
    q.s = s;
    q.r = r;
    q.z = z;
    q.phi = phi;
    q.H = H;
    q.phi_prime = phi_p;
    q.H_prime = H_p;
    samples.push_back(q);

    const double res = std::abs(first_integral_residual(q, phi_p, H_p, *density)) /
                       density_scale(*density, H, phi_p, H_p);
    traj->max_first_integral_residual =
        std::max(traj->max_first_integral_residual, res);
    if (res > fias_tol)
      throw ConservationFailure("first-integral residual " + std::to_string(res) +
                                " exceeds tolerance at s = " + std::to_string(s));
    if (H != 0.0) {
      const int sgn = H > 0.0 ? 1 : -1;
      if (h_sign_seen == 0)
        h_sign_seen = sgn;
      else if (h_sign_seen != sgn)
        h_sign_mixed = true;
    }
  }
};

}  // namespace

ProfileDerivatives ode_rhs(const ProfileState& state, const DensitySpec& density) {
  if (!(state.r > 0.0)) throw AxisError("profile equations need r > 0");
  const double P0 = eval_density(density, state.H, 0);
  const double P1 = eval_density(density, state.H, 1);
  const double P2 = eval_density(density, state.H, 2);
  const double scale = std::max({1.0, std::abs(P0), std::abs(P1)});
  if (std::abs(P2) < 1e-12 * scale)
    throw DegenerateDensity("P''(H) = 0: profile equation cannot be solved for H'");
  const double sphi = std::sin(state.phi);
  const double cphi = std::cos(state.phi);
  if (std::abs(cphi) < 1e-13)
    throw StepFailure("profile equations evaluated at a vertical tangent");
  ProfileDerivatives d;
  d.r_prime = cphi;
  d.z_prime = sphi;
  d.phi_prime = 2.0 * state.H - sphi / state.r;
  d.H_prime = (2.0 * P0 - P1 * d.phi_prime) * sphi / (P2 * cphi);
  return d;
}

double first_integral_residual(const ProfileState& state, double phi_prime, double H_prime,
                               const DensitySpec& density) {
  const double P0 = eval_density(density, state.H, 0);
  const double P1 = eval_density(density, state.H, 1);
  const double P2 = eval_density(density, state.H, 2);
  const double sphi = std::sin(state.phi);
  const double cphi = std::cos(state.phi);
  return P0 * sphi - 0.5 * P1 * phi_prime * sphi - 0.5 * P2 * H_prime * cphi;
}

ProfileSample series_start(double phi_prime0, double z0, double h,
                           const DensitySpec& density) {
  if (!(h > 0.0)) throw DomainError("series step must be positive");
  check_nondegenerate(density, phi_prime0);
  const double a1 = phi_prime0;
  const double P0 = eval_density(density, a1, 0);
  const double P1 = eval_density(density, a1, 1);
  const double P2 = eval_density(density, a1, 2);
  const double a3 = a1 * (2.0 * P0 - a1 * P1) / (4.0 * P2);

  ProfileSample q;
  q.s = h;
  q.r = h - a1 * a1 * h * h * h / 6.0;
  q.phi = a1 * h + a3 * h * h * h;
  q.z = z0 + 0.5 * a1 * h * h + (a3 - a1 * a1 * a1 / 6.0) * h * h * h * h / 4.0;
  q.H = a1 + 2.0 * a3 * h * h;
  q.phi_prime = a1 + 3.0 * a3 * h * h;
  q.H_prime = 4.0 * a3 * h;
  return q;
}

ProfileTrajectory integrate_profile(double phi_prime0, const DensitySpec& density,
                                    const StopSpec& stop, const SolverOptions& opts,
                                    double z0) {
  using S4 = std::array<double, 4>;  // r z phi H
  using S5 = std::array<double, 5>;  // r z phi H W

  ProfileTrajectory traj;
  traj.axis_is_regular = true;
  RecordingContext rec{&traj, &density, opts.first_integral_tol};

  // Exact axis point, then the Taylor state one series step away.
  rec.push(0.0, 0.0, z0, 0.0, phi_prime0, phi_prime0, 0.0);
  const ProfileSample s0 = series_start(phi_prime0, z0, opts.series_step, density);
  rec.push(s0.s, s0.r, s0.z, s0.phi, s0.H, s0.phi_prime, s0.H_prime);

  auto rhs4 = [&](double, const S4& y, S4& dy) {
    ProfileState st;
    st.r = y[0];
    st.z = y[1];
    st.phi = y[2];
    st.H = y[3];
    const auto d = ode_rhs(st, density);
    dy = {d.r_prime, d.z_prime, d.phi_prime, d.H_prime};
  };
  auto rhs5 = [&](double, const S5& y, S5& dy) {
    ProfileState st;
    st.r = y[0];
    st.z = y[1];
    st.phi = y[2];
    st.H = y[3];
    if (!(st.r > 0.0)) throw AxisError("profile equations need r > 0");
    const double W = y[4];
    const double sphi = std::sin(st.phi);
    const double cphi = std::cos(st.phi);
    dy[0] = cphi;
    dy[1] = sphi;
    dy[2] = 2.0 * st.H - sphi / st.r;
    dy[3] = W;
    dy[4] = H_second_derivative(st, W, density);
  };

  DormandPrince<4>::Options o4;
  o4.rtol = opts.rtol;
  o4.atol = opts.atol;
  o4.h_initial = opts.h_initial;
  o4.h_max = opts.h_max;
  o4.error_mask = {true, false, true, true};  // z is a quadrature slave
  DormandPrince<5>::Options o5;
  o5.rtol = std::max(1e-13, opts.rtol * 1e-2);
  o5.atol = std::max(1e-13, opts.atol * 1e-2);
  o5.h_initial = opts.h_initial * 0.1;
  o5.h_max = opts.h_max;
  o5.error_mask = {true, false, true, true, true};

  enum class Mode { Four, Five };
  Mode mode = Mode::Four;
  S4 y4{s0.r, s0.z, s0.phi, s0.H};
  S5 y5{};
  double s = s0.s;
  int crossings = 0;
  const double s_end = stop.max_length;
  traj.stop_reason = StopReason::MaxLength;

  DormandPrince<4> step4(rhs4, o4);
  DormandPrince<5> step5(rhs5, o5);
  step4.start(s, y4);

  auto stop_check = [&](double r, double phi, double H) -> bool {
    if (std::abs(H) > stop.H_blowup) {
      traj.stop_reason = StopReason::BlowUp;
      return true;
    }
    {
      // P'' -> 0 degenerates the first-order reduction (H -> c0 for the
      // power densities with p >= 3); record the approach and stop. The
      // P'''/P'' ratio separates a genuine P'' zero from densities whose
      // derivatives all decay together (log H^2 at large H).
      const double P0 = eval_density(density, H, 0);
      const double P1 = eval_density(density, H, 1);
      const double P2 = eval_density(density, H, 2);
      const double P3 = eval_density(density, H, 3);
      const double sc = std::max({1.0, std::abs(P0), std::abs(P1)});
      if (std::abs(P2) < 1e-6 * sc && std::abs(P3) > 100.0 * std::abs(P2)) {
        traj.stop_reason = StopReason::DensityDegeneracy;
        ProfileEvent ev;
        ev.kind = ProfileEvent::Kind::DensityDegeneracy;
        ev.s = s;
        traj.events.push_back(ev);
        return true;
      }
    }
    if (stop.min_abs_H > 0.0 && std::abs(H) < stop.min_abs_H) {
      traj.stop_reason = StopReason::SmallH;
      ProfileEvent ev;
      ev.kind = ProfileEvent::Kind::SmallH;
      ev.s = s;
      traj.events.push_back(ev);
      return true;
    }
    if (r < stop.r_collapse && std::cos(phi) < 0.0) {
      traj.stop_reason = StopReason::CollapseToAxis;
      return true;
    }
    return false;
  };

  auto finalize = [&]() -> ProfileTrajectory& {
    traj.length = traj.samples.back().s;
    traj.h_sign = rec.h_sign_mixed ? 0 : rec.h_sign_seen;
    return traj;
  };

  int guard = 0;
  while (s < s_end - 1e-14 * std::max(1.0, s_end)) {
    if (++guard > 5'000'000) throw StepFailure("profile integration did not terminate");
    try {
    if (mode == Mode::Four) {
      const double cphi = std::cos(y4[2]);
      if (std::abs(cphi) < opts.crossing_band) {
        // Hand over to the regular second-order formulation through the band.
        const auto d = ode_rhs(ProfileState{s, y4[0], y4[1], y4[2], y4[3]}, density);
        y5 = {y4[0], y4[1], y4[2], y4[3], d.H_prime};
        step5.start(s, y5);
        mode = Mode::Five;
        continue;
      }
      // Keep trial stages clear of the vertical tangent and of the axis.
      const auto d = ode_rhs(ProfileState{s, y4[0], y4[1], y4[2], y4[3]}, density);
      double cap = 0.2 * std::abs(cphi) / std::max(std::abs(d.phi_prime), 0.1);
      if (d.r_prime < 0.0) cap = std::min(cap, 0.5 * y4[0] / std::abs(d.r_prime));
      step4.limit_next_step(std::max(cap, 1e-12));
      step4.step_to(s_end);
      s = step4.time();
      y4 = step4.state();
      const auto& k = step4.derivative();
      rec.push(s, y4[0], y4[1], y4[2], y4[3], k[2], k[3]);
      if (stop_check(y4[0], y4[2], y4[3])) return finalize();
    } else {
      {
        const auto& y = step5.state();
        const double rp = std::cos(y[2]);
        if (rp < 0.0) step5.limit_next_step(std::max(0.5 * y[0] / -rp, 1e-12));
      }
      const double cphi_before = std::cos(step5.state()[2]);
      const auto st = step5.step_to(s_end);
      const double cphi_after = std::cos(step5.state()[2]);
      if ((cphi_before < 0.0) != (cphi_after < 0.0)) {
        // Locate the crossing, assert the first-integral constraint there.
        const double s_star = locate_event<5>(
            st, [](double, const S5& y) { return std::cos(y[2]); }, st.t0, st.t0 + st.h,
            opts.crossing_locate_tol);
        const S5 yc = st.eval(s_star);
        const double P0 = eval_density(density, yc[3], 0);
        const double P1 = eval_density(density, yc[3], 1);
        const double phi_p = 2.0 * yc[3] - std::sin(yc[2]) / yc[0];
        const double constraint = std::abs(2.0 * P0 - P1 * phi_p);
        const double scale = density_scale(density, yc[3], phi_p, yc[4]);
        ProfileEvent ev;
        ev.kind = ProfileEvent::Kind::VerticalTangent;
        ev.s = s_star;
        ev.constraint_residual = constraint / scale;
        traj.events.push_back(ev);
        if (constraint > opts.crossing_assert_tol * scale)
          throw ConservationFailure(
              "first-integral constraint violated at a vertical tangent: " +
              std::to_string(constraint / scale));
        ++crossings;
        rec.push(s_star, yc[0], yc[1], yc[2], yc[3], phi_p, yc[4]);
        if (stop.stop_at_vertical_tangent > 0 &&
            crossings >= stop.stop_at_vertical_tangent) {
          traj.stop_reason = StopReason::VerticalTangent;
          while (traj.samples.back().s > s_star + 1e-15) traj.samples.pop_back();
          finalize();
          traj.length = s_star;
          return traj;
        }
      }
      s = step5.time();
      y5 = step5.state();
      const double phi_p = 2.0 * y5[3] - std::sin(y5[2]) / y5[0];
      rec.push(s, y5[0], y5[1], y5[2], y5[3], phi_p, y5[4]);
      if (stop_check(y5[0], y5[2], y5[3])) return finalize();
      if (std::abs(std::cos(y5[2])) > 1.5 * opts.crossing_band) {
        y4 = {y5[0], y5[1], y5[2], y5[3]};
        step4.start(s, y4);
        mode = Mode::Four;
      }
    }
    } catch (const StepFailure&) {
      // The step control starves where the flow leaves its regular domain:
      // curvature blowup, a P'' zero, or a fold into the axis. The trajectory
      // up to the last accepted sample is still meaningful.
      const auto& last = traj.samples.back();
      if (std::abs(last.H) > 1e3 * std::max(1.0, std::abs(phi_prime0))) {
        traj.stop_reason = StopReason::BlowUp;
        return finalize();
      }
      const double P2 = eval_density(density, last.H, 2);
      const double P3 = eval_density(density, last.H, 3);
      const double sc = std::max({1.0, std::abs(eval_density(density, last.H, 0)),
                                  std::abs(eval_density(density, last.H, 1))});
      if (std::abs(P2) < 1e-2 * sc && std::abs(P3) > 100.0 * std::abs(P2)) {
        traj.stop_reason = StopReason::DensityDegeneracy;
        ProfileEvent ev;
        ev.kind = ProfileEvent::Kind::DensityDegeneracy;
        ev.s = traj.samples.back().s;
        traj.events.push_back(ev);
        return finalize();
      }
      throw;
    } catch (const DegenerateDensity&) {
      const auto& last = traj.samples.back();
      if (std::abs(last.H) > 1e3 * std::max(1.0, std::abs(phi_prime0))) {
        traj.stop_reason = StopReason::BlowUp;
        return finalize();
      }
      traj.stop_reason = StopReason::DensityDegeneracy;
      ProfileEvent ev;
      ev.kind = ProfileEvent::Kind::DensityDegeneracy;
      ev.s = traj.samples.back().s;
      traj.events.push_back(ev);
      return finalize();
    } catch (const AxisError&) {
      if (traj.samples.back().r < 1e-2 * std::max(1.0, traj.samples.back().s)) {
        traj.stop_reason = StopReason::CollapseToAxis;
        return finalize();
      }
      throw;
    }
  }
  traj.stop_reason = StopReason::MaxLength;
  return finalize();
}

HelfrichCheck helfrich_first_integral(const ProfileTrajectory& traj, double /*sigma*/,
                                      double c0) {
  HelfrichCheck out;
  std::vector<double> q(traj.samples.size());
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& smp = traj.samples[i];
    if (std::abs(smp.H - c0) < 1e-8)
      throw NearSpontaneous("H approaches c0 along the trajectory");
    q[i] = smp.z + std::cos(smp.phi) / (smp.H - c0);
  }
  double wsum = 0.0, acc = 0.0;
  for (std::size_t i = 0; i + 1 < q.size(); ++i) {
    const double w = traj.samples[i + 1].s - traj.samples[i].s;
    acc += 0.5 * w * (q[i] + q[i + 1]);
    wsum += w;
  }
  out.z0_fit = acc / wsum;
  double var = 0.0;
  for (std::size_t i = 0; i + 1 < q.size(); ++i) {
    const double w = traj.samples[i + 1].s - traj.samples[i].s;
    const double a = q[i] - out.z0_fit;
    const double b = q[i + 1] - out.z0_fit;
    var += 0.5 * w * (a * a + b * b);
    out.max_deviation = std::max({out.max_deviation, std::abs(a), std::abs(b)});
  }
  out.std_deviation = std::sqrt(var / wsum);
  return out;
}

namespace {

struct BoundaryData {
  double kappa_g, kappa_n, kappa, H, P0, P1, Pdot_s;
};

BoundaryData boundary_data(const ProfileTrajectory& traj, const DensitySpec& density) {
  const auto& b = traj.boundary();
  BoundaryData d;
  d.kappa_g = -std::cos(b.phi) / b.r;
  d.kappa_n = std::sin(b.phi) / b.r;
  d.kappa = 1.0 / b.r;
  d.H = b.H;
  d.P0 = eval_density(density, b.H, 0);
  d.P1 = eval_density(density, b.H, 1);
  d.Pdot_s = eval_density(density, b.H, 2) * b.H_prime;
  return d;
}

ProfileTrajectory integrate_to_length(double phi0, double L, const DensitySpec& density,
                                      const StopSpec& stop, const SolverOptions& opts) {
  StopSpec s2 = stop;
  s2.max_length = L;
  s2.stop_at_vertical_tangent = 0;
  ProfileTrajectory t = integrate_profile(phi0, density, s2, opts);
  if (t.stop_reason != StopReason::MaxLength)
    throw NoConvergence("trajectory ended before the requested boundary length");
  return t;
}

ShootingResult finalize_shot(const std::string& regime, const DensitySpec& density,
                             const CurveDensitySpec& lambda, double varpi,
                             const Newton2DResult& nr, const StopSpec& stop,
                             const SolverOptions& opts) {
  ShootingResult out;
  out.regime = regime;
  out.phi_prime0 = nr.x[0];
  out.length = nr.x[1];
  out.iterations = nr.iterations;
  out.target_residual = nr.residual;
  // Final pass at a tighter tolerance: the attached report differentiates the
  // stored samples, and its conditioning follows the integrator jitter.
  SolverOptions fine = opts;
  fine.rtol = std::min(opts.rtol, 1e-12);
  fine.atol = std::min(opts.atol, 1e-12);
  fine.h_max = std::min(opts.h_max, 0.01);
  out.trajectory = integrate_to_length(nr.x[0], nr.x[1], density, stop, fine);
  const auto bd = boundary_data(out.trajectory, density);
  if (std::abs(bd.kappa_n) < 1e-8 * bd.kappa)
    throw SingularBC("kappa_n = 0 at the converged boundary (planar-disk regime)");
  out.eta = -bd.P1 / (2.0 * bd.kappa_n);
  if (regime == "geodesic") {
    out.beta = bd.kappa * eval_curve_density(lambda, bd.kappa, 1) -
               eval_curve_density(lambda, bd.kappa, 0) -
               bd.Pdot_s / (2.0 * bd.kappa_n);
  } else {
    if (std::abs(bd.kappa_g) < 1e-8 * bd.kappa)
      throw RegimeViolation("kappa_g = 0 at the converged boundary: geodesic regime");
    out.beta = bd.kappa * eval_curve_density(lambda, bd.kappa, 1) -
               eval_curve_density(lambda, bd.kappa, 0);
  }
  EnergyParams params;
  params.eta = out.eta;
  params.beta = out.beta;
  params.varpi = varpi;
  params.density = density;
  params.boundary_density = lambda;
  out.report = assess_trajectory(out.trajectory, params, regime, kOdeTol);
  return out;
}

}  // namespace

ShootingResult shoot_geodesic(const DensitySpec& density, const CurveDensitySpec& lambda,
                              const ShootingGuess& guess, const StopSpec& stop,
                              const SolverOptions& opts, double varpi) {
  double L0;
  if (guess.length) {
    L0 = *guess.length;
  } else {
    StopSpec s2 = stop;
    s2.stop_at_vertical_tangent = 1;
    const ProfileTrajectory probe = integrate_profile(guess.phi_prime0, density, s2, opts);
    if (probe.stop_reason != StopReason::VerticalTangent)
      throw NoConvergence("no geodesic parallel (vertical tangent) before max length");
    L0 = probe.length;
  }

  auto targets = [&](const std::array<double, 2>& x) -> std::array<double, 2> {
    const ProfileTrajectory t = integrate_to_length(x[0], x[1], density, stop, opts);
    const auto bd = boundary_data(t, density);
    if (std::abs(bd.kappa_n) < 1e-10 * bd.kappa)
      throw SingularBC("kappa_n = 0 while shooting the geodesic regime");
    const double eta = -bd.P1 / (2.0 * bd.kappa_n);
    const double K = bd.kappa_n * (2.0 * bd.H - bd.kappa_n);
    return {bd.kappa_g, bd.P0 + eta * K};
  };

  const auto nr = damped_newton_2d(targets, {guess.phi_prime0, L0}, 1e-9);
  if (!nr.converged)
    throw NoConvergence("geodesic shooting stalled, |F| = " +
                        std::to_string(nr.residual_norm));
  return finalize_shot("geodesic", density, lambda, varpi, nr, stop, opts);
}

ShootingResult shoot_nongeodesic(const DensitySpec& density, const CurveDensitySpec& lambda,
                                 const ShootingGuess& guess, const StopSpec& stop,
                                 const SolverOptions& opts, double varpi) {
  auto targets = [&](const std::array<double, 2>& x) -> std::array<double, 2> {
    const ProfileTrajectory t = integrate_to_length(x[0], x[1], density, stop, opts);
    const auto bd = boundary_data(t, density);
    const double f2 = 2.0 * bd.P0 - (2.0 * bd.H - bd.kappa_n) * bd.P1;
    return {bd.Pdot_s, f2};
  };

  std::vector<double> candidates;
  if (guess.length) {
    candidates.push_back(*guess.length);
  } else {
    // Candidates: stationary points of H along the probe trajectory, away
    // from vertical tangents (the second target vanishes there for free,
    // but those parallels are geodesic and belong to the other regime).
    const ProfileTrajectory probe = integrate_profile(guess.phi_prime0, density, stop, opts);
    const auto& smp = probe.samples;
    for (std::size_t i = 3; i + 1 < smp.size(); ++i) {
      if (smp[i].s < 10.0 * opts.series_step) continue;
      if ((smp[i].H_prime < 0.0) != (smp[i + 1].H_prime < 0.0)) {
        const double a = smp[i].s, b = smp[i + 1].s;
        const double s_star = bisect(
            [&](double s) { return probe.at(s).H_prime; }, a, b, 1e-12 * std::max(1.0, b));
        bool near_crossing = false;
        for (const auto& ev : probe.events)
          if (ev.kind == ProfileEvent::Kind::VerticalTangent &&
              std::abs(ev.s - s_star) < 0.02 * std::max(1.0, s_star))
            near_crossing = true;
        if (!near_crossing) candidates.push_back(s_star);
      }
    }
    if (candidates.empty())
      throw NoConvergence("no stationary point of H along the probe trajectory");
    // Most promising first: smallest second target.
    std::sort(candidates.begin(), candidates.end(), [&](double a, double b) {
      auto f2_at = [&](double c) {
        const auto q = probe.at(c);
        const double kappa_n = std::sin(q.phi) / q.r;
        return std::abs(2.0 * eval_density(density, q.H, 0) -
                        (2.0 * q.H - kappa_n) * eval_density(density, q.H, 1));
      };
      return f2_at(a) < f2_at(b);
    });
    if (candidates.size() > 5) candidates.resize(5);
  }

  Newton2DResult best{};
  best.residual_norm = 1e300;
  for (double L0 : candidates) {
    const auto nr = damped_newton_2d(targets, {guess.phi_prime0, L0}, 1e-9);
    if (nr.converged) return finalize_shot("nongeodesic", density, lambda, varpi, nr, stop, opts);
    if (nr.residual_norm < best.residual_norm) best = nr;
  }
  throw NoConvergence("non-geodesic shooting stalled, |F| = " +
                      std::to_string(best.residual_norm));
}

std::vector<SweepPoint> sweep_phi0(const DensitySpec& density, double lo, double hi, int n,
                                   const StopSpec& stop, const SolverOptions& opts,
                                   int jobs) {
  std::vector<SweepPoint> out(n);
  auto work = [&](int begin, int stride) {
    for (int i = begin; i < n; i += stride) {
      SweepPoint& p = out[i];
      p.phi_prime0 = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
      try {
        const ProfileTrajectory t = integrate_profile(p.phi_prime0, density, stop, opts);
        p.ok = true;
        p.max_first_integral_residual = t.max_first_integral_residual;
        p.length = t.samples.back().s;
        p.stop_reason = t.stop_reason;
      } catch (const Error& e) {
        p.ok = false;
        p.error = e.what();
      }
    }
  };
  const int workers = std::max(1, jobs);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
  }
  return out;
}

}  // namespace disklab
