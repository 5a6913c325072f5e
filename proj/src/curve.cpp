#include "disklab/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

#include "disklab/errors.hpp"
#include "disklab/ode.hpp"
#include "disklab/quadrature.hpp"
#include "disklab/rootfind.hpp"

namespace disklab {

namespace {

// State layout: position(3), T(3), N(3), B(3).
using FrenetState = std::array<double, 12>;

Vec3 get3(const FrenetState& y, int off) { return {y[off], y[off + 1], y[off + 2]}; }

void set3(FrenetState& y, int off, const Vec3& v) {
  y[off] = v[0];
  y[off + 1] = v[1];
  y[off + 2] = v[2];
}

// Two Newton-Schulz sweeps toward the nearest orthonormal frame.
void reorthonormalize(FrenetState& y) {
  Vec3 rows[3] = {get3(y, 3), get3(y, 6), get3(y, 9)};
  for (int sweep = 0; sweep < 2; ++sweep) {
    double G[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) G[i][j] = dot(rows[i], rows[j]);
    Vec3 upd[3];
    for (int i = 0; i < 3; ++i) {
      upd[i] = 1.5 * rows[i];
      for (int j = 0; j < 3; ++j) upd[i] = upd[i] - 0.5 * G[i][j] * rows[j];
    }
    for (int i = 0; i < 3; ++i) rows[i] = upd[i];
  }
  set3(y, 3, rows[0]);
  set3(y, 6, rows[1]);
  set3(y, 9, rows[2]);
}

CurveSample sample_from_state(double s, const FrenetState& y,
                              const std::function<double(double)>& kappa,
                              const std::function<double(double)>& tau) {
  CurveSample q;
  q.s = s;
  q.position = get3(y, 0);
  q.T = get3(y, 3);
  q.N = get3(y, 6);
  q.B = get3(y, 9);
  q.kappa = kappa(s);
  q.tau = tau(s);
  return q;
}

// Derivative of f at s[i] from a local polynomial through up to `window`
// neighbouring samples (divided differences, differentiated at the node).
double local_poly_derivative(const std::vector<double>& s, const std::vector<double>& f,
                             std::size_t i, int window = 5) {
  const int n = static_cast<int>(s.size());
  if (n < 2) throw DifferentiationError("need at least two samples");
  const int half = window / 2;
  int lo = static_cast<int>(i) - half;
  lo = std::clamp(lo, 0, n - window);
  if (lo < 0) {
    lo = 0;
    window = n;
  }
  const int m = std::min(window, n);
  // Newton form coefficients.
  std::vector<double> xs(s.begin() + lo, s.begin() + lo + m);
  std::vector<double> c(f.begin() + lo, f.begin() + lo + m);
  for (int j = 1; j < m; ++j)
    for (int k = m - 1; k >= j; --k) c[k] = (c[k] - c[k - 1]) / (xs[k] - xs[k - j]);
  // Differentiate the Newton polynomial at x = s[i].
  const double x = s[i];
  double val = 0.0, dval = 0.0;
  for (int k = m - 1; k >= 0; --k) {
    dval = dval * (x - xs[k]) + val;
    val = val * (x - xs[k]) + c[k];
  }
  return dval;
}

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

std::vector<CurveSample> frenet_evolve(const std::function<double(double)>& kappa,
                                       const std::function<double(double)>& tau, double L,
                                       const FrenetOptions& opts) {
  if (!(L > 0.0)) throw DomainError("curve length must be positive");

  auto rhs = [&](double s, const FrenetState& y, FrenetState& dy) {
    const double k = kappa(s);
    const double t = tau(s);
    if (k < 0.0) throw DomainError("kappa(s) must be nonnegative");
    const Vec3 T = get3(y, 3), N = get3(y, 6), B = get3(y, 9);
    set3(dy, 0, T);
    set3(dy, 3, k * N);
    set3(dy, 6, (-k) * T + t * B);
    set3(dy, 9, (-t) * N);
  };

  DormandPrince<12>::Options oo;
  oo.rtol = opts.rtol;
  oo.atol = opts.atol;
  oo.h_max = opts.max_step;
  oo.h_initial = std::min(opts.max_step, L / 64.0);
  DormandPrince<12> stepper(rhs, oo);

  FrenetState y{};
  set3(y, 3, Vec3{1, 0, 0});
  set3(y, 6, Vec3{0, 1, 0});
  set3(y, 9, Vec3{0, 0, 1});
  stepper.start(0.0, y);

  std::vector<CurveSample> out;
  out.push_back(sample_from_state(0.0, y, kappa, tau));
  while (stepper.time() < L) {
    stepper.step_to(L);
    FrenetState cur = stepper.state();
    reorthonormalize(cur);
    stepper.set_state(cur);
    out.push_back(sample_from_state(stepper.time(), cur, kappa, tau));
  }
  return out;
}

ClosedCurve make_closed_curve(std::vector<CurveSample> samples, double curvature_period,
                              double closure_tol) {
  if (samples.size() < 3) throw DomainError("closed curve needs at least three samples");
  ClosedCurve c;
  c.length = samples.back().s;
  c.curvature_period = curvature_period;
  c.closure_defect = norm(samples.back().position - samples.front().position);
  c.samples = std::move(samples);
  if (c.closure_defect > closure_tol)
    throw DomainError("curve does not close: defect " + std::to_string(c.closure_defect));
  return c;
}

RodFirstIntegral rod_criticality(const ClosedCurve& curve, const CurveDensitySpec& lambda,
                                 double eta, double varpi, double beta,
                                 const std::function<double(double)>* kappa_prime) {
  RodFirstIntegral out;
  const auto& smp = curve.samples;
  std::vector<double> ss(smp.size()), ks(smp.size());
  for (std::size_t i = 0; i < smp.size(); ++i) {
    ss[i] = smp[i].s;
    ks[i] = smp[i].kappa;
  }
  out.V.resize(smp.size());
  for (std::size_t i = 0; i < smp.size(); ++i) {
    const auto& q = smp[i];
    const double L0 = eval_curve_density(lambda, q.kappa, 0);
    const double L1 = eval_curve_density(lambda, q.kappa, 1);
    const double L2 = eval_curve_density(lambda, q.kappa, 2);
    const double kp = kappa_prime ? (*kappa_prime)(q.s) : local_poly_derivative(ss, ks, i);
    const double tangential = q.kappa * L1 - L0 - beta;
    const double normal = L2 * kp;  // d/ds of Lambda'(kappa(s))
    const double binormal = q.tau * L1 + eta * q.tau - varpi * q.kappa;
    out.V[i] = tangential * q.T + normal * q.N + binormal * q.B;
  }

  // Arclength-weighted mean (trapezoid), then the worst deviation.
  Vec3 acc{0, 0, 0};
  double wsum = 0.0;
  for (std::size_t i = 0; i + 1 < smp.size(); ++i) {
    const double w = smp[i + 1].s - smp[i].s;
    acc = acc + (0.5 * w) * (out.V[i] + out.V[i + 1]);
    wsum += w;
  }
  out.mean = (1.0 / wsum) * acc;
  out.max_deviation = 0.0;
  for (const auto& v : out.V)
    out.max_deviation = std::max(out.max_deviation, norm(v - out.mean));
  return out;
}

double closure_integral(const std::function<double(double)>& kappa,
                        const CurveDensitySpec& lambda, double beta, double period) {
  if (!(period > 0.0)) throw DomainError("period must be positive");
  auto integrand = [&](double s) { return circle_condition(lambda, kappa(s), beta); };
  std::vector<double> breaks;
  const int n = 16;
  for (int i = 0; i <= n; ++i) breaks.push_back(period * i / n);
  return composite_gauss(integrand, breaks, 1e-12).value;
}

double closure_integral(const std::vector<double>& s, const std::vector<double>& kappa,
                        const CurveDensitySpec& lambda, double beta) {
  if (s.size() != kappa.size() || s.size() < 6)
    throw DomainError("closure integral needs >= 6 samples over one period");
  const auto profile = curvature_profile_from_samples(s, kappa);
  auto integrand = [&](double x) { return circle_condition(lambda, profile.value(x), beta); };
  std::vector<double> breaks(s);
  return composite_gauss(integrand, breaks, 1e-12).value;
}

CurvatureProfile constant_curvature_profile(double kappa0) {
  CurvatureProfile p;
  p.value = [kappa0](double) { return kappa0; };
  p.d1 = [](double) { return 0.0; };
  p.d2 = [](double) { return 0.0; };
  return p;
}

CurvatureProfile curvature_profile_from_samples(std::vector<double> s,
                                                std::vector<double> kappa) {
  if (s.size() != kappa.size() || s.size() < 6)
    throw DomainError("need >= 6 samples for a quintic local interpolation");
  auto shared_s = std::make_shared<std::vector<double>>(std::move(s));
  auto shared_k = std::make_shared<std::vector<double>>(std::move(kappa));

  auto eval_order = [shared_s, shared_k](double x, int order) {
    const auto& ss = *shared_s;
    const auto& kk = *shared_k;
    const int n = static_cast<int>(ss.size());
    auto it = std::lower_bound(ss.begin(), ss.end(), x);
    int center = static_cast<int>(it - ss.begin());
    int lo = std::clamp(center - 3, 0, n - 6);
    const int m = 6;
    std::vector<double> xs(ss.begin() + lo, ss.begin() + lo + m);
    std::vector<double> c(kk.begin() + lo, kk.begin() + lo + m);
    for (int j = 1; j < m; ++j)
      for (int k = m - 1; k >= j; --k) c[k] = (c[k] - c[k - 1]) / (xs[k] - xs[k - j]);
    double v = 0.0, d1 = 0.0, d2 = 0.0;
    for (int k = m - 1; k >= 0; --k) {
      d2 = d2 * (x - xs[k]) + 2.0 * d1;
      d1 = d1 * (x - xs[k]) + v;
      v = v * (x - xs[k]) + c[k];
    }
    switch (order) {
      case 0: return v;
      case 1: return d1;
      default: return d2;
    }
  };

  CurvatureProfile p;
  p.value = [eval_order](double x) { return eval_order(x, 0); };
  p.d1 = [eval_order](double x) { return eval_order(x, 1); };
  p.d2 = [eval_order](double x) { return eval_order(x, 2); };
  return p;
}

std::vector<double> planar_elastica_residual(const CurvatureProfile& kappa,
                                             const std::vector<double>& s,
                                             const CurveDensitySpec& lambda, double beta,
                                             double sigma_area, int sign) {
  std::vector<double> out;
  out.reserve(s.size());
  for (double si : s) {
    const double k = kappa.value(si);
    const double kp = kappa.d1(si);
    const double kpp = kappa.d2(si);
    const double L0 = eval_curve_density(lambda, k, 0);
    const double L1 = eval_curve_density(lambda, k, 1);
    const double L2 = eval_curve_density(lambda, k, 2);
    const double L3 = eval_curve_density(lambda, k, 3);
    // (Lambda')'' along the curve = Lambda''' k'^2 + Lambda'' k''.
    const double lp_ss = L3 * kp * kp + L2 * kpp;
    out.push_back(lp_ss + k * k * L1 - k * (L0 + beta) + sign * sigma_area);
  }
  return out;
}

std::vector<double> solve_circle_curvature(const CurveDensitySpec& lambda, double beta,
                                           double sigma_area, int sign,
                                           const CircleRootOptions& opts) {
  auto g = [&](double k) {
    return k * k * eval_curve_density(lambda, k, 1) -
           k * (eval_curve_density(lambda, k, 0) + beta) + sign * sigma_area;
  };
  auto gp = [&](double k) {
    return k * eval_curve_density(lambda, k, 1) + k * k * eval_curve_density(lambda, k, 2) -
           eval_curve_density(lambda, k, 0) - beta;
  };
  auto gpp = [&](double k) {
    return 3.0 * k * eval_curve_density(lambda, k, 2) +
           k * k * eval_curve_density(lambda, k, 3);
  };

  const int n = opts.scan_points;
  // Log-spaced scan: curvature scales are a priori unknown.
  std::vector<double> ks(n), gs(n);
  const double lmin = std::log(opts.scan_min), lmax = std::log(opts.scan_max);
  double gmax = 0.0;
  for (int i = 0; i < n; ++i) {
    ks[i] = std::exp(lmin + (lmax - lmin) * i / (n - 1));
    gs[i] = g(ks[i]);
    gmax = std::max(gmax, std::abs(gs[i]));
  }
  if (gmax < 1e-13 * std::max(1.0, std::abs(beta) + std::abs(sigma_area)))
    throw NoRoot("degenerate: circle condition vanishes identically on the scan interval");

  std::vector<double> roots;
  auto push_root = [&](double k) {
    if (!(k > 0.0) || !std::isfinite(k)) return;
    if (std::abs(g(k)) > opts.value_tol * std::max(1.0, gmax)) return;
    for (double r : roots)
      if (std::abs(r - k) < 1e-8 * std::max(1.0, std::abs(k))) return;
    roots.push_back(k);
  };

  for (int i = 0; i + 1 < n; ++i) {
    if (gs[i] == 0.0) push_root(ks[i]);
    if ((gs[i] < 0.0) != (gs[i + 1] < 0.0)) {
      double k0 = bisect(g, ks[i], ks[i + 1], 1e-14 * ks[i + 1]);
      push_root(newton_polish(g, gp, k0, 1e-15));
    }
  }
  // Tangential roots: |g| local minima near zero, polished on g'.
  for (int i = 1; i + 1 < n; ++i) {
    const double a = std::abs(gs[i]);
    if (a <= std::abs(gs[i - 1]) && a <= std::abs(gs[i + 1]) &&
        a < 1e-4 * std::max(1.0, gmax)) {
      const double k0 = newton_polish(gp, gpp, ks[i], 1e-15);
      push_root(k0);
    }
  }
  if (roots.empty()) throw NoRoot("no positive circle curvature in the scan interval");
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::string curve_to_csv(const std::vector<CurveSample>& samples) {
  std::string out = "s,x,y,z,Tx,Ty,Tz,kappa,tau\n";
  for (const auto& q : samples) {
    append_double(out, q.s);
    for (double v : {q.position[0], q.position[1], q.position[2], q.T[0], q.T[1], q.T[2],
                     q.kappa, q.tau}) {
      out += ',';
      append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

std::vector<CurveSample> curve_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DomainError("empty curve CSV");
  std::vector<CurveSample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CurveSample q;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &q.s,
                    &q.position[0], &q.position[1], &q.position[2], &q.T[0], &q.T[1],
                    &q.T[2], &q.kappa, &q.tau) != 9)
      throw DomainError("malformed curve CSV row: " + line);
    out.push_back(q);
  }
  return out;
}

}  // namespace disklab
