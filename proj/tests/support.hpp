#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "disklab/densities.hpp"
#include "disklab/profile.hpp"

namespace disklab::testing {

// Central finite difference of a scalar function (oracle side only).
inline double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Observed convergence rate of the central difference against a reference
// derivative across two steps.
inline double fd_convergence_rate(const std::function<double(double)>& f, double x,
                                  double reference, double h1, double h2) {
  const double e1 = std::abs(central_diff(f, x, h1) - reference);
  const double e2 = std::abs(central_diff(f, x, h2) - reference);
  return std::log(e1 / e2) / std::log(h1 / h2);
}

// Composite Simpson reference quadrature, independent of the library's
// Gauss-Legendre path.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2 == 1) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Estimate kappa and tau from evolved frame samples by centered differences
// of T and B (round-trip oracle).
struct FrenetEstimate {
  double kappa;
  double tau;
};

template <typename Samples>
FrenetEstimate estimate_frenet(const Samples& smp, std::size_t i) {
  const auto& a = smp[i - 1];
  const auto& b = smp[i + 1];
  const double ds = b.s - a.s;
  FrenetEstimate e{};
  double tp[3], bp[3];
  for (int k = 0; k < 3; ++k) {
    tp[k] = (b.T[k] - a.T[k]) / ds;
    bp[k] = (b.B[k] - a.B[k]) / ds;
  }
  e.kappa = std::sqrt(tp[0] * tp[0] + tp[1] * tp[1] + tp[2] * tp[2]);
  // B' = -tau N
  const auto& mid = smp[i];
  e.tau = -(bp[0] * mid.N[0] + bp[1] * mid.N[1] + bp[2] * mid.N[2]);
  return e;
}

}  // namespace disklab::testing
