#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace disklab {

// Bisection to |b-a| < xtol; assumes f(a), f(b) have opposite signs.
template <typename F>
double bisect(F&& f, double a, double b, double xtol, int max_iter = 200) {
  double fa = f(a);
  for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fa <= 0.0) == (fm <= 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Newton with explicit derivative; falls back to the start on failure.
template <typename F, typename DF>
double newton_polish(F&& f, DF&& df, double x0, double xtol, int max_iter = 60) {
  double x = x0;
  for (int i = 0; i < max_iter; ++i) {
    const double fx = f(x);
    const double dfx = df(x);
    if (dfx == 0.0 || !std::isfinite(dfx)) break;
    const double step = fx / dfx;
    x -= step;
    if (!std::isfinite(x)) return x0;
    if (std::abs(step) < xtol) break;
  }
  return x;
}

struct Newton2DResult {
  std::array<double, 2> x{};
  std::array<double, 2> residual{};
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Damped Newton for F: R^2 -> R^2 with forward-difference Jacobian and a
// Levenberg fallback when the Jacobian is near-singular (the geodesic regime
// produces rank-deficient target pairs at solutions).
Newton2DResult damped_newton_2d(
    const std::function<std::array<double, 2>(const std::array<double, 2>&)>& f,
    std::array<double, 2> x0, double f_tol, int max_iter = 50,
    double fd_rel_step = 1e-6);

}  // namespace disklab
