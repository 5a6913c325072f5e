#include "disklab/rootfind.hpp"

#include <algorithm>
#include <cmath>

namespace disklab {

namespace {

double norm2(const std::array<double, 2>& v) { return std::hypot(v[0], v[1]); }

// Solve (J^T J + lambda I) dx = -J^T F.
std::array<double, 2> levenberg_step(const std::array<std::array<double, 2>, 2>& J,
                                     const std::array<double, 2>& F, double lambda) {
  const double a = J[0][0] * J[0][0] + J[1][0] * J[1][0] + lambda;
  const double b = J[0][0] * J[0][1] + J[1][0] * J[1][1];
  const double c = b;
  const double d = J[0][1] * J[0][1] + J[1][1] * J[1][1] + lambda;
  const double g0 = -(J[0][0] * F[0] + J[1][0] * F[1]);
  const double g1 = -(J[0][1] * F[0] + J[1][1] * F[1]);
  const double det = a * d - b * c;
  if (det == 0.0 || !std::isfinite(det)) return {0.0, 0.0};
  return {(d * g0 - b * g1) / det, (a * g1 - c * g0) / det};
}

}  // namespace

Newton2DResult damped_newton_2d(
    const std::function<std::array<double, 2>(const std::array<double, 2>&)>& f,
    std::array<double, 2> x0, double f_tol, int max_iter, double fd_rel_step) {
  Newton2DResult res;
  res.x = x0;
  res.residual = f(x0);
  res.residual_norm = norm2(res.residual);

  for (int it = 0; it < max_iter; ++it) {
    res.iterations = it;
    if (res.residual_norm < f_tol) {
      res.converged = true;
      return res;
    }
    std::array<std::array<double, 2>, 2> J{};
    bool jacobian_ok = true;
    for (int j = 0; j < 2; ++j) {
      double dx = fd_rel_step * std::max(std::abs(res.x[j]), 1e-3);
      auto xp = res.x;
      xp[j] += dx;
      std::array<double, 2> fp;
      try {
        fp = f(xp);
      } catch (...) {
        // forward point infeasible (e.g. trajectory collapsed): go backward
        try {
          xp = res.x;
          xp[j] -= dx;
          fp = f(xp);
          dx = -dx;
        } catch (...) {
          jacobian_ok = false;
          break;
        }
      }
      J[0][j] = (fp[0] - res.residual[0]) / dx;
      J[1][j] = (fp[1] - res.residual[1]) / dx;
    }
    if (!jacobian_ok) return res;

    // Plain Newton when well conditioned, Levenberg otherwise.
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    const double scale = std::abs(J[0][0] * J[1][1]) + std::abs(J[0][1] * J[1][0]) + 1e-300;
    std::array<double, 2> dx{};
    if (std::abs(det) > 1e-10 * scale) {
      dx[0] = (-res.residual[0] * J[1][1] + res.residual[1] * J[0][1]) / det;
      dx[1] = (-res.residual[1] * J[0][0] + res.residual[0] * J[1][0]) / det;
    } else {
      const double jn = std::sqrt(J[0][0] * J[0][0] + J[0][1] * J[0][1] +
                                  J[1][0] * J[1][0] + J[1][1] * J[1][1]);
      dx = levenberg_step(J, res.residual, 1e-8 * jn * jn + 1e-300);
    }

    bool improved = false;
    double damp = 1.0;
    for (int ls = 0; ls < 12; ++ls) {
      std::array<double, 2> xt{res.x[0] + damp * dx[0], res.x[1] + damp * dx[1]};
      std::array<double, 2> ft;
      try {
        ft = f(xt);
      } catch (...) {
        damp *= 0.5;
        continue;
      }
      const double n = norm2(ft);
      if (std::isfinite(n) && n < res.residual_norm) {
        res.x = xt;
        res.residual = ft;
        res.residual_norm = n;
        improved = true;
        break;
      }
      damp *= 0.5;
    }
    if (!improved) return res;  // stuck; caller inspects residual_norm
  }
  res.converged = res.residual_norm < f_tol;
  return res;
}

}  // namespace disklab
