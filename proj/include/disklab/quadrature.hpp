#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "disklab/errors.hpp"

namespace disklab {

// 7-point Gauss-Legendre on [a, b].
template <typename F>
double gauss7(F&& f, double a, double b) {
  static constexpr double x1 = 0.4058451513773971669066064;
  static constexpr double x2 = 0.7415311855993944398638648;
  static constexpr double x3 = 0.9491079123427585245261897;
  static constexpr double w0 = 0.4179591836734693877551020;
  static constexpr double w1 = 0.3818300505051189449503698;
  static constexpr double w2 = 0.2797053914892766679014678;
  static constexpr double w3 = 0.1294849661688696932706114;
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double s = w0 * f(c);
  s += w1 * (f(c - hw * x1) + f(c + hw * x1));
  s += w2 * (f(c - hw * x2) + f(c + hw * x2));
  s += w3 * (f(c - hw * x3) + f(c + hw * x3));
  return s * hw;
}

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Composite Gauss-Legendre over the given breakpoints with per-interval
// bisection refinement; the h/2 Richardson difference drives the estimate.
template <typename F>
QuadratureResult composite_gauss(F&& f, const std::vector<double>& breaks, double abs_tol,
                                 int max_depth = 24) {
  QuadratureResult out;
  if (breaks.size() < 2) return out;
  const double total_len = breaks.back() - breaks.front();
  struct Seg {
    double a, b;
    int depth;
  };
  std::vector<Seg> stack;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    stack.push_back({breaks[i], breaks[i + 1], 0});
  while (!stack.empty()) {
    const Seg s = stack.back();
    stack.pop_back();
    const double coarse = gauss7(f, s.a, s.b);
    const double m = 0.5 * (s.a + s.b);
    const double fine = gauss7(f, s.a, m) + gauss7(f, m, s.b);
    const double err = std::abs(fine - coarse);
    const double budget = abs_tol * std::max((s.b - s.a) / total_len, 1e-300);
    if (err <= budget || s.depth >= max_depth) {
      if (s.depth >= max_depth && err > budget)
        throw QuadratureError("quadrature tolerance not met at max refinement depth");
      out.value += fine;
      out.error_estimate += err;
    } else {
      stack.push_back({s.a, m, s.depth + 1});
      stack.push_back({m, s.b, s.depth + 1});
    }
  }
  return out;
}

}  // namespace disklab
