#include "disklab/densities.hpp"

#include <cmath>
#include <cstdlib>

#include "disklab/errors.hpp"

namespace disklab {

namespace {

constexpr double kLogSquareMinH = 1e-12;

bool is_integer(double p) { return std::isfinite(p) && p == std::floor(p); }

// p (p-1) ... (p-k+1)
double falling_factorial(double p, int k) {
  double f = 1.0;
  for (int i = 0; i < k; ++i) f *= (p - i);
  return f;
}

double int_power(double x, long long e) {
  if (e < 0) return 1.0 / int_power(x, -e);
  double acc = 1.0;
  double base = x;
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

double eval_p_willmore(const PWillmore& d, double H, int order) {
  if (!(d.sigma > 0.0)) throw DomainError("p_willmore density requires sigma > 0");
  if (d.p < 0.0) throw DomainError("p_willmore density requires p >= 0");
  const double base = H - d.c0;
  if (is_integer(d.p)) {
    const long long ip = static_cast<long long>(d.p);
    if (order > ip) return 0.0;
    return d.sigma * falling_factorial(d.p, order) * int_power(base, ip - order);
  }
  if (base == 0.0) {
    if (d.p > order) return 0.0;
    throw NonSmoothError("fractional-exponent density differentiated past order p at H = c0");
  }
  if (base < 0.0) throw DomainError("fractional exponent with H < c0");
  return d.sigma * falling_factorial(d.p, order) * std::pow(base, d.p - order);
}

double eval_exp_square(double H, int order) {
  const double e = std::exp(H * H);
  switch (order) {
    case 0: return e;
    case 1: return 2.0 * H * e;
    case 2: return (4.0 * H * H + 2.0) * e;
    case 3: return (8.0 * H * H * H + 12.0 * H) * e;
    default: throw DomainError("density derivative order must be 0..3");
  }
}

double eval_log_square(double H, int order) {
  if (std::abs(H) < kLogSquareMinH) throw DomainError("log H^2 evaluated too close to H = 0");
  switch (order) {
    case 0: return std::log(H * H);
    case 1: return 2.0 / H;
    case 2: return -2.0 / (H * H);
    case 3: return 4.0 / (H * H * H);
    default: throw DomainError("density derivative order must be 0..3");
  }
}

double eval_polynomial(const std::vector<double>& a, double x, int order) {
  if (a.empty()) throw DomainError("polynomial density requires at least one coefficient");
  double v = 0.0;
  for (std::size_t i = a.size(); i-- > 0;) {
    const long long ip = static_cast<long long>(i);
    if (ip < order) break;
    v += a[i] * falling_factorial(static_cast<double>(ip), order) * int_power(x, ip - order);
  }
  return v;
}

void check_order(int order) {
  if (order < 0 || order > 3) throw DomainError("density derivative order must be 0..3");
}

}  // namespace

double eval_density(const DensitySpec& spec, double H, int order) {
  check_order(order);
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PWillmore>) return eval_p_willmore(d, H, order);
        if constexpr (std::is_same_v<T, ExpSquare>) return eval_exp_square(H, order);
        if constexpr (std::is_same_v<T, LogSquare>) return eval_log_square(H, order);
        if constexpr (std::is_same_v<T, PolyDensity>) return eval_polynomial(d.coefficients, H, order);
      },
      spec);
}

double eval_curve_density(const CurveDensitySpec& spec, double kappa, int order) {
  check_order(order);
  if (kappa < 0.0) throw DomainError("curve density requires kappa >= 0");
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, QuadraticBend>) {
          switch (order) {
            case 0: return kappa * kappa;
            case 1: return 2.0 * kappa;
            case 2: return 2.0;
            default: return 0.0;
          }
        }
        if constexpr (std::is_same_v<T, TotalCurvatureBend>) {
          switch (order) {
            case 0: return d.alpha * kappa;
            case 1: return d.alpha;
            default: return 0.0;
          }
        }
        if constexpr (std::is_same_v<T, PolyBend>) {
          return eval_polynomial(d.coefficients, kappa, order);
        }
      },
      spec);
}

double circle_condition(const CurveDensitySpec& spec, double kappa, double beta) {
  return kappa * eval_curve_density(spec, kappa, 1) - eval_curve_density(spec, kappa, 0) - beta;
}

double real_power(double x, double p) {
  if (is_integer(p)) return int_power(x, static_cast<long long>(p));
  if (x < 0.0) throw DomainError("fractional power of a negative number");
  return std::pow(x, p);
}

std::string density_family_name(const DensitySpec& spec) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PWillmore>) return "p_willmore";
        if constexpr (std::is_same_v<T, ExpSquare>) return "exp_square";
        if constexpr (std::is_same_v<T, LogSquare>) return "log_square";
        if constexpr (std::is_same_v<T, PolyDensity>) return "polynomial";
      },
      spec);
}

std::string curve_density_family_name(const CurveDensitySpec& spec) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, QuadraticBend>) return "quadratic";
        if constexpr (std::is_same_v<T, TotalCurvatureBend>) return "total_curvature";
        if constexpr (std::is_same_v<T, PolyBend>) return "polynomial";
      },
      spec);
}

}  // namespace disklab
