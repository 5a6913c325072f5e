#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "disklab/errors.hpp"

namespace disklab {

// Dormand-Prince 5(4) embedded pair with the standard 4th-order continuous
// extension. FSAL; deterministic step selection.
template <int N>
class DormandPrince {
 public:
  using State = std::array<double, N>;
  using Rhs = std::function<void(double, const State&, State&)>;

  struct Options {
    double rtol = 1e-9;
    double atol = 1e-9;
    double h_initial = 1e-3;
    double h_min = 1e-14;
    double h_max = 1.0;
    int max_steps = 2'000'000;
    // Components excluded from the error norm (pure quadrature slaves).
    std::array<bool, N> error_mask = all_true();
    static std::array<bool, N> all_true() {
      std::array<bool, N> m;
      m.fill(true);
      return m;
    }
  };

  // One accepted step with everything needed for dense evaluation inside it.
  struct Step {
    double t0 = 0.0;
    double h = 0.0;
    State y0{};
    State y1{};
    std::array<State, 5> rcont{};  // continuous-extension coefficients
    double error = 0.0;            // scaled error estimate of the step

    State eval(double t) const {
      const double theta = (t - t0) / h;
      const double omt = 1.0 - theta;
      State y;
      for (int i = 0; i < N; ++i) {
        y[i] = rcont[0][i] +
               theta * (rcont[1][i] +
                        omt * (rcont[2][i] + theta * (rcont[3][i] + omt * rcont[4][i])));
      }
      return y;
    }
  };

  DormandPrince(Rhs rhs, Options opts) : rhs_(std::move(rhs)), opts_(opts) {}

  void start(double t, const State& y) {
    t_ = t;
    y_ = y;
    rhs_(t_, y_, k1_);
    h_ = opts_.h_initial;
    have_k1_ = true;
  }

  double time() const { return t_; }
  const State& state() const { return y_; }
  const State& derivative() const { return k1_; }
  double suggested_step() const { return h_; }
  void limit_next_step(double h) { h_ = std::min(h_, h); }

  // Replace the current state (e.g. after a frame projection), keeping the
  // step-size history; invalidates FSAL, so the derivative is refreshed.
  void set_state(const State& y) {
    y_ = y;
    rhs_(t_, y_, k1_);
  }

  // Advance by one accepted step, not past t_end. Returns the accepted step.
  Step step_to(double t_end) {
    if (!have_k1_) throw StepFailure("integrator not started");
    int attempts = 0;
    for (;;) {
      if (++attempts > 200) throw StepFailure("step size control failed to converge");
      double h = std::clamp(h_, opts_.h_min, opts_.h_max);
      bool clipped = false;
      if (t_ + h >= t_end) {
        h = t_end - t_;
        clipped = true;
      }
      if (!(h > 0.0)) throw StepFailure("non-positive step request");

      Step s = attempt(h);
      if (s.error <= 1.0) {
        t_ += h;
        y_ = s.y1;
        k1_ = k7_;  // FSAL
        const double fac =
            std::clamp(0.9 * std::pow(std::max(s.error, 1e-16), -0.2), 0.2, 5.0);
        if (!clipped) h_ = h * fac;
        return s;
      }
      const double fac = std::clamp(0.9 * std::pow(s.error, -0.2), 0.1, 0.9);
      h_ = h * fac;
      if (h_ < opts_.h_min) throw StepFailure("step underflow under error control");
    }
  }

 private:
  Step attempt(double h) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0;
    static constexpr double d3 = 87487479700.0 / 32700410799.0;
    static constexpr double d4 = -10690763975.0 / 1880347072.0;
    static constexpr double d5 = 701980252875.0 / 199316789632.0;
    static constexpr double d6 = -1453857185.0 / 822651844.0;
    static constexpr double d7 = 69997945.0 / 29380423.0;

    State k2, k3, k4, k5, k6, ytmp, y1;
    for (int i = 0; i < N; ++i) ytmp[i] = y_[i] + h * a21 * k1_[i];
    rhs_(t_ + c2 * h, ytmp, k2);
    for (int i = 0; i < N; ++i) ytmp[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2[i]);
    rhs_(t_ + c3 * h, ytmp, k3);
    for (int i = 0; i < N; ++i)
      ytmp[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2[i] + a43 * k3[i]);
    rhs_(t_ + c4 * h, ytmp, k4);
    for (int i = 0; i < N; ++i)
      ytmp[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs_(t_ + c5 * h, ytmp, k5);
    for (int i = 0; i < N; ++i)
      ytmp[i] =
          y_[i] + h * (a61 * k1_[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs_(t_ + h, ytmp, k6);
    for (int i = 0; i < N; ++i)
      y1[i] =
          y_[i] + h * (a71 * k1_[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs_(t_ + h, y1, k7_);

    double err2 = 0.0;
    int n_err = 0;
    for (int i = 0; i < N; ++i) {
      if (!opts_.error_mask[i]) continue;
      const double ei = h * (e1 * k1_[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7_[i]);
      const double sc =
          opts_.atol + opts_.rtol * std::max(std::abs(y_[i]), std::abs(y1[i]));
      err2 += (ei / sc) * (ei / sc);
      ++n_err;
    }

    Step s;
    s.t0 = t_;
    s.h = h;
    s.y0 = y_;
    s.y1 = y1;
    s.error = std::sqrt(err2 / std::max(n_err, 1));
    for (int i = 0; i < N; ++i) {
      const double ydiff = y1[i] - y_[i];
      const double bspl = h * k1_[i] - ydiff;
      s.rcont[0][i] = y_[i];
      s.rcont[1][i] = ydiff;
      s.rcont[2][i] = bspl;
      s.rcont[3][i] = ydiff - h * k7_[i] - bspl;
      s.rcont[4][i] = h * (d1 * k1_[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                           d6 * k6[i] + d7 * k7_[i]);
    }
    return s;
  }

  Rhs rhs_;
  Options opts_;
  double t_ = 0.0;
  double h_ = 0.0;
  State y_{};
  State k1_{}, k7_{};
  bool have_k1_ = false;
};

// Locate g(t)=0 in (t0, t1] given a dense step, by bisection on the sign of g.
template <int N, typename G>
double locate_event(const typename DormandPrince<N>::Step& step, G&& g, double t0, double t1,
                    double t_tol) {
  double g0 = g(t0, step.eval(t0));
  double a = t0, b = t1;
  for (int it = 0; it < 200 && (b - a) > t_tol; ++it) {
    const double m = 0.5 * (a + b);
    const double gm = g(m, step.eval(m));
    if ((g0 <= 0.0 && gm <= 0.0) || (g0 > 0.0 && gm > 0.0)) {
      a = m;
      g0 = gm;
    } else {
      b = m;
    }
  }
  return b;
}

}  // namespace disklab
