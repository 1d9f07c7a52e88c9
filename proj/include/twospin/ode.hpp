#ifndef TWOSPIN_ODE_HPP
#define TWOSPIN_ODE_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "twospin/error.hpp"

namespace twospin::ode {

struct StepControl {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double initial_step = 1e-3;
  double min_step = 1e-14;
  long max_steps = 50'000'000;
};

struct Stats {
  long accepted = 0;
  long rejected = 0;
};

/// Dormand-Prince 5(4) for the linear system y' = A y, reporting y at each of
/// `times` (ascending; times[0] is the initial time). The step is clipped so
/// every output time is hit exactly.
template <int N>
std::vector<Eigen::Matrix<double, N, 1>> integrate_linear(const Eigen::Matrix<double, N, N>& a,
                                                          const Eigen::Matrix<double, N, 1>& y0,
                                                          std::span<const double> times,
                                                          const StepControl& ctl = {},
                                                          Stats* stats = nullptr) {
  using Vec = Eigen::Matrix<double, N, 1>;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2; (void)c3; (void)c4; (void)c5;

  std::vector<Vec> out;
  out.reserve(times.size());
  if (times.empty()) return out;
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw DomainError("output times must be strictly increasing");

  Vec y = y0;
  double t = times[0];
  out.push_back(y);
  double h = ctl.initial_step;
  Vec k1 = a * y;
  long steps = 0;
  Stats st;

  for (std::size_t next = 1; next < times.size(); ++next) {
    const double target = times[next];
    while (t < target) {
      if (++steps > ctl.max_steps) throw IntegrationFailure("step budget exhausted at t = " + std::to_string(t));
      bool hit = false;
      double step = h;
      if (t + step >= target) {
        step = target - t;
        hit = true;
      }
      const Vec k2 = a * (y + step * (a21 * k1));
      const Vec k3 = a * (y + step * (a31 * k1 + a32 * k2));
      const Vec k4 = a * (y + step * (a41 * k1 + a42 * k2 + a43 * k3));
      const Vec k5 = a * (y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const Vec k6 = a * (y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const Vec y5 = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const Vec k7 = a * y5;
      const Vec err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double norm = 0.0;
      for (int i = 0; i < y.size(); ++i) {
        const double sc = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y(i)), std::abs(y5(i)));
        norm = std::max(norm, std::abs(err(i)) / sc);
      }
      if (norm <= 1.0) {
        t = hit ? target : t + step;
        y = y5;
        k1 = k7;
        ++st.accepted;
        const double grow = norm > 0.0 ? 0.9 * std::pow(norm, -0.2) : 5.0;
        // A clipped step says nothing about the natural step size.
        if (!hit) h = step * std::clamp(grow, 0.2, 5.0);
      } else {
        ++st.rejected;
        h = step * std::clamp(0.9 * std::pow(norm, -0.2), 0.1, 0.9);
        if (h < ctl.min_step)
          throw IntegrationFailure("step size underflow (h = " + std::to_string(h) +
                                   ") at t = " + std::to_string(t));
      }
    }
    out.push_back(y);
  }
  if (stats) *stats = st;
  return out;
}

} // namespace twospin::ode

#endif // TWOSPIN_ODE_HPP
