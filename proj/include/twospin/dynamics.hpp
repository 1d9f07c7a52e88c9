#ifndef TWOSPIN_DYNAMICS_HPP
#define TWOSPIN_DYNAMICS_HPP

// Time evolution of the two-qubit state (eigen-expansion, adaptive RK and the
// long-time analytic form), concurrence trajectories, the entanglement
// generation condition and survival times.
//
// Times are in units of 1/gamma0 wherever gamma0 = 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "twospin/liouvillian.hpp"
#include "twospin/ode.hpp"
#include "twospin/state.hpp"

namespace twospin {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct Trajectory {
  std::vector<double> times;
  std::vector<PauliVector> states;
  std::vector<double> concurrence;
  /// Indices of states whose smallest eigenvalue is below -1e-8.
  std::vector<std::size_t> positivity_violations;
  bool used_ode_fallback = false;
};

/// (1/2) || rho_a - rho_b ||_1 computed from the Pauli vectors.
inline double trace_distance(const PauliVector& a, const PauliVector& b) {
  const auto& basis = pauli_basis();
  Matrix4c d = Matrix4c::Zero();
  for (int k = 0; k < 16; ++k) d += (0.25 * (a[k] - b[k])) * basis[k];
  d = 0.5 * (d + d.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(d, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

namespace detail {

inline void check_times(std::span<const double> times) {
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw DomainError("trajectory times must be strictly increasing");
}

inline Trajectory finish(std::span<const double> times, std::vector<PauliVector> states) {
  Trajectory tr;
  tr.times.assign(times.begin(), times.end());
  tr.states = std::move(states);
  tr.concurrence.reserve(tr.states.size());
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    const auto rho = bloch_to_density(tr.states[i]);
    if (rho.min_eigenvalue() < -1e-8) tr.positivity_violations.push_back(i);
    tr.concurrence.push_back(std::clamp(detail::concurrence_witness(rho.matrix()), 0.0, 1.0));
  }
  return tr;
}

} // namespace detail

/// alpha(t) by adaptive Dormand-Prince integration of alpha' = L alpha.
/// `tolerance` bounds the local error per step (absolute and relative).
inline Trajectory propagate_ode(const GeneratorMatrix& gen, const PauliVector& initial,
                                std::span<const double> times, double tolerance = 1e-12) {
  detail::check_times(times);
  ode::StepControl ctl;
  ctl.abs_tol = tolerance;
  ctl.rel_tol = tolerance;
  const auto ys = ode::integrate_linear<16>(gen.entries, initial.components(), times, ctl);
  std::vector<PauliVector> states;
  states.reserve(ys.size());
  for (const auto& y : ys) states.emplace_back(y);
  return detail::finish(times, std::move(states));
}

/// alpha(t) = sum_l a_l R_l exp(lambda_l t). Falls back to propagate_ode when
/// the eigenbasis is defective.
inline Trajectory propagate_spectral(const SpectrumReport& report, const PauliVector& initial,
                                     std::span<const double> times) {
  detail::check_times(times);
  std::array<Complex, 16> a;
  try {
    a = mode_coefficients(report, initial);
  } catch (const DefectiveSpectrum&) {
    auto tr = propagate_ode(report.generator, initial, times);
    tr.used_ode_fallback = true;
    return tr;
  }
  std::vector<PauliVector> states;
  states.reserve(times.size());
  for (double t : times) {
    if (t == 0.0) {
      states.push_back(initial);
      continue;
    }
    PauliVector v = reconstruct(report, a, t);
    v[0] = initial[0];
    states.push_back(v);
  }
  return detail::finish(times, std::move(states));
}

/// First-order slow rate lambda_1 = -(1 + 3N) delta gamma0.
inline double first_order_lambda1(const RateSet& rates) {
  return -(1.0 + 3.0 * rates.occupation) * rates.delta * rates.gamma0;
}

/// a_1 = (Lambda - R^2) / (3 + R^2).
inline double analytic_a1(double r, double lambda_corr) {
  return (lambda_corr - r * r) / (3.0 + r * r);
}

/// alpha(t) = alpha_0 + a_1 alpha_1 exp(lambda_1 t), the long-time form with a_2 = 0.
inline PauliVector analytic_state(const BathThermal& thermal, const RateSet& rates,
                                  const CorrelationScalar& lambda_corr, double t) {
  if (!(t >= 0.0)) throw DomainError("time must be >= 0");
  const auto slow = analytic_slow_eigenpair(thermal, rates);
  const double a1 = analytic_a1(thermal.ratio(), lambda_corr.value());
  const Vector16d v = analytic_thermal_state(thermal).components() +
                      a1 * std::exp(slow.lambda1 * t) * slow.pattern.components();
  return PauliVector(v);
}

/// Long-time concurrence for given R, Lambda and slow rate lambda_1.
inline double analytic_concurrence_value(double r, double lambda_corr, double lambda1, double t) {
  const double r2 = r * r;
  const double num = (r2 - 1.0) * (r2 + 3.0) + (r2 - lambda_corr) * (3.0 - r2) * std::exp(lambda1 * t);
  return std::max(num / (2.0 * (r2 + 3.0)), 0.0);
}

inline double analytic_concurrence(const BathThermal& thermal, const RateSet& rates,
                                   const CorrelationScalar& lambda_corr, double t) {
  if (!(t >= 0.0)) throw DomainError("time must be >= 0");
  return analytic_concurrence_value(thermal.ratio(), lambda_corr.value(), first_order_lambda1(rates), t);
}

/// Entanglement is generated iff Lambda < (5R^2 - 3)/(3 - R^2).
inline bool generation_condition(const BathThermal& thermal, const CorrelationScalar& lambda_corr) {
  const double r2 = thermal.ratio() * thermal.ratio();
  return lambda_corr.value() < (5.0 * r2 - 3.0) / (3.0 - r2);
}

struct NumericCrossing {
  double lambda1 = 0.0;        // numerical slow eigenvalue
  double t_c = infinity;       // zero crossing after the peak, 1/gamma0 units
  double scaled_t_c = infinity;// |lambda1| t_c
  double peak_concurrence = 0.0;
  double peak_time = 0.0;
};

struct SurvivalReport {
  double t_c = 0.0;
  /// |lambda_1| t_c, i.e. the logarithm in the closed form.
  double scaled_t_c = 0.0;
  bool generated = false;
  double peak_concurrence = 0.0;
  double peak_time = 0.0;
  std::optional<NumericCrossing> numeric;
};

/// Closed-form survival time. The long-time concurrence decreases
/// monotonically, so its peak is the t -> 0+ value.
inline SurvivalReport survival_time(const BathThermal& thermal, const RateSet& rates,
                                    const CorrelationScalar& lambda_corr) {
  SurvivalReport rep;
  rep.generated = generation_condition(thermal, lambda_corr);
  if (!rep.generated) return rep;
  const double r = thermal.ratio();
  const double r2 = r * r;
  const double l1 = first_order_lambda1(rates);
  rep.peak_concurrence = analytic_concurrence_value(r, lambda_corr.value(), l1, 0.0);
  if (r >= 1.0 || l1 == 0.0) {
    rep.t_c = infinity;
    rep.scaled_t_c = infinity;
    return rep;
  }
  rep.scaled_t_c = std::log((r2 - lambda_corr.value()) * (r2 - 3.0) / ((r2 + 3.0) * (r2 - 1.0)));
  rep.t_c = rep.scaled_t_c / std::abs(l1);
  return rep;
}

struct CrossingOptions {
  /// Search horizon in units of 1/|lambda_1|.
  double horizon = 20.0;
  /// Bisection tolerance in units of 1/|lambda_1|.
  double bisection_tol = 1e-6;
  /// Sampling step before the peak, 1/gamma0 units.
  double early_step = 0.01;
  double early_window = 20.0;
};

/// Unclamped concurrence witness of the exactly propagated state.
class SpectralEvolution {
public:
  SpectralEvolution(const SpectrumReport& report, const PauliVector& initial)
      : report_(&report), initial_(initial), a_(mode_coefficients(report, initial)) {}

  PauliVector state(double t) const {
    if (t == 0.0) return initial_;
    PauliVector v = reconstruct(*report_, a_, t);
    v[0] = initial_[0];
    return v;
  }
  double witness(double t) const {
    return detail::concurrence_witness(bloch_to_density(state(t)).matrix());
  }
  double concurrence(double t) const { return std::clamp(witness(t), 0.0, 1.0); }
  const std::array<Complex, 16>& coefficients() const { return a_; }

private:
  const SpectrumReport* report_;
  PauliVector initial_;
  std::array<Complex, 16> a_;
};

/// Peak of the numerical concurrence and the first zero crossing after it,
/// found by bisection on the unclamped witness.
inline NumericCrossing numeric_crossing(const SpectrumReport& report, const PauliVector& initial,
                                        const CrossingOptions& opt = {}) {
  const SpectralEvolution ev(report, initial);
  NumericCrossing nc;
  nc.lambda1 = report.slow_rate();
  const double inv_l1 = 1.0 / std::abs(nc.lambda1);
  const double t_end = opt.horizon * inv_l1;

  // Sampling grid: fine over the transient, then 1e-3 / |lambda_1| steps.
  std::vector<double> grid;
  for (double t = 0.0; t < std::min(opt.early_window, t_end); t += opt.early_step) grid.push_back(t);
  for (double t = grid.empty() ? 0.0 : grid.back() + 1e-3 * inv_l1; t <= t_end; t += 1e-3 * inv_l1)
    grid.push_back(t);

  std::vector<double> w(grid.size());
  std::size_t peak = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    w[i] = ev.witness(grid[i]);
    if (w[i] > w[peak]) peak = i;
  }
  // Golden-section refinement of the peak between neighbouring samples.
  double lo = grid[peak > 0 ? peak - 1 : 0];
  double hi = grid[std::min(peak + 1, grid.size() - 1)];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
    const double x1 = hi - g * (hi - lo);
    const double x2 = lo + g * (hi - lo);
    if (ev.witness(x1) < ev.witness(x2)) lo = x1; else hi = x2;
  }
  nc.peak_time = std::max(0.0, 0.5 * (lo + hi));
  nc.peak_concurrence = std::max(ev.concurrence(nc.peak_time), std::clamp(w[peak], 0.0, 1.0));
  if (w[peak] > ev.witness(nc.peak_time)) nc.peak_time = grid[peak];

  if (nc.peak_concurrence <= 0.0) {
    nc.t_c = 0.0;
    nc.scaled_t_c = 0.0;
    return nc;
  }
  // A sign change counts only if the witness then drops clearly below zero;
  // a witness that decays onto zero (R = 1) would otherwise cross on rounding.
  const double floor = 1e-6 * w[peak];
  double tail_min = HUGE_VAL;
  std::vector<double> min_after(grid.size(), HUGE_VAL);
  for (std::size_t i = grid.size(); i-- > 0;) min_after[i] = tail_min = std::min(tail_min, w[i]);
  for (std::size_t i = peak + 1; i < grid.size(); ++i) {
    if (w[i] <= 0.0) {
      if (!(min_after[i] < -floor)) break;
      double a = grid[i - 1], b = grid[i];
      while ((b - a) * std::abs(nc.lambda1) > opt.bisection_tol) {
        const double m = 0.5 * (a + b);
        if (ev.witness(m) > 0.0) a = m; else b = m;
      }
      nc.t_c = 0.5 * (a + b);
      nc.scaled_t_c = nc.t_c * std::abs(nc.lambda1);
      return nc;
    }
  }
  return nc;  // no crossing inside the horizon
}

/// Closed-form survival time plus the numerical crossing of the full
/// Liouvillian trajectory started from `initial`.
inline SurvivalReport survival_time(const BathThermal& thermal, const RateSet& rates,
                                    const CorrelationScalar& lambda_corr, const SpectrumReport& report,
                                    const PauliVector& initial, const CrossingOptions& opt = {}) {
  SurvivalReport rep = survival_time(thermal, rates, lambda_corr);
  rep.numeric = numeric_crossing(report, initial, opt);
  return rep;
}

struct ThermalCondition {
  bool exact = false;
  bool asymptotic = false;
  double margin = 0.0;  // theta_B - theta_Q - ln(3)/2
};

/// Can a bath at theta_B entangle qubits prepared thermally at theta_Q?
/// theta = Delta / (2 k_B T). The exact check uses R = tanh(theta_B) and
/// Lambda = tanh(theta_Q)^2.
inline ThermalCondition thermal_bath_condition(double theta_b, double theta_q) {
  if (!(theta_b > 0.0) || !(theta_q > 0.0)) throw DomainError("theta values must be > 0");
  ThermalCondition c;
  const double lq = std::tanh(theta_q);
  c.exact = generation_condition(BathThermal::from_theta(theta_b), CorrelationScalar(lq * lq));
  c.margin = theta_b - theta_q - 0.5 * std::log(3.0);
  c.asymptotic = c.margin > 0.0;
  return c;
}

/// Zero-temperature, zero-separation state
///   (1 + a1)|uu_x><uu_x| - a1 |S><S| + c sqrt2 (e^{-iDt}|S><uu_x| + conj),
/// with c = a2 for sign = +1 and c = i a2 for sign = -1 (the choice that
/// keeps the matrix Hermitian).
inline TwoQubitDensityMatrix zero_limit_state(double a1, double a2, int sign, double t,
                                              double delta_field) {
  if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
  const Vector4c up = states::up_up_x_ket();
  const Vector4c s = states::singlet_ket();
  const Complex I(0.0, 1.0);
  const Complex c = sign > 0 ? Complex(a2, 0.0) : I * a2;
  const Complex phase = std::exp(-I * delta_field * t);
  Matrix4c m = (1.0 + a1) * up * up.adjoint() - a1 * s * s.adjoint();
  const Matrix4c coh = std::sqrt(2.0) * c * phase * s * up.adjoint();
  m += coh + coh.adjoint();
  TwoQubitDensityMatrix rho(m);
  if (!rho.is_positive())
    throw InvalidCoefficients("zero-limit state is not positive (min eigenvalue " +
                              std::to_string(rho.min_eigenvalue()) + ")");
  return rho;
}

/// 0 followed by `count` log-spaced points from t_min to t_end.
inline std::vector<double> log_times(double t_min, double t_end, int count) {
  std::vector<double> t{0.0};
  const double a = std::log(t_min), b = std::log(t_end);
  for (int i = 0; i < count; ++i) t.push_back(std::exp(a + (b - a) * i / (count - 1)));
  return t;
}

/// Default sampling: 400 log-spaced points from 1e-3 to 3 t_c, or to
/// 10 / |lambda_1| when t_c is infinite.
inline std::vector<double> default_sample_times(double t_c, double lambda1) {
  double t_end = std::isfinite(t_c) && t_c > 0.0 ? 3.0 * t_c : 10.0 / std::abs(lambda1);
  if (!std::isfinite(t_end) || t_end <= 1e-3) t_end = 100.0;
  return log_times(1e-3, t_end, 400);
}

} // namespace twospin

#endif // TWOSPIN_DYNAMICS_HPP
