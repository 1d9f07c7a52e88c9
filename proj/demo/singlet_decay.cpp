// Prints the concurrence of |ud> and of the singlet under a weakly
// correlated bath (delta = 0.05, R = 0.9) next to the closed-form curve.

#include <cstdio>
#include <vector>

#include "twospin/dynamics.hpp"

int main() {
  using namespace twospin;
  const auto thermal = BathThermal::from_ratio(0.9);
  const auto rates = RateSet::make(1.0, thermal, 0.05);
  ModelParams params;
  params.delta_field = 10.0;
  const auto report = classify_spectrum(build_generator(params, rates, false, false));

  std::printf("lambda_1 numeric %.6f, first order %.6f\n", report.slow_rate(), first_order_lambda1(rates));
  const auto surv = survival_time(thermal, rates, CorrelationScalar(-1.0), report, states::up_down_z());
  std::printf("|ud>: t_c analytic %.3f, numeric %.3f (1/gamma0)\n", surv.t_c, surv.numeric->t_c);

  std::vector<double> times;
  for (int i = 0; i <= 20; ++i) times.push_back(2.0 * i);
  const auto ud = propagate_spectral(report, states::up_down_z(), times);
  const auto s = propagate_spectral(report, states::singlet(), times);
  std::printf("%8s %10s %10s %10s %10s\n", "t", "C(ud)", "eq(ud)", "C(S)", "eq(S)");
  for (std::size_t i = 0; i < times.size(); ++i)
    std::printf("%8.2f %10.5f %10.5f %10.5f %10.5f\n", times[i], ud.concurrence[i],
                analytic_concurrence(thermal, rates, CorrelationScalar(-1.0), times[i]), s.concurrence[i],
                analytic_concurrence(thermal, rates, CorrelationScalar(-3.0), times[i]));
}
