#ifndef TWOSPIN_SPECIAL_HPP
#define TWOSPIN_SPECIAL_HPP

#include <cmath>
#include <numbers>

namespace twospin {

/// Bessel function of the first kind, order zero.
///
/// Power series below |x| = 12 (evaluated in long double, worst cancellation
/// is about 4e3 there) and the Hankel asymptotic expansion, truncated at its
/// smallest term, above. Absolute error stays below 1e-12 on the real line.
inline double bessel_j0(double x) {
  x = std::abs(x);
  constexpr double switch_point = 12.0;
  if (x < switch_point) {
    const long double q = -0.25L * static_cast<long double>(x) * x;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<long double>(k) * k);
      sum += term;
      if (std::abs(term) < 1e-21L * std::abs(sum) && k > 4) break;
    }
    return static_cast<double>(sum);
  }

  // a_k = prod_{m<=k} (2m-1)^2 / (k! 8^k), alternating as P = sum (-1)^k a_2k x^-2k,
  // Q = -sum (-1)^k a_{2k+1} x^-(2k+1).
  double p = 0.0;
  double q = 0.0;
  double a = 1.0;
  double prev = HUGE_VAL;
  for (int n = 0; n < 80; ++n) {
    if (n > 0) a *= (2.0 * n - 1.0) * (2.0 * n - 1.0) / (8.0 * n * x);
    if (a > prev) break;
    prev = a;
    const double sign = ((n / 2) % 2 == 0) ? 1.0 : -1.0;
    if (n % 2 == 0)
      p += sign * a;
    else
      q -= sign * a;
    if (a < 1e-18) break;
  }
  const double chi = x - 0.25 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

} // namespace twospin

#endif // TWOSPIN_SPECIAL_HPP
