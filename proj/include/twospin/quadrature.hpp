#ifndef TWOSPIN_QUADRATURE_HPP
#define TWOSPIN_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "twospin/error.hpp"

namespace twospin::quad {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive 61-point Gauss-Kronrod on [a, b]; b may be +infinity.
inline Estimate integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, unsigned max_depth = 20) {
  Estimate out;
  if (!(b > a)) return out;
  double err = 0.0;
  double l1 = 0.0;
  out.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, max_depth, rel_tol, &err, &l1);
  out.error = err;
  return out;
}

struct PrincipalValueOptions {
  double rel_tol = 1e-6;
  /// First excision half-width, as a fraction of the pole position.
  double initial_width = 0.05;
  int max_levels = 10;
  /// When > 0 and the upper end is finite, the part beyond the excised
  /// window is integrated in panels of this width.
  double panel_width = 0.0;
};

struct PrincipalValueResult {
  double value = 0.0;
  double error = 0.0;
  int levels = 0;
  std::vector<double> widths;
  std::vector<double> raw;
};

/// PV integral of `integrand` over [lower, upper] with a simple pole at
/// `pole`. The window (pole - w, pole + w) is cut out, w is halved at each
/// level and the truncated integrals are extrapolated to w -> 0 with a
/// Richardson table in powers of w.
///
/// Throws NumericalFailure when a sub-integral is not finite or the table
/// does not settle within max_levels; the message carries the raw sequence.
inline PrincipalValueResult principal_value(const std::function<double(double)>& integrand,
                                            double lower, double upper, double pole,
                                            const PrincipalValueOptions& opt = {}) {
  PrincipalValueResult res;
  auto fail = [&](const std::string& why) {
    std::ostringstream os;
    os.precision(10);
    os << "principal-value quadrature failed: " << why << " [pole=" << pole
       << ", upper=" << upper << ", sequence:";
    for (std::size_t i = 0; i < res.raw.size(); ++i)
      os << " (w=" << res.widths[i] << ", I=" << res.raw[i] << ")";
    os << "]";
    throw NumericalFailure(os.str());
  };

  const double w0 = opt.initial_width * pole;
  if (!(pole > lower + w0) || !(pole + w0 < upper)) {
    // Pole outside the open interval (or too close to an end): no excision.
    const Estimate e = integrate(integrand, lower, upper);
    res.raw.push_back(e.value);
    res.widths.push_back(0.0);
    if (!std::isfinite(e.value) || e.error > opt.rel_tol * std::max(1.0, std::abs(e.value)))
      fail("regular integral did not converge (error estimate " + std::to_string(e.error) + ")");
    res.value = e.value;
    res.error = e.error;
    return res;
  }

  Estimate tail;
  if (opt.panel_width > 0.0 && std::isfinite(upper)) {
    // Panels may cancel almost exactly, so a relative target per panel is
    // out of reach; bisect each at most a few times and sum the errors.
    for (double a = pole + w0; a < upper; a += opt.panel_width) {
      const Estimate e = integrate(integrand, a, std::min(a + opt.panel_width, upper), 1e-12, 3);
      tail.value += e.value;
      tail.error += e.error;
    }
  } else {
    tail = integrate(integrand, pole + w0, upper);
  }
  if (!std::isfinite(tail.value) ||
      tail.error > 1e-3 * opt.rel_tol * std::max(1.0, std::abs(tail.value))) {
    res.raw.push_back(tail.value);
    res.widths.push_back(w0);
    fail("integral beyond the pole did not converge (error estimate " +
         std::to_string(tail.error) + "); the spectral density needs a cutoff");
  }
  const Estimate head = integrate(integrand, lower, pole - w0);
  if (!std::isfinite(head.value)) fail("integral below the pole is not finite");

  // table[k][j]: level k, extrapolation order j
  std::vector<std::vector<double>> table;
  double w = w0;
  double near = 0.0;  // integral over the annulus [pole-w0, pole-w] U [pole+w, pole+w0]
  for (int k = 0; k < opt.max_levels; ++k) {
    if (k > 0) {
      const double wn = 0.5 * w;
      const double sub_tol = 1e-3 * opt.rel_tol;
      near += integrate(integrand, pole - w, pole - wn, sub_tol).value +
              integrate(integrand, pole + wn, pole + w, sub_tol).value;
      w = wn;
    }
    const double raw = head.value + tail.value + near;
    res.widths.push_back(w);
    res.raw.push_back(raw);
    std::vector<double> row{raw};
    for (int j = 1; j <= k; ++j) {
      const double f = std::ldexp(1.0, j);  // halving w, error term ~ w^j
      row.push_back(row[j - 1] + (row[j - 1] - table[k - 1][j - 1]) / (f - 1.0));
    }
    table.push_back(row);
    if (k >= 2) {
      const double cur = table[k][k];
      const double prev = table[k - 1][k - 1];
      const double diff = std::abs(cur - prev);
      if (diff <= opt.rel_tol * std::max(std::abs(cur), 1e-300) || diff < 1e-14) {
        res.value = cur;
        res.error = diff;
        res.levels = k + 1;
        return res;
      }
    }
  }
  fail("Richardson table did not converge in " + std::to_string(opt.max_levels) + " levels");
  return res;
}

} // namespace twospin::quad

#endif // TWOSPIN_QUADRATURE_HPP
