#ifndef TWOSPIN_BATH_HPP
#define TWOSPIN_BATH_HPP

// Bosonic bath seen by two qubits at separation d: thermal occupation,
// spatial correlation f(kappa d), the correlation deficit delta, the
// dissipative rates and the Lamb-shift coefficients A and B.
//
// Frequencies are in units of the qubit splitting Delta unless stated
// otherwise; the only physical-unit code lives in iontrap.hpp.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "twospin/error.hpp"
#include "twospin/quadrature.hpp"
#include "twospin/special.hpp"

namespace twospin {

enum class SpectralForm { Ohmic, TabulatedCustom };
enum class CutoffForm { Exponential, Hard };

/// J(omega). Ohmic: (coupling/2) omega cutoff(omega); tabulated: linear
/// interpolation of (omega, J) samples, zero outside the table.
class SpectralDensity {
public:
  static SpectralDensity ohmic(double coupling, double cutoff_frequency,
                               CutoffForm cutoff = CutoffForm::Exponential) {
    if (!(coupling >= 0.0)) throw DomainError("ohmic coupling must be >= 0");
    if (!(cutoff_frequency > 0.0)) throw DomainError("cutoff frequency must be > 0");
    SpectralDensity j;
    j.form_ = SpectralForm::Ohmic;
    j.coupling_ = coupling;
    j.cutoff_frequency_ = cutoff_frequency;
    j.cutoff_form_ = cutoff;
    return j;
  }

  static SpectralDensity tabulated(std::vector<double> omega, std::vector<double> values) {
    if (omega.size() != values.size() || omega.size() < 2)
      throw DomainError("tabulated spectral density needs at least two (omega, J) rows");
    for (std::size_t i = 1; i < omega.size(); ++i)
      if (!(omega[i] > omega[i - 1]))
        throw DomainError("tabulated spectral density: omega must be strictly increasing");
    SpectralDensity j;
    j.form_ = SpectralForm::TabulatedCustom;
    j.omega_ = std::move(omega);
    j.values_ = std::move(values);
    return j;
  }

  /// Two whitespace- or comma-separated columns; '#' starts a comment.
  static SpectralDensity from_table_stream(std::istream& in) {
    std::vector<double> w, v;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      double a, b;
      if (!(ls >> a)) continue;
      if (!(ls >> b))
        throw DomainError("spectral table line " + std::to_string(lineno) + ": expected two columns");
      w.push_back(a);
      v.push_back(b);
    }
    return tabulated(std::move(w), std::move(v));
  }

  static SpectralDensity from_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open spectral table '" + path + "'");
    return from_table_stream(in);
  }

  double operator()(double omega) const {
    if (omega < 0.0) return 0.0;
    if (form_ == SpectralForm::Ohmic) {
      double c = 1.0;
      if (cutoff_form_ == CutoffForm::Exponential) {
        if (std::isfinite(cutoff_frequency_)) c = std::exp(-omega / cutoff_frequency_);
      } else if (omega > cutoff_frequency_) {
        c = 0.0;
      }
      return 0.5 * coupling_ * omega * c;
    }
    if (omega < omega_.front() || omega > omega_.back()) return 0.0;
    const auto it = std::upper_bound(omega_.begin(), omega_.end(), omega);
    if (it == omega_.end()) return values_.back();
    const std::size_t i = static_cast<std::size_t>(it - omega_.begin());
    const double t = (omega - omega_[i - 1]) / (omega_[i] - omega_[i - 1]);
    return values_[i - 1] + t * (values_[i] - values_[i - 1]);
  }

  /// Upper end of the support. The exponential cutoff is truncated at
  /// 60 w_c (relative weight e^-60); no cutoff gives infinity.
  double support_end() const {
    if (form_ == SpectralForm::TabulatedCustom) return omega_.back();
    if (cutoff_form_ == CutoffForm::Hard) return cutoff_frequency_;
    return 60.0 * cutoff_frequency_;
  }

  bool identically_zero() const {
    if (form_ == SpectralForm::Ohmic) return coupling_ == 0.0;
    return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0.0; });
  }

  SpectralForm form() const { return form_; }
  double ohmic_coupling() const { return coupling_; }
  double cutoff_frequency() const { return cutoff_frequency_; }
  CutoffForm cutoff_form() const { return cutoff_form_; }

private:
  SpectralForm form_ = SpectralForm::Ohmic;
  double coupling_ = 0.0;
  double cutoff_frequency_ = 10.0;
  CutoffForm cutoff_form_ = CutoffForm::Exponential;
  std::vector<double> omega_;
  std::vector<double> values_;
};

/// Inverse dispersion relation kappa(omega), isotropic.
using Dispersion = std::function<double(double)>;

/// kappa(omega) = omega / speed.
inline Dispersion linear_dispersion(double speed = 1.0) {
  if (!(speed > 0.0)) throw DomainError("dispersion speed must be > 0");
  return [speed](double omega) { return omega / speed; };
}

struct BathGeometry {
  double separation = 0.0;
  int dimension = 1;
  Dispersion dispersion = linear_dispersion();

  BathGeometry() = default;
  BathGeometry(double d, int dim, Dispersion k = linear_dispersion())
      : separation(d), dimension(dim), dispersion(std::move(k)) {
    validate();
  }

  void validate() const {
    if (!(separation >= 0.0)) throw DomainError("separation must be >= 0");
    if (dimension < 1 || dimension > 3)
      throw DomainError("bath dimension must be 1, 2 or 3, got " + std::to_string(dimension));
  }
};

/// Thermal state of the bath at the qubit frequency, held as
/// R = tanh(Delta / 2 k_B T) = 1 / (1 + 2 N(Delta)).
class BathThermal {
public:
  static BathThermal from_ratio(double r) {
    if (!(r > 0.0 && r <= 1.0)) throw DomainError("R must lie in (0, 1], got " + std::to_string(r));
    BathThermal t;
    t.ratio_ = r;
    t.occupation_ = 0.5 * (1.0 / r - 1.0);
    return t;
  }
  static BathThermal from_occupation(double n) {
    if (!(n >= 0.0 && std::isfinite(n))) throw DomainError("occupation must be finite and >= 0");
    BathThermal t;
    t.occupation_ = n;
    t.ratio_ = 1.0 / (1.0 + 2.0 * n);
    return t;
  }
  /// theta = Delta / (2 k_B T); theta = infinity is zero temperature.
  static BathThermal from_theta(double theta) {
    if (!(theta > 0.0)) throw DomainError("theta must be > 0");
    return from_ratio(std::tanh(theta));
  }

  double ratio() const { return ratio_; }
  double occupation() const { return occupation_; }
  /// artanh(R) = Delta / (2 k_B T); infinite at R = 1.
  double theta() const {
    return ratio_ >= 1.0 ? std::numeric_limits<double>::infinity() : std::atanh(ratio_);
  }

private:
  double ratio_ = 1.0;
  double occupation_ = 0.0;
};

/// Bose-Einstein occupation 1/(exp(omega/T) - 1), T in the same units as omega.
inline double thermal_occupation(double delta_freq, double temperature) {
  if (!(delta_freq > 0.0)) throw DomainError("frequency must be > 0");
  if (!(temperature >= 0.0)) throw DomainError("temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(delta_freq / temperature);
}

/// f(x): cos x, J0(x) or sin x / x for D = 1, 2, 3.
inline double spatial_correlation(double x, int dimension) {
  if (!(x >= 0.0)) throw DomainError("spatial correlation argument must be >= 0");
  switch (dimension) {
    case 1: return std::cos(x);
    case 2: return bessel_j0(x);
    case 3: return x < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
    default:
      throw DomainError("bath dimension must be 1, 2 or 3, got " + std::to_string(dimension));
  }
}

enum class DeltaMode { Exact, SmallSeparation };

/// delta = 1 - f(kappa(Delta) d). The small-separation form (kappa d)^2/(2D)
/// is the leading term of the expansion.
inline double correlation_delta(const BathGeometry& geometry, double delta_freq,
                                DeltaMode mode = DeltaMode::Exact) {
  geometry.validate();
  const double x = geometry.dispersion(delta_freq) * geometry.separation;
  if (mode == DeltaMode::SmallSeparation) return x * x / (2.0 * geometry.dimension);
  return 1.0 - spatial_correlation(x, geometry.dimension);
}

/// Dissipative rates at omega = +Delta and -Delta.
struct RateSet {
  double gamma0 = 0.0;
  double occupation = 0.0;
  double delta = 0.0;
  double gamma11_plus = 0.0;
  double gamma11_minus = 0.0;
  double gamma12_plus = 0.0;
  double gamma12_minus = 0.0;

  /// Rates from gamma0, the thermal state and delta. Throws InvalidRates
  /// unless |1 - delta| <= 1, which keeps [[g11, g12], [g12, g11]] PSD.
  static RateSet make(double gamma0, const BathThermal& thermal, double delta) {
    if (!(gamma0 >= 0.0) || !std::isfinite(gamma0)) throw DomainError("gamma0 must be finite and >= 0");
    if (!(std::abs(1.0 - delta) <= 1.0 + 1e-15))
      throw InvalidRates("rate matrix not positive semidefinite: |1 - delta| = " +
                         std::to_string(std::abs(1.0 - delta)) + " > 1");
    RateSet r;
    r.gamma0 = gamma0;
    r.occupation = thermal.occupation();
    r.delta = delta;
    r.gamma11_plus = (r.occupation + 1.0) * gamma0;
    r.gamma11_minus = r.occupation * gamma0;
    r.gamma12_plus = (1.0 - delta) * r.gamma11_plus;
    r.gamma12_minus = (1.0 - delta) * r.gamma11_minus;
    return r;
  }

  double ratio() const { return 1.0 / (1.0 + 2.0 * occupation); }

  /// Smallest eigenvalue of the 2x2 rate matrix at +Delta (sign > 0) or -Delta.
  double min_rate_eigenvalue(int sign) const {
    const double g11 = sign > 0 ? gamma11_plus : gamma11_minus;
    const double g12 = sign > 0 ? gamma12_plus : gamma12_minus;
    return g11 - std::abs(g12);
  }
};

inline RateSet build_rates(const SpectralDensity& j, const BathThermal& thermal,
                           const BathGeometry& geometry, double delta_freq,
                           DeltaMode mode = DeltaMode::Exact) {
  if (!(delta_freq > 0.0)) throw DomainError("qubit frequency must be > 0");
  const double jd = j(delta_freq);
  if (!(jd > 0.0)) throw DomainError("spectral density vanishes at the qubit frequency");
  return RateSet::make(2.0 * std::numbers::pi * jd, thermal, correlation_delta(geometry, delta_freq, mode));
}

struct LambShift {
  double a = 0.0;
  double b = 0.0;
};

/// A = 2 PV int_0^inf J(w) coth(w / 2T) Delta / (Delta^2 - w^2) dw
/// B =   PV int_0^inf J(w) f(kappa(w) d) w / (Delta^2 - w^2) dw
inline LambShift lamb_shift_coefficients(const SpectralDensity& j, const BathThermal& thermal,
                                         const BathGeometry& geometry, double delta_freq,
                                         const quad::PrincipalValueOptions& opt = {}) {
  if (!(delta_freq > 0.0)) throw DomainError("qubit frequency must be > 0");
  geometry.validate();
  if (j.identically_zero()) return {};

  // coth(w / 2T) with 1 / 2T = artanh(R) / Delta
  const double inv_2t = thermal.theta() / delta_freq;
  const auto coth = [inv_2t](double w) {
    if (std::isinf(inv_2t)) return 1.0;
    return 1.0 / std::tanh(w * inv_2t);
  };
  const auto a_integrand = [&](double w) {
    return 2.0 * j(w) * coth(w) * delta_freq / ((delta_freq - w) * (delta_freq + w));
  };
  const auto b_integrand = [&](double w) {
    const double f = spatial_correlation(geometry.dispersion(w) * geometry.separation, geometry.dimension);
    return j(w) * f * w / ((delta_freq - w) * (delta_freq + w));
  };
  const double upper = j.support_end();
  LambShift out;
  out.a = quad::principal_value(a_integrand, 0.0, upper, delta_freq, opt).value;
  // f oscillates for distant qubits; integrate the tail period by period.
  auto b_opt = opt;
  const double phase = geometry.dispersion(delta_freq) * geometry.separation;
  if (phase > std::numbers::pi) b_opt.panel_width = 2.0 * std::numbers::pi * delta_freq / phase;
  out.b = quad::principal_value(b_integrand, 0.0, upper, delta_freq, b_opt).value;
  return out;
}

} // namespace twospin

#endif // TWOSPIN_BATH_HPP
