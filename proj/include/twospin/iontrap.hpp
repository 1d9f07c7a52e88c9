#ifndef TWOSPIN_IONTRAP_HPP
#define TWOSPIN_IONTRAP_HPP

// Maps linear ion-trap parameters onto the two-spin-boson model and checks
// that entanglement generation and decay fit before the phonon revival.
//
// Inside this module frequencies are in units of the trap frequency w_t and
// times in units of 1/w_t. Only temperature_requirement touches SI units.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "twospin/bath.hpp"
#include "twospin/config.hpp"
#include "twospin/dynamics.hpp"
#include "twospin/liouvillian.hpp"

namespace twospin::iontrap {

namespace si {
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double boltzmann = 1.380649e-23;   // J / K
} // namespace si

struct TrapConfig {
  double trap_frequency = 2.0 * std::numbers::pi * 1.0e6;  // w_t, rad/s
  long ion_count = 100;
  double rabi_ratio = 25.0;      // Delta / w_t
  double ohmic_coupling = 0.1;   // alpha
  long addressed_spacing = 1;    // ion spacings between the addressed pair
  int bath_dimension = 1;
  double target_R = 0.5;
  /// Replaces the wavelength estimate spacing * (Delta/w_t) / N.
  std::optional<double> kappa_d_override;
  /// Keeps an Ising-type exchange of this strength (units of w_t); off by default.
  std::optional<double> ising_xi;

  static const std::vector<std::string>& keys() {
    static const std::vector<std::string> k{
        "trap_frequency", "ion_count", "rabi_ratio", "ohmic_coupling", "addressed_spacing",
        "bath_dimension", "target_R", "kappa_d", "ising_xi"};
    return k;
  }

  static TrapConfig from_key_values(const config::KeyValues& kv) {
    config::require_known(kv, keys());
    TrapConfig c;
    for (const auto& [k, v] : kv) {
      if (k == "trap_frequency") c.trap_frequency = config::to_double(k, v);
      else if (k == "ion_count") c.ion_count = config::to_long(k, v);
      else if (k == "rabi_ratio") c.rabi_ratio = config::to_double(k, v);
      else if (k == "ohmic_coupling") c.ohmic_coupling = config::to_double(k, v);
      else if (k == "addressed_spacing") c.addressed_spacing = config::to_long(k, v);
      else if (k == "bath_dimension") c.bath_dimension = static_cast<int>(config::to_long(k, v));
      else if (k == "target_R") c.target_R = config::to_double(k, v);
      else if (k == "kappa_d") c.kappa_d_override = config::to_double(k, v);
      else if (k == "ising_xi") c.ising_xi = config::to_double(k, v);
    }
    return c;
  }
};

struct BathParams {
  double gamma0 = 0.0;        // units of w_t
  BathThermal thermal = BathThermal::from_ratio(1.0);
  double delta = 0.0;         // small-separation form
  double delta_exact = 0.0;   // 1 - f(kappa d)
  int dimension = 1;
  double kappa_d = 0.0;
};

struct FeasibilityReport {
  double delta = 0.0;
  double delta_exact = 0.0;
  double gamma0 = 0.0;            // units of w_t
  double revival_time = 0.0;      // units of 1/w_t
  double t_peak_estimate = 0.0;   // ~ 1/gamma0
  double decay_window = 0.0;      // max(1/(delta gamma0), t_c)
  double t_c = 0.0;
  double peak_concurrence = 0.0;
  bool generated = false;
  bool feasible = false;
  std::optional<double> bath_temperature_kelvin;
  std::vector<std::string> diagnostics;
};

struct Plan {
  FeasibilityReport report;
  ModelParams model;
  BathParams bath;
};

/// T_B = hbar Delta / (2 k_B artanh R), Delta = rabi_ratio * w_t.
inline double temperature_requirement(const TrapConfig& c) {
  if (!(c.target_R > 0.0)) throw DomainError("target R must be > 0");
  if (c.target_R >= 1.0) throw DomainError("target R must be < 1 for a finite temperature");
  if (!(c.trap_frequency > 0.0)) throw DomainError("trap frequency must be > 0");
  const double delta = c.rabi_ratio * c.trap_frequency;
  return si::hbar * delta / (2.0 * si::boltzmann * std::atanh(c.target_R));
}

/// Revival time of an N-ion chain: 2 pi / w_t at N = 100, scaled linearly in N.
inline double revival_time(long ion_count) {
  return 2.0 * std::numbers::pi * static_cast<double>(ion_count) / 100.0;
}

/// Never throws for physically odd input: such configs come back with
/// feasible = false and a diagnostic.
inline Plan plan(const TrapConfig& c) {
  Plan p;
  auto& rep = p.report;
  auto& diag = rep.diagnostics;
  bool valid = true;
  if (!(c.trap_frequency > 0.0)) { diag.push_back("trap frequency must be > 0"); valid = false; }
  if (c.ion_count < 2) { diag.push_back("need at least two ions"); valid = false; }
  if (!(c.rabi_ratio > 0.0)) { diag.push_back("rabi_ratio must be > 0"); valid = false; }
  if (!(c.ohmic_coupling >= 0.0)) { diag.push_back("ohmic coupling must be >= 0"); valid = false; }
  if (c.addressed_spacing < 1) { diag.push_back("addressed spacing must be >= 1"); valid = false; }
  if (c.bath_dimension < 1 || c.bath_dimension > 3) { diag.push_back("bath dimension must be 1, 2 or 3"); valid = false; }
  if (!(c.target_R > 0.0 && c.target_R < 1.0)) { diag.push_back("target R must lie in (0, 1)"); valid = false; }
  if (valid && !(c.rabi_ratio < static_cast<double>(c.ion_count)))
    diag.push_back("rabi_ratio >= ion_count: the wavelength estimate does not hold");
  if (!valid) return p;

  p.model.delta_field = c.rabi_ratio;
  p.model.exchange_xi = c.ising_xi.value_or(0.0);

  const double kd = c.kappa_d_override.value_or(
      static_cast<double>(c.addressed_spacing) * c.rabi_ratio / static_cast<double>(c.ion_count));
  if (!c.kappa_d_override) diag.push_back("kappa d from the wavelength estimate N/(Delta/w_t) ion spacings");
  const BathGeometry geom(kd, c.bath_dimension);
  rep.delta = correlation_delta(geom, 1.0, DeltaMode::SmallSeparation);
  rep.delta_exact = correlation_delta(geom, 1.0, DeltaMode::Exact);
  rep.revival_time = revival_time(c.ion_count);
  if (c.ion_count != 100) diag.push_back("revival time scaled linearly in N from the N = 100 value 2 pi / w_t");

  const auto thermal = BathThermal::from_ratio(c.target_R);
  p.bath.thermal = thermal;
  p.bath.delta = rep.delta;
  p.bath.delta_exact = rep.delta_exact;
  p.bath.dimension = c.bath_dimension;
  p.bath.kappa_d = kd;

  try {
    rep.bath_temperature_kelvin = temperature_requirement(c);
  } catch (const Error& e) {
    diag.push_back(std::string("temperature: ") + e.what());
  }

  if (c.ohmic_coupling == 0.0) {
    diag.push_back("no dissipation: ohmic coupling is zero, gamma0 = 0");
    return p;
  }
  // J(w) = (alpha/2) w; the hard cutoff well above Delta leaves J(Delta) untouched.
  const auto j = SpectralDensity::ohmic(c.ohmic_coupling, 10.0 * c.rabi_ratio, CutoffForm::Hard);
  RateSet rates;
  try {
    rates = RateSet::make(2.0 * std::numbers::pi * j(c.rabi_ratio), thermal, rep.delta);
  } catch (const Error& e) {
    diag.push_back(std::string("rates: ") + e.what());
    return p;
  }
  rep.gamma0 = rates.gamma0;
  p.bath.gamma0 = rates.gamma0;
  rep.t_peak_estimate = 1.0 / rates.gamma0;

  const CorrelationScalar anti_aligned(-1.0);
  rep.peak_concurrence = analytic_concurrence(thermal, rates, anti_aligned, 0.0);
  const auto surv = survival_time(thermal, rates, anti_aligned);
  rep.generated = surv.generated;
  rep.t_c = surv.t_c;
  rep.decay_window = std::max(1.0 / (rep.delta * rates.gamma0), surv.generated ? surv.t_c : 0.0);

  if (!rep.generated) diag.push_back("bath too warm: no entanglement generated from |ud>");
  const double need = std::max(rep.t_peak_estimate, rep.decay_window);
  if (!(rep.revival_time > need))
    diag.push_back("revival at " + std::to_string(rep.revival_time) + "/w_t comes before the decay window " +
                   std::to_string(need) + "/w_t");
  rep.feasible = rep.generated && rep.revival_time > need;
  return p;
}

} // namespace twospin::iontrap

#endif // TWOSPIN_IONTRAP_HPP
