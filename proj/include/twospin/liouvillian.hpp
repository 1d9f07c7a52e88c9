#ifndef TWOSPIN_LIOUVILLIAN_HPP
#define TWOSPIN_LIOUVILLIAN_HPP

// The 16x16 real generator L with d(alpha)/dt = L alpha, built from the
// Born-Markov-secular master equation of two qubits in a common bath, and
// the classification of its eigensystem into thermal, slow, oscillatory and
// fast modes.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "twospin/bath.hpp"
#include "twospin/error.hpp"
#include "twospin/state.hpp"

namespace twospin {

using Matrix16d = Eigen::Matrix<double, 16, 16>;
using Matrix16c = Eigen::Matrix<Complex, 16, 16>;

/// Coherent-sector parameters. H_S = -(Delta/2)(sx1 + sx2),
/// H_LS = A (sx1 + sx2) + B (sz1 sz2 + sy1 sy2), H_E = xi sigma1 . sigma2.
struct ModelParams {
  double delta_field = 1.0;
  double lamb_A = 0.0;
  double lamb_B = 0.0;
  double exchange_xi = 0.0;

  void validate() const {
    if (!(delta_field > 0.0)) throw DomainError("Delta must be > 0");
  }
};

struct GeneratorMatrix {
  Matrix16d entries;
  ModelParams params;
  RateSet rates;
  bool include_lamb = false;
  bool include_exchange = false;
};

namespace detail {

inline Matrix4c system_hamiltonian(const ModelParams& p, bool lamb, bool exchange) {
  const Matrix4c sx = pauli_product(1, 0) + pauli_product(0, 1);
  Matrix4c h = (-0.5 * p.delta_field) * sx;
  if (lamb) h += p.lamb_A * sx + p.lamb_B * (pauli_product(3, 3) + pauli_product(2, 2));
  if (exchange)
    h += p.exchange_xi * (pauli_product(1, 1) + pauli_product(2, 2) + pauli_product(3, 3));
  return h;
}

/// A_n(+/-Delta) = (1/2)(sz_n -/+ i sy_n), n = 0, 1 for the two qubits.
inline std::array<Matrix4c, 2> jump_operators(int sign) {
  const Complex I(0.0, 1.0);
  const Matrix2c a = 0.5 * (pauli(3) - static_cast<double>(sign) * I * pauli(2));
  return {kron(a, pauli(0)), kron(pauli(0), a)};
}

struct Superoperator {
  Matrix4c hamiltonian;
  // jumps[w][n], w = 0 for +Delta, 1 for -Delta
  std::array<std::array<Matrix4c, 2>, 2> jumps;
  std::array<std::array<std::array<double, 2>, 2>, 2> gamma;

  Matrix4c apply(const Matrix4c& rho) const {
    const Complex I(0.0, 1.0);
    Matrix4c out = -I * (hamiltonian * rho - rho * hamiltonian);
    for (int w = 0; w < 2; ++w)
      for (int n = 0; n < 2; ++n)
        for (int m = 0; m < 2; ++m) {
          const double g = gamma[w][n][m];
          if (g == 0.0) continue;
          const Matrix4c& an = jumps[w][n];
          const Matrix4c& am = jumps[w][m];
          const Matrix4c anam = an.adjoint() * am;
          out += g * (am * rho * an.adjoint() - 0.5 * (anam * rho + rho * anam));
        }
    return out;
  }
};

inline Superoperator make_superoperator(const ModelParams& p, const RateSet& r, bool lamb,
                                        bool exchange) {
  Superoperator s;
  s.hamiltonian = system_hamiltonian(p, lamb, exchange);
  s.jumps = {jump_operators(+1), jump_operators(-1)};
  const double g11[2] = {r.gamma11_plus, r.gamma11_minus};
  const double g12[2] = {r.gamma12_plus, r.gamma12_minus};
  for (int w = 0; w < 2; ++w) {
    s.gamma[w][0][0] = s.gamma[w][1][1] = g11[w];
    s.gamma[w][0][1] = s.gamma[w][1][0] = g12[w];
  }
  return s;
}

} // namespace detail

/// L acting on Pauli vectors: column k is tr(sigma_m L(sigma_k / 4)).
inline GeneratorMatrix build_generator(const ModelParams& params, const RateSet& rates,
                                       bool include_lamb, bool include_exchange) {
  params.validate();
  const auto sup = detail::make_superoperator(params, rates, include_lamb, include_exchange);
  const auto& basis = pauli_basis();
  GeneratorMatrix g;
  g.params = params;
  g.rates = rates;
  g.include_lamb = include_lamb;
  g.include_exchange = include_exchange;
  for (int k = 0; k < 16; ++k) {
    const Matrix4c d = sup.apply(0.25 * basis[k]);
    for (int m = 0; m < 16; ++m) g.entries(m, k) = (d * basis[m]).trace().real();
  }
  // The trace is conserved exactly; drop the rounding left in row 0.
  g.entries.row(0).setZero();
  return g;
}

enum class ModeLabel { Thermal, Slow, Oscillatory, Fast };

inline const char* to_string(ModeLabel l) {
  switch (l) {
    case ModeLabel::Thermal: return "thermal";
    case ModeLabel::Slow: return "slow";
    case ModeLabel::Oscillatory: return "oscillatory";
    case ModeLabel::Fast: return "fast";
  }
  return "?";
}

/// Eigensystem ordered as l = 0 (thermal), 1 (slow), 2 and 3 (oscillatory,
/// Im(lambda_2) < 0), 4..15 (fast, by decreasing real part).
/// Right eigenvectors are columns of `right`, left eigenvectors rows of
/// `left`, with left * right = identity.
struct SpectrumReport {
  std::array<Complex, 16> eigenvalues{};
  Matrix16c right;
  Matrix16c left;
  std::array<ModeLabel, 16> labels{};
  GeneratorMatrix generator;
  double tol_zero = 0.0;
  double biorthogonality_error = 0.0;
  double condition_number = 0.0;
  /// Fast modes with Re(lambda) > -0.5 gamma0 / R.
  std::vector<int> fast_violations;

  Complex eigenvalue(int l) const { return eigenvalues[static_cast<std::size_t>(l)]; }
  double slow_rate() const { return eigenvalues[1].real(); }
  PauliVector thermal_state() const { return PauliVector(right.col(0).real()); }
  Vector16d slow_vector() const { return right.col(1).real(); }
};

namespace detail {

struct RawEigen {
  Eigen::Matrix<Complex, 16, 1> values;
  Matrix16c vectors;
};

inline RawEigen eigen_decompose(const Matrix16d& m) {
  Eigen::EigenSolver<Matrix16d> es(m, true);
  if (es.info() != Eigen::Success) throw NumericalFailure("eigendecomposition of the generator failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

} // namespace detail

/// Labels the eigensystem of L. Requires a one-dimensional null space
/// (delta > 0); throws DegenerateSpectrum otherwise or when two real modes
/// compete for the slow label.
inline SpectrumReport classify_spectrum(const GeneratorMatrix& gen) {
  const RateSet& rates = gen.rates;
  const double scale = rates.gamma0 > 0.0 ? rates.gamma0 : 1.0;
  const double tol_zero = 1e-9 * scale;
  const double tol_real = 1e-9 * std::max(scale, gen.params.delta_field);

  const auto raw = detail::eigen_decompose(gen.entries);
  std::vector<int> idx(16);
  std::iota(idx.begin(), idx.end(), 0);

  std::vector<int> zero;
  for (int i : idx)
    if (std::abs(raw.values(i)) < tol_zero) zero.push_back(i);
  if (zero.size() != 1)
    throw DegenerateSpectrum("expected exactly one zero eigenvalue, found " +
                                 std::to_string(zero.size()) + " (delta = " +
                                 std::to_string(rates.delta) + ")",
                             zero.size() > 0 ? raw.values(zero[0]).real() : 0.0,
                             zero.size() > 1 ? raw.values(zero[1]).real() : 0.0);
  const int thermal = zero[0];

  // Slow: real nonzero eigenvalue closest to zero.
  std::vector<int> real_modes;
  for (int i : idx)
    if (i != thermal && std::abs(raw.values(i).imag()) <= tol_real) real_modes.push_back(i);
  if (real_modes.empty()) throw NumericalFailure("generator has no real nonzero eigenvalue");
  std::sort(real_modes.begin(), real_modes.end(), [&](int a, int b) {
    return std::abs(raw.values(a).real()) < std::abs(raw.values(b).real());
  });
  const int slow = real_modes[0];
  if (real_modes.size() > 1 &&
      std::abs(raw.values(real_modes[1]).real() - raw.values(slow).real()) < 1e-10)
    throw DegenerateSpectrum("two candidates for the slow mode", raw.values(slow).real(),
                             raw.values(real_modes[1]).real());

  // Oscillatory: complex pair with the smallest decay rate; ties go to the
  // imaginary part closest to Delta.
  std::vector<int> lower_half;
  for (int i : idx)
    if (i != thermal && i != slow && raw.values(i).imag() < -tol_real) lower_half.push_back(i);
  if (lower_half.empty()) throw NumericalFailure("generator has no complex eigenvalue pair");
  const double delta_field = gen.params.delta_field;
  std::sort(lower_half.begin(), lower_half.end(), [&](int a, int b) {
    const double ra = -raw.values(a).real();
    const double rb = -raw.values(b).real();
    if (std::abs(ra - rb) > 1e-9 * scale) return ra < rb;
    return std::abs(-raw.values(a).imag() - delta_field) < std::abs(-raw.values(b).imag() - delta_field);
  });
  const int osc = lower_half[0];
  int osc_conj = -1;
  double best = HUGE_VAL;
  for (int i : idx) {
    const double d = std::abs(raw.values(i) - std::conj(raw.values(osc)));
    if (i != osc && d < best) {
      best = d;
      osc_conj = i;
    }
  }

  std::vector<int> order{thermal, slow, osc, osc_conj};
  std::vector<int> fast;
  for (int i : idx)
    if (std::find(order.begin(), order.end(), i) == order.end()) fast.push_back(i);
  std::sort(fast.begin(), fast.end(), [&](int a, int b) {
    const Complex va = raw.values(a), vb = raw.values(b);
    if (std::abs(va.real() - vb.real()) > 1e-12 * scale) return va.real() > vb.real();
    return va.imag() < vb.imag();
  });
  order.insert(order.end(), fast.begin(), fast.end());

  SpectrumReport rep;
  rep.generator = gen;
  rep.tol_zero = tol_zero;
  for (int l = 0; l < 16; ++l) {
    rep.eigenvalues[static_cast<std::size_t>(l)] = raw.values(order[static_cast<std::size_t>(l)]);
    rep.right.col(l) = raw.vectors.col(order[static_cast<std::size_t>(l)]);
    rep.labels[static_cast<std::size_t>(l)] =
        l == 0 ? ModeLabel::Thermal : l == 1 ? ModeLabel::Slow : l <= 3 ? ModeLabel::Oscillatory : ModeLabel::Fast;
  }
  // Real modes carry real eigenvectors; fix their phase before scaling.
  for (int l : {0, 1}) {
    const Vector16c c = rep.right.col(l);
    int k = 0;
    c.cwiseAbs().maxCoeff(&k);
    rep.right.col(l) *= std::abs(c(k)) / c(k);
    rep.right.col(l) = rep.right.col(l).real().cast<Complex>();
  }
  // Thermal scaled to alpha(0,0) = 1, slow scaled to alpha(2,2) = +1.
  rep.right.col(0) /= rep.right(0, 0);
  if (std::abs(rep.right(flat_index(2, 2), 1)) > 1e-12)
    rep.right.col(1) /= rep.right(flat_index(2, 2), 1);
  for (int l = 2; l < 16; ++l) rep.right.col(l).normalize();

  Eigen::PartialPivLU<Matrix16c> lu(rep.right);
  rep.left = lu.inverse();
  const Eigen::JacobiSVD<Matrix16c> svd(rep.right);
  const auto sv = svd.singularValues();
  rep.condition_number = sv(15) > 0.0 ? sv(0) / sv(15) : HUGE_VAL;
  rep.biorthogonality_error = (rep.left * rep.right - Matrix16c::Identity()).cwiseAbs().maxCoeff();

  const double r = rates.ratio();
  for (int l = 4; l < 16; ++l)
    if (rep.eigenvalues[static_cast<std::size_t>(l)].real() > -0.5 * rates.gamma0 / r) rep.fast_violations.push_back(l);
  return rep;
}

inline SpectrumReport classify_spectrum(const GeneratorMatrix& gen, const RateSet& rates) {
  GeneratorMatrix g = gen;
  g.rates = rates;
  return classify_spectrum(g);
}

/// Threshold on cond(right) above which the eigenbasis is treated as incomplete.
inline constexpr double defective_condition = 1e10;

/// a_l = <left_l | initial>, with a_0 = alpha(0,0) of the initial state.
inline std::array<Complex, 16> mode_coefficients(const SpectrumReport& report,
                                                 const PauliVector& initial) {
  if (!(report.condition_number < defective_condition))
    throw DefectiveSpectrum("generator eigenbasis is numerically incomplete (cond = " +
                            std::to_string(report.condition_number) + ")");
  const Vector16c a = report.left * initial.components().cast<Complex>();
  std::array<Complex, 16> out{};
  for (int l = 0; l < 16; ++l) out[static_cast<std::size_t>(l)] = a(l);
  return out;
}

/// Sum_l a_l R_l exp(lambda_l t), real part.
inline PauliVector reconstruct(const SpectrumReport& report, const std::array<Complex, 16>& a,
                               double t = 0.0) {
  Vector16c acc = Vector16c::Zero();
  for (int l = 0; l < 16; ++l)
    acc += a[static_cast<std::size_t>(l)] * std::exp(report.eigenvalues[static_cast<std::size_t>(l)] * t) *
           report.right.col(l);
  return PauliVector(acc.real());
}

struct SlowEigenpair {
  double lambda1 = 0.0;
  PauliVector pattern{Vector16d::Zero()};
  /// Set when delta is above the range where the first-order form is meant.
  bool outside_validity = false;
};

/// lambda_1 = -(1 + 3N) delta gamma0 and the leading-order slow vector
/// {a01 = a10 = R, a11 = 1 + R^2, a22 = a33 = 1}.
inline SlowEigenpair analytic_slow_eigenpair(const BathThermal& thermal, const RateSet& rates) {
  SlowEigenpair s;
  s.lambda1 = -(1.0 + 3.0 * thermal.occupation()) * rates.delta * rates.gamma0;
  const double r = thermal.ratio();
  Vector16d v = Vector16d::Zero();
  v(flat_index(0, 1)) = r;
  v(flat_index(1, 0)) = r;
  v(flat_index(1, 1)) = 1.0 + r * r;
  v(flat_index(2, 2)) = 1.0;
  v(flat_index(3, 3)) = 1.0;
  s.pattern = PauliVector(v);
  s.outside_validity = rates.delta > 0.2;
  return s;
}

/// alpha_0 = {a00 = 1, a01 = a10 = R, a11 = R^2}.
inline PauliVector analytic_thermal_state(const BathThermal& thermal) {
  const double r = thermal.ratio();
  PauliVector v;
  v(0, 1) = r;
  v(1, 0) = r;
  v(1, 1) = r * r;
  return v;
}

} // namespace twospin

#endif // TWOSPIN_LIOUVILLIAN_HPP
