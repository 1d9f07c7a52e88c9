#ifndef TWOSPIN_STATE_HPP
#define TWOSPIN_STATE_HPP

// Two-qubit states in density-matrix and Pauli-product (generalized Bloch)
// form, plus the Wootters concurrence.
//
// Pauli index convention: 0 -> identity, 1 -> x, 2 -> y, 3 -> z.
// The 4x4 table alpha(i,j) = tr(rho sigma_i (x) sigma_j) is flattened
// row-major, component k = 4*i + j.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "twospin/error.hpp"

namespace twospin {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;
using Vector16d = Eigen::Matrix<double, 16, 1>;
using Vector16c = Eigen::Matrix<Complex, 16, 1>;

namespace tolerance {
inline constexpr double hermitian = 1e-12;
inline constexpr double trace = 1e-12;
inline constexpr double positivity = 1e-10;
inline constexpr double real_component = 1e-10;
} // namespace tolerance

/// Single-qubit Pauli matrix sigma_i, i in {0,1,2,3}.
inline Matrix2c pauli(int i) {
  const Complex I(0.0, 1.0);
  Matrix2c m;
  switch (i) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -I, I, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw DomainError("pauli index out of range: " + std::to_string(i));
  }
  return m;
}

inline Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      out.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
  return out;
}

/// sigma_i (x) sigma_j, qubit 1 is the left factor.
inline Matrix4c pauli_product(int i, int j) { return kron(pauli(i), pauli(j)); }

/// All 16 products, indexed 4*i + j.
inline const std::array<Matrix4c, 16>& pauli_basis() {
  static const std::array<Matrix4c, 16> basis = [] {
    std::array<Matrix4c, 16> b;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        b[4 * i + j] = pauli_product(i, j);
    return b;
  }();
  return basis;
}

constexpr int flat_index(int i, int j) { return 4 * i + j; }

/// Generalized Bloch vector: 16 real expectation values <sigma_i sigma_j>.
class PauliVector {
public:
  PauliVector() : alpha_(Vector16d::Zero()) { alpha_(0) = 1.0; }
  explicit PauliVector(const Vector16d& alpha) : alpha_(alpha) {}

  double operator()(int i, int j) const { return alpha_(flat_index(i, j)); }
  double& operator()(int i, int j) { return alpha_(flat_index(i, j)); }
  double operator[](int k) const { return alpha_(k); }
  double& operator[](int k) { return alpha_(k); }

  const Vector16d& components() const { return alpha_; }

  /// Scaled copy with alpha(0,0) = 1. Throws if alpha(0,0) vanishes.
  PauliVector normalized() const {
    if (std::abs(alpha_(0)) < 1e-300)
      throw InvalidState("cannot normalize a Pauli vector with zero trace component");
    return PauliVector(alpha_ / alpha_(0));
  }

  bool is_normalized(double tol = tolerance::trace) const {
    return std::abs(alpha_(0) - 1.0) <= tol;
  }

private:
  Vector16d alpha_;
};

/// 4x4 Hermitian unit-trace matrix. Hermiticity and trace are checked on
/// construction; positivity is checked separately because intermediate
/// states of truncated expansions may be slightly negative.
class TwoQubitDensityMatrix {
public:
  explicit TwoQubitDensityMatrix(const Matrix4c& m) : m_(m) {
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (!(herm <= tolerance::hermitian))
      throw InvalidState("density matrix is not Hermitian (max deviation " +
                         std::to_string(herm) + ")");
    const Complex tr = m.trace();
    if (!(std::abs(tr - 1.0) <= tolerance::trace))
      throw InvalidState("density matrix trace " + std::to_string(tr.real()) + "+" +
                         std::to_string(tr.imag()) + "i is not 1");
  }

  const Matrix4c& matrix() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

  Eigen::Vector4d eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  double min_eigenvalue() const { return eigenvalues().minCoeff(); }

  bool is_positive(double tol = tolerance::positivity) const {
    return min_eigenvalue() >= -tol;
  }

  /// Throws InvalidState unless all eigenvalues are >= -tol.
  const TwoQubitDensityMatrix& require_positive(double tol = tolerance::positivity) const {
    const double lo = min_eigenvalue();
    if (lo < -tol)
      throw InvalidState("density matrix has negative eigenvalue " + std::to_string(lo));
    return *this;
  }

private:
  Matrix4c m_;
};

/// Lambda = <sigma^1 . sigma^2>, restricted to [-3, 1].
class CorrelationScalar {
public:
  explicit CorrelationScalar(double value) : value_(value) {
    if (!(value >= -3.0 - 1e-10 && value <= 1.0 + 1e-10))
      throw DomainError("correlation scalar " + std::to_string(value) +
                        " outside [-3, 1]");
  }
  double value() const { return value_; }
  operator double() const { return value_; }

private:
  double value_;
};

inline PauliVector density_to_bloch(const TwoQubitDensityMatrix& rho) {
  const auto& basis = pauli_basis();
  Vector16d alpha;
  for (int k = 0; k < 16; ++k) {
    const Complex v = (rho.matrix() * basis[k]).trace();
    if (std::abs(v.imag()) > tolerance::real_component)
      throw InvalidState("Pauli component " + std::to_string(k) +
                         " has imaginary part " + std::to_string(v.imag()));
    alpha(k) = v.real();
  }
  return PauliVector(alpha);
}

inline PauliVector density_to_bloch(const Matrix4c& rho) {
  return density_to_bloch(TwoQubitDensityMatrix(rho));
}

/// rho = (1/4) sum alpha(i,j) sigma_i (x) sigma_j. Positivity is not checked.
inline TwoQubitDensityMatrix bloch_to_density(const PauliVector& v) {
  if (!v.is_normalized())
    throw InvalidState("alpha(0,0) = " + std::to_string(v[0]) + ", expected 1");
  const auto& basis = pauli_basis();
  Matrix4c m = Matrix4c::Zero();
  for (int k = 0; k < 16; ++k) m += (0.25 * v[k]) * basis[k];
  // The sum is Hermitian up to rounding; symmetrize so the check is exact.
  m = 0.5 * (m + m.adjoint()).eval();
  return TwoQubitDensityMatrix(m);
}

inline CorrelationScalar correlation_scalar(const PauliVector& v) {
  return CorrelationScalar(v(1, 1) + v(2, 2) + v(3, 3));
}

namespace detail {

/// sqrt(mu_1) - sqrt(mu_2) - sqrt(mu_3) - sqrt(mu_4) without the clamp at 0.
///
/// The square roots of the eigenvalues of rho (sy sy) rho* (sy sy) are the
/// singular values of tau = W^T (sy sy) W, W = [sqrt(p_k) v_k] from the
/// eigendecomposition of rho. Working with singular values keeps the small
/// roots accurate where the non-Hermitian eigenproblem would lose half the
/// digits.
inline double concurrence_witness(const Matrix4c& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho);
  Matrix4c w = es.eigenvectors();
  for (int k = 0; k < 4; ++k) {
    double p = es.eigenvalues()(k);
    if (p < 1e-14) p = 0.0;
    w.col(k) *= std::sqrt(p);
  }
  const Matrix4c yy = pauli_product(2, 2);
  const Matrix4c tau = w.transpose() * yy * w;
  Eigen::JacobiSVD<Matrix4c> svd(tau);
  Eigen::Vector4d s = svd.singularValues();
  std::sort(s.data(), s.data() + 4, std::greater<>());
  return s(0) - s(1) - s(2) - s(3);
}

} // namespace detail

/// Wootters concurrence in [0, 1]. Requires a positive density matrix.
inline double wootters_concurrence(const TwoQubitDensityMatrix& rho) {
  rho.require_positive();
  return std::clamp(detail::concurrence_witness(rho.matrix()), 0.0, 1.0);
}

/// Concurrence of a Pauli vector, tolerant of the slight negativity that
/// propagated states may carry. Used along trajectories.
inline double concurrence_of(const PauliVector& v) {
  const auto rho = bloch_to_density(v);
  return std::clamp(detail::concurrence_witness(rho.matrix()), 0.0, 1.0);
}

namespace states {

inline Vector4c ket(Complex a, Complex b, Complex c, Complex d) {
  Vector4c v;
  v << a, b, c, d;
  return v;
}

/// |psi><psi| for a normalized 4-component ket in the z product basis
/// ordered |uu>, |ud>, |du>, |dd>.
inline TwoQubitDensityMatrix projector(const Vector4c& psi) {
  const Vector4c n = psi / psi.norm();
  return TwoQubitDensityMatrix(n * n.adjoint());
}

inline const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

/// (|ud> - |du>)/sqrt(2), Lambda = -3.
inline Vector4c singlet_ket() { return ket(0, inv_sqrt2, -inv_sqrt2, 0); }
/// (|ud> + |du>)/sqrt(2), Lambda = +1.
inline Vector4c triplet_zero_ket() { return ket(0, inv_sqrt2, inv_sqrt2, 0); }
/// |ud> in the z basis, Lambda = -1.
inline Vector4c up_down_z_ket() { return ket(0, 1, 0, 0); }
/// |up up> along x, the zero-temperature ground state of -(D/2)(sx1 + sx2).
inline Vector4c up_up_x_ket() { return ket(0.5, 0.5, 0.5, 0.5); }

inline PauliVector singlet() { return density_to_bloch(projector(singlet_ket())); }
inline PauliVector triplet_zero() { return density_to_bloch(projector(triplet_zero_ket())); }
inline PauliVector up_down_z() { return density_to_bloch(projector(up_down_z_ket())); }
inline PauliVector up_up_x() { return density_to_bloch(projector(up_up_x_ket())); }
inline PauliVector maximally_mixed() { return PauliVector(); }

/// Product of two single-qubit states with Bloch vectors a and b (|a|,|b| <= 1).
inline PauliVector product(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  PauliVector v;
  for (int i = 0; i < 3; ++i) {
    v(i + 1, 0) = a(i);
    v(0, i + 1) = b(i);
    for (int j = 0; j < 3; ++j) v(i + 1, j + 1) = a(i) * b(j);
  }
  return v;
}

/// p |singlet><singlet| + (1-p) I/4.
inline PauliVector werner(double p) {
  const PauliVector s = singlet();
  Vector16d a = p * s.components();
  a(0) = 1.0;
  return PauliVector(a);
}

} // namespace states

} // namespace twospin

#endif // TWOSPIN_STATE_HPP
