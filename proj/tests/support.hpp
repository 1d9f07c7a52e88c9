#ifndef TWOSPIN_TESTS_SUPPORT_HPP
#define TWOSPIN_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "twospin/state.hpp"

namespace twospin::fixtures {

inline Matrix4c random_gaussian4(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix4c g;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) g(r, c) = Complex(n(rng), n(rng));
  return g;
}

/// Full-rank random density matrix (Ginibre ensemble).
inline TwoQubitDensityMatrix random_density(std::mt19937_64& rng) {
  const Matrix4c g = random_gaussian4(rng);
  Matrix4c m = g * g.adjoint();
  m /= m.trace();
  m = 0.5 * (m + m.adjoint()).eval();
  return TwoQubitDensityMatrix(m);
}

inline Matrix2c random_unitary2(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix2c g;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) g(r, c) = Complex(n(rng), n(rng));
  Eigen::HouseholderQR<Matrix2c> qr(g);
  return qr.householderQ();
}

inline Eigen::Vector3d random_unit3(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector3d v(n(rng), n(rng), n(rng));
  return v / v.norm();
}

/// Brute-force concurrence straight from the eigenvalues of rho (sy sy) rho* (sy sy).
inline double concurrence_by_eigenvalues(const Matrix4c& rho) {
  const Matrix4c yy = pauli_product(2, 2);
  const Matrix4c m = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Matrix4c> es(m);
  std::array<double, 4> mu{};
  for (int i = 0; i < 4; ++i) mu[static_cast<std::size_t>(i)] = std::max(es.eigenvalues()(i).real(), 0.0);
  std::sort(mu.begin(), mu.end(), std::greater<>());
  return std::max(0.0, std::sqrt(mu[0]) - std::sqrt(mu[1]) - std::sqrt(mu[2]) - std::sqrt(mu[3]));
}

} // namespace twospin::fixtures

#endif
