#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "twospin/liouvillian.hpp"

using namespace twospin;

namespace {

using Matrix16 = Eigen::Matrix<Complex, 16, 16>;

// Column-stacking vec: vec(A X B) = (B^T kron A) vec(X).
Matrix16 kron16(const Matrix4c& a, const Matrix4c& b) {
  Matrix16 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
  return out;
}

Matrix16 left_mul(const Matrix4c& a) { return kron16(Matrix4c::Identity(), a); }
Matrix16 right_mul(const Matrix4c& b) { return kron16(b.transpose(), Matrix4c::Identity()); }

// The master equation written out in rho space with explicit Kronecker
// products, then carried to Pauli coordinates by a change of basis.
Matrix16d pauli_generator_oracle(double field, const RateSet& r, double lamb_a = 0.0, double lamb_b = 0.0,
                                 double xi = 0.0) {
  const Complex i(0.0, 1.0);
  const Matrix2c id = Matrix2c::Identity();
  Matrix2c sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, -i, i, 0;
  sz << 1, 0, 0, -1;
  const auto k2 = [](const Matrix2c& a, const Matrix2c& b) {
    Matrix4c m;
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) m.block<2, 2>(2 * p, 2 * q) = a(p, q) * b;
    return m;
  };
  Matrix4c h = -0.5 * field * (k2(sx, id) + k2(id, sx));
  h += lamb_a * (k2(sx, id) + k2(id, sx)) + lamb_b * (k2(sz, sz) + k2(sy, sy));
  h += xi * (k2(sx, sx) + k2(sy, sy) + k2(sz, sz));

  Matrix16 s = -i * (left_mul(h) - right_mul(h));
  for (int sign : {+1, -1}) {
    const Matrix2c a = 0.5 * (sz - static_cast<double>(sign) * i * sy);
    const Matrix4c ops[2] = {k2(a, id), k2(id, a)};
    const double g11 = sign > 0 ? r.gamma11_plus : r.gamma11_minus;
    const double g12 = sign > 0 ? r.gamma12_plus : r.gamma12_minus;
    for (int n = 0; n < 2; ++n)
      for (int m = 0; m < 2; ++m) {
        const double g = n == m ? g11 : g12;
        const Matrix4c an = ops[n], am = ops[m];
        const Matrix4c ad = an.adjoint() * am;
        s += g * (kron16(an.adjoint().transpose(), am) - 0.5 * left_mul(ad) - 0.5 * right_mul(ad));
      }
  }
  // alpha_k = tr(P_k rho) = vec(P_k^T) . vec(rho); rho = sum_k alpha_k P_k / 4
  Matrix16 t, tinv;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const Matrix4c p = k2(a == 0 ? id : a == 1 ? sx : a == 2 ? sy : sz, b == 0 ? id : b == 1 ? sx : b == 2 ? sy : sz);
      const int k = 4 * a + b;
      for (int c = 0; c < 4; ++c)
        for (int rr = 0; rr < 4; ++rr) {
          t(k, rr + 4 * c) = p(c, rr);
          tinv(rr + 4 * c, k) = 0.25 * p(rr, c);
        }
    }
  const Matrix16 l = t * s * tinv;
  EXPECT_LT(l.imag().cwiseAbs().maxCoeff(), 1e-12);
  return l.real();
}

SpectrumReport spectrum(double delta, double r, double field = 10.0, double gamma0 = 1.0) {
  const auto rates = RateSet::make(gamma0, BathThermal::from_ratio(r), delta);
  ModelParams p;
  p.delta_field = field;
  return classify_spectrum(build_generator(p, rates, false, false));
}

double cosine(const Vector16d& a, const Vector16d& b) { return std::abs(a.dot(b)) / (a.norm() * b.norm()); }

} // namespace

TEST(Generator, FirstRowZero) {
  for (double r : {0.3, 0.9, 1.0}) {
    ModelParams p;
    p.delta_field = 3.0;
    p.lamb_A = 0.4;
    p.lamb_B = -0.2;
    p.exchange_xi = 0.7;
    const auto g = build_generator(p, RateSet::make(1.0, BathThermal::from_ratio(r), 0.3), true, true);
    EXPECT_EQ(g.entries.row(0).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Generator, MatchesRhoSpaceOracle) {
  for (double r : {0.5, 0.9, 1.0})
    for (double delta : {0.0, 0.05, 1.2}) {
      const auto rates = RateSet::make(0.7, BathThermal::from_ratio(r), delta);
      ModelParams p;
      p.delta_field = 4.0;
      p.lamb_A = 0.3;
      p.lamb_B = -0.45;
      p.exchange_xi = 0.25;
      const auto plain = build_generator(p, rates, false, false);
      EXPECT_LT((plain.entries - pauli_generator_oracle(4.0, rates)).cwiseAbs().maxCoeff(), 1e-12);
      const auto full = build_generator(p, rates, true, true);
      EXPECT_LT((full.entries - pauli_generator_oracle(4.0, rates, 0.3, -0.45, 0.25)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Generator, ClosedSystemSpectrum) {
  ModelParams p;
  p.delta_field = 2.5;
  const auto g = build_generator(p, RateSet::make(0.0, BathThermal::from_ratio(1.0), 0.0), false, false);
  Eigen::EigenSolver<Matrix16d> es(g.entries);
  double re = 0.0;
  for (int k = 0; k < 16; ++k) {
    const Complex v = es.eigenvalues()(k);
    re = std::max(re, std::abs(v.real()));
    const double m = std::abs(v.imag()) / 2.5;
    EXPECT_NEAR(m, std::round(m), 1e-10);
    EXPECT_LE(std::round(m), 2.0);
  }
  EXPECT_LT(re, 1e-10);
}

TEST(Generator, PreservesHermiticity) {
  std::mt19937_64 rng(11);
  ModelParams p;
  p.delta_field = 1.7;
  const auto rates = RateSet::make(1.0, BathThermal::from_ratio(0.6), 0.2);
  const auto sup = detail::make_superoperator(p, rates, false, false);
  const auto g = build_generator(p, rates, false, false);
  for (int n = 0; n < 50; ++n) {
    const auto rho = fixtures::random_density(rng);
    const Matrix4c d = sup.apply(rho.matrix());
    EXPECT_LT((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-13);
    const Vector16d via_l = g.entries * density_to_bloch(rho).components();
    for (int k = 0; k < 16; ++k) {
      const Complex direct = (d * pauli_basis()[static_cast<std::size_t>(k)]).trace();
      EXPECT_NEAR(direct.imag(), 0.0, 1e-13);
      EXPECT_NEAR(via_l(k), direct.real(), 1e-12);
    }
  }
}

TEST(Spectrum, ThermalVectorPattern) {
  const auto rep = spectrum(0.05, 0.9);
  const Vector16d expect = analytic_thermal_state(BathThermal::from_ratio(0.9)).components();
  EXPECT_LT((rep.thermal_state().components() - expect).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_EQ(rep.labels[0], ModeLabel::Thermal);
}

TEST(Spectrum, SlowEigenvalueNearFirstOrder) {
  const auto rep = spectrum(0.05, 0.9);
  EXPECT_NEAR(rep.slow_rate(), -0.05833, 0.1 * 0.05833);
  EXPECT_EQ(rep.eigenvalue(1).imag(), rep.eigenvalue(1).imag());
  const auto s = analytic_slow_eigenpair(BathThermal::from_ratio(0.9), RateSet::make(1.0, BathThermal::from_ratio(0.9), 0.05));
  EXPECT_NEAR(s.lambda1, -0.058333333333333, 1e-12);
}

TEST(Spectrum, AnalyticSlowEigenpairExamples) {
  EXPECT_EQ(analytic_slow_eigenpair(BathThermal::from_ratio(0.5), RateSet::make(1.0, BathThermal::from_ratio(0.5), 0.0)).lambda1, 0.0);
  EXPECT_NEAR(analytic_slow_eigenpair(BathThermal::from_ratio(1.0), RateSet::make(1.0, BathThermal::from_ratio(1.0), 0.05)).lambda1,
              -0.05, 1e-15);
  EXPECT_TRUE(analytic_slow_eigenpair(BathThermal::from_ratio(1.0), RateSet::make(1.0, BathThermal::from_ratio(1.0), 0.3)).outside_validity);
}

TEST(Spectrum, SlowRateVanishesLinearly) {
  std::vector<double> ratio;
  for (double delta : {1e-2, 1e-3, 1e-4}) ratio.push_back(spectrum(delta, 0.7).slow_rate() / delta);
  EXPECT_NEAR(ratio[1] / ratio[0], 1.0, 0.02);
  EXPECT_NEAR(ratio[2] / ratio[1], 1.0, 0.002);
  EXPECT_LT(std::abs(spectrum(1e-4, 0.7).slow_rate()), 1e-3);
}

// Degenerate perturbation theory on the delta = 0 null space gives the slope
// -4 / (R (3 + R^2)); -(1 + 3N) differs from it by (1 - R)^3 / (2R (3 + R^2)).
TEST(Spectrum, SlowRateSlopeFromDegeneratePerturbation) {
  for (double r : {1.0, 0.9, 0.7, 0.5}) {
    const double slope = -4.0 / (r * (3.0 + r * r));
    std::vector<double> rem;
    for (double delta : {4e-3, 2e-3, 1e-3}) rem.push_back(spectrum(delta, r).slow_rate() - slope * delta);
    if (r == 1.0) {
      for (double x : rem) EXPECT_LT(std::abs(x), 1e-15);
      continue;
    }
    EXPECT_NEAR(rem[0] / rem[1], 4.0, 0.05) << "R=" << r;
    EXPECT_NEAR(rem[1] / rem[2], 4.0, 0.05) << "R=" << r;
    const double n = 0.5 * (1.0 / r - 1.0);
    EXPECT_NEAR(-(1.0 + 3.0 * n) - slope, -std::pow(1.0 - r, 3) / (2.0 * r * (3.0 + r * r)), 1e-14);
  }
}

TEST(Spectrum, OscillatoryPairLimit) {
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const double r = 1.0 - eps, delta = eps;
    const auto rep = spectrum(delta, r);
    const double formula = -0.5 * (1.0 - r + 2.0 * delta - delta * r);
    EXPECT_EQ(rep.labels[2], ModeLabel::Oscillatory);
    EXPECT_NEAR(rep.eigenvalue(2).real(), formula, 0.05 * std::abs(formula));
    EXPECT_NEAR(rep.eigenvalue(2).imag(), -10.0, 1e-2);
    EXPECT_NEAR(std::abs(rep.eigenvalue(3) - std::conj(rep.eigenvalue(2))), 0.0, 1e-10);
  }
  EXPECT_LT(std::abs(spectrum(1e-5, 1.0 - 1e-5).eigenvalue(2).real()), 1e-4);
}

TEST(Spectrum, InvariantsOverGrid) {
  for (double delta : {0.01, 0.05, 0.2, 0.6})
    for (double r : {0.3, 0.5, 0.9, 0.99, 1.0}) {
      const auto rep = spectrum(delta, r);
      EXPECT_LT(rep.biorthogonality_error, 1e-8);
      int zeros = 0;
      for (int l = 0; l < 16; ++l) {
        const Complex v = rep.eigenvalue(l);
        if (std::abs(v) < rep.tol_zero) ++zeros;
        else EXPECT_LT(v.real(), 0.0);
        // closed under conjugation
        double best = HUGE_VAL;
        for (int k = 0; k < 16; ++k) best = std::min(best, std::abs(rep.eigenvalue(k) - std::conj(v)));
        EXPECT_LT(best, 1e-9);
      }
      EXPECT_EQ(zeros, 1);
      EXPECT_LT(rep.eigenvalue(2).imag(), 0.0);
      for (int l = 4; l < 16; ++l) EXPECT_EQ(rep.labels[static_cast<std::size_t>(l)], ModeLabel::Fast);
    }
}

TEST(Spectrum, FastModesScaleWithInverseR) {
  const auto rep = spectrum(0.05, 0.9);
  EXPECT_TRUE(rep.fast_violations.empty());
  for (int l = 4; l < 16; ++l) EXPECT_LE(rep.eigenvalue(l).real(), -0.5 / 0.9);
}

TEST(Spectrum, IndependentBathsAreDegenerate) {
  // delta = 1: two uncorrelated copies of the same single-qubit decay
  ModelParams p;
  p.delta_field = 10.0;
  EXPECT_THROW(classify_spectrum(build_generator(p, RateSet::make(1.0, BathThermal::from_ratio(0.5), 1.0), false, false)),
               DegenerateSpectrum);
}

TEST(Spectrum, ZeroSeparationIsDegenerate) {
  const auto rates = RateSet::make(1.0, BathThermal::from_ratio(0.8), 0.0);
  ModelParams p;
  EXPECT_THROW(classify_spectrum(build_generator(p, rates, false, false)), DegenerateSpectrum);
  try {
    classify_spectrum(build_generator(p, rates, false, false));
  } catch (const DegenerateSpectrum& e) {
    EXPECT_LT(std::abs(e.first_candidate), 1e-9);
    EXPECT_LT(std::abs(e.second_candidate), 1e-9);
  }
}

TEST(Spectrum, SlowPatternMatchesAnalytic) {
  const auto th = BathThermal::from_ratio(0.9);
  const auto rep = spectrum(0.01, 0.9);
  const auto s = analytic_slow_eigenpair(th, RateSet::make(1.0, th, 0.01));
  EXPECT_GT(cosine(rep.slow_vector(), s.pattern.components()), 0.999);
  EXPECT_NEAR(rep.slow_vector()(flat_index(2, 2)), 1.0, 1e-14);
}

TEST(Spectrum, SlowRateLinearInOccupation) {
  std::vector<double> n, lam;
  for (double x = 0.0; x <= 5.0; x += 0.25) {
    n.push_back(x);
    lam.push_back(spectrum(0.02, BathThermal::from_occupation(x).ratio()).slow_rate());
  }
  const double k = static_cast<double>(n.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    sx += n[i];
    sy += lam[i];
    sxx += n[i] * n[i];
    sxy += n[i] * lam[i];
    syy += lam[i] * lam[i];
  }
  const double cov = sxy - sx * sy / k, vx = sxx - sx * sx / k, vy = syy - sy * sy / k;
  EXPECT_GE(cov * cov / (vx * vy), 0.99);
}

TEST(ModeCoefficients, ThermalInput) {
  const auto rep = spectrum(0.05, 0.9);
  const auto a = mode_coefficients(rep, rep.thermal_state());
  EXPECT_NEAR(std::abs(a[0] - 1.0), 0.0, 1e-10);
  for (int l = 1; l < 16; ++l) EXPECT_LT(std::abs(a[static_cast<std::size_t>(l)]), 1e-10);
}

TEST(ModeCoefficients, SingletIsSlowSector) {
  const auto rep = spectrum(0.01, 0.9);
  const auto a = mode_coefficients(rep, states::singlet());
  for (int l = 2; l < 16; ++l) EXPECT_LT(std::abs(a[static_cast<std::size_t>(l)]), 0.05) << l;
}

TEST(ModeCoefficients, SlowAmplitudeMatchesClosedForm) {
  const auto rep = spectrum(0.05, 0.9);
  const auto a = mode_coefficients(rep, states::up_down_z());
  EXPECT_NEAR(a[1].real(), -0.4751, 0.02 * 0.4751);
  EXPECT_NEAR(a[1].imag(), 0.0, 1e-12);
  EXPECT_NEAR(a[1].real(), (-1.0 - 0.81) / 3.81, 0.02 * 0.4751);
}

TEST(ModeCoefficients, ReconstructionProperty) {
  std::mt19937_64 rng(5);
  for (double delta : {0.01, 0.2})
    for (double r : {0.5, 0.95}) {
      const auto rep = spectrum(delta, r);
      for (int n = 0; n < 20; ++n) {
        const auto alpha = density_to_bloch(fixtures::random_density(rng));
        const auto back = reconstruct(rep, mode_coefficients(rep, alpha));
        EXPECT_LT((back.components() - alpha.components()).cwiseAbs().maxCoeff(), 1e-8);
      }
    }
}

TEST(LambAndExchange, NullActionOnSlowSector) {
  ModelParams p;
  p.delta_field = 10.0;
  p.lamb_A = 0.37;
  p.lamb_B = 1.3;
  p.exchange_xi = -0.9;
  for (double r : {0.8, 1.0}) {
    const auto rates = RateSet::make(1.0, BathThermal::from_ratio(r), 0.05);
    const auto off = build_generator(p, rates, false, false);
    const auto rep_off = classify_spectrum(off);
    for (auto [lamb, ex] : {std::pair{true, false}, {false, true}, {true, true}}) {
      const auto on = build_generator(p, rates, lamb, ex);
      for (int l : {0, 1}) {
        const Vector16d v = rep_off.right.col(l).real();
        EXPECT_LT((on.entries * v - off.entries * v).cwiseAbs().maxCoeff(), 1e-8);
      }
      EXPECT_NEAR(classify_spectrum(on).slow_rate(), rep_off.slow_rate(), 1e-10);
    }
  }
}

TEST(LambAndExchange, FieldShiftLeavesDecayRatesAlone) {
  ModelParams p;
  p.delta_field = 10.0;
  p.lamb_A = 0.37;
  const auto rates = RateSet::make(1.0, BathThermal::from_ratio(0.8), 0.05);
  const auto off = classify_spectrum(build_generator(p, rates, false, false));
  const auto on = classify_spectrum(build_generator(p, rates, true, false));
  EXPECT_NEAR(on.eigenvalue(2).real(), off.eigenvalue(2).real(), 1e-8);
  EXPECT_NEAR(on.eigenvalue(2).imag() - off.eigenvalue(2).imag(), 2.0 * 0.37, 1e-8);
}

TEST(LambAndExchange, OscillatoryPairAtZeroTemperature) {
  ModelParams p;
  p.delta_field = 10.0;
  p.lamb_A = 0.2;
  p.lamb_B = 0.4;
  p.exchange_xi = 0.3;
  for (double delta : {0.01, 0.05, 0.3}) {
    const auto rates = RateSet::make(1.0, BathThermal::from_ratio(1.0), delta);
    const auto off = classify_spectrum(build_generator(p, rates, false, false));
    const auto lamb = classify_spectrum(build_generator(p, rates, true, false));
    const auto both = classify_spectrum(build_generator(p, rates, true, true));
    EXPECT_NEAR(lamb.eigenvalue(2).real(), off.eigenvalue(2).real(), 1e-8);
    EXPECT_NEAR(both.eigenvalue(2).real(), off.eigenvalue(2).real(), 1e-8);
    EXPECT_NEAR(lamb.eigenvalue(2).imag() - off.eigenvalue(2).imag(), 2.0 * (0.2 + 0.4), 1e-8);
    EXPECT_NEAR(both.eigenvalue(2).imag() - off.eigenvalue(2).imag(), 2.0 * (0.2 + 0.4) + 4.0 * 0.3, 1e-8);
  }
}

TEST(LambAndExchange, WarmBathDecayShiftIsSecondOrderInDelta) {
  ModelParams p;
  p.delta_field = 10.0;
  p.lamb_B = 0.4;
  p.exchange_xi = 0.4;
  std::vector<double> shift;
  for (double delta : {1e-2, 1e-3}) {
    const auto rates = RateSet::make(1.0, BathThermal::from_ratio(0.8), delta);
    const auto off = classify_spectrum(build_generator(p, rates, false, false));
    const auto on = classify_spectrum(build_generator(p, rates, true, true));
    shift.push_back(std::abs(on.eigenvalue(2).real() - off.eigenvalue(2).real()));
  }
  EXPECT_NEAR(shift[1] / shift[0], 1e-2, 1e-3);
  EXPECT_LT(shift[1], 1e-6);
}
