#include "kerr/errors.hpp"
#include "kerr/fock.hpp"

#include "../oracles/oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace kerr;
using testing_support::WarningCapture;

namespace {

CMatrix random_matrix(int d, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  CMatrix m(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) m(i, j) = cplx(n(rng), n(rng));
  return m;
}

CVector random_ket(int d, int support, std::mt19937& rng) {
  std::normal_distribution<double> n;
  CVector v = CVector::Zero(d);
  for (int i = 0; i < support; ++i) v(i) = cplx(n(rng), n(rng));
  return v.normalized();
}

}  // namespace

TEST(FockDim, RejectsFewerThanTwoLevels) {
  EXPECT_THROW(FockDim(1), Error);
  EXPECT_THROW(FockDim(0), Error);
  EXPECT_EQ(FockDim(2).value(), 2);
}

TEST(Operator, RejectsShapeMismatchAndNonFinite) {
  EXPECT_THROW(Operator(FockDim(3), CMatrix::Zero(2, 2)), DimensionMismatch);
  CMatrix bad = CMatrix::Zero(3, 3);
  bad(1, 1) = std::nan("");
  EXPECT_THROW(Operator(FockDim(3), bad), Error);
  EXPECT_THROW(number(FockDim(3)) * number(FockDim(4)), DimensionMismatch);
  EXPECT_THROW(expectation(QuantumState::vacuum(FockDim(3)), number(FockDim(4))),
               DimensionMismatch);
}

TEST(Annihilation, MatrixForThreeLevels) {
  const CMatrix a = annihilation(FockDim(3)).matrix();
  CMatrix expected = CMatrix::Zero(3, 3);
  expected(0, 1) = 1.0;
  expected(1, 2) = std::sqrt(2.0);
  EXPECT_LT((a - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Annihilation, LowersOneToZero) {
  const FockDim d(2);
  const CVector out = annihilation(d).matrix() * QuantumState::fock(d, 1).ket();
  EXPECT_NEAR(std::abs(out(0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out(1)), 0.0, 1e-15);
}

TEST(Annihilation, CoherentStateEigenvalue) {
  const FockDim d(40);
  const QuantumState s = QuantumState::coherent(d, 0.5);
  EXPECT_NEAR(std::abs(expectation(s, annihilation(d)) - 0.5), 0.0, 1e-8);
}

TEST(Quadrature, VacuumSecondMoment) {
  const FockDim d(10);
  const Operator x = quadrature(d, 0.0);
  EXPECT_NEAR(expectation(QuantumState::vacuum(d), x * x).real(), 0.5, 1e-15);
}

TEST(Quadrature, EndpointsAreXandP) {
  const FockDim d(12);
  const CMatrix a = annihilation(d).matrix();
  const CMatrix p = cplx(0, -1) * (a - a.adjoint()) / std::sqrt(2.0);
  EXPECT_LT((quadrature(d, std::numbers::pi / 2).matrix() - p).cwiseAbs().maxCoeff(),
            1e-15);
  EXPECT_LT((p_quadrature(d).matrix() - p).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((quadrature(d, 0.0).matrix() - x_quadrature(d).matrix())
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
}

TEST(Quadrature, CanonicalCommutatorExceptTopLevel) {
  const int n = 15;
  const FockDim d(n);
  const CMatrix x = x_quadrature(d).matrix();
  const CMatrix p = p_quadrature(d).matrix();
  CMatrix diff = x * p - p * x - cplx(0, 1) * CMatrix::Identity(n, n);
  EXPECT_GT(std::abs(diff(n - 1, n - 1)), 1.0);
  diff(n - 1, n - 1) = 0.0;
  EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Operators, GeneratedOperatorsAreHermitian) {
  const FockDim d(30);
  for (double th : {0.0, 0.3, 1.1, 2.9}) {
    EXPECT_LE(quadrature(d, th).hermiticity_defect(), 1e-12);
  }
  EXPECT_LE(x_quadrature(d).hermiticity_defect(), 1e-12);
  EXPECT_LE(p_quadrature(d).hermiticity_defect(), 1e-12);
  EXPECT_LE(number(d).hermiticity_defect(), 1e-12);
  EXPECT_LE(parity(d).hermiticity_defect(), 1e-12);
  EXPECT_FALSE(annihilation(d).is_hermitian());
}

TEST(Displacement, ZeroIsIdentity) {
  const FockDim d(20);
  EXPECT_LT((displacement(d, 0.0).matrix() - CMatrix::Identity(20, 20))
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
}

TEST(Displacement, CoherentPhotonNumber) {
  const FockDim d(60);
  const QuantumState s = transform(QuantumState::vacuum(d),
                                   displacement(d, 1.0).matrix());
  EXPECT_NEAR(mean_photon_number(s), 1.0, 1e-8);
}

TEST(Displacement, ShiftsXOnLowLevels) {
  const int n = 60;
  const FockDim d(n);
  const cplx alpha = 0.3;
  const CMatrix dm = displacement(d, alpha).matrix();
  const CMatrix shifted = dm.adjoint() * x_quadrature(d).matrix() * dm;
  const CMatrix expected = x_quadrature(d).matrix() +
                           std::sqrt(2.0) * alpha.real() * CMatrix::Identity(n, n);
  EXPECT_LT((shifted - expected).topLeftCorner(30, 30).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Displacement, UnitaryAwayFromTop) {
  const FockDim d(50);
  const CMatrix dm = displacement(d, cplx(0.4, -0.2)).matrix();
  const CMatrix u = dm.adjoint() * dm;
  EXPECT_LT((u - CMatrix::Identity(50, 50)).topLeftCorner(25, 25).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(Displacement, WarnsForLargeAmplitude) {
  WarningCapture w;
  displacement(FockDim(20), 2.0);
  ASSERT_EQ(w.messages().size(), 1u);
  displacement(FockDim(20), 1.0);
  EXPECT_EQ(w.messages().size(), 1u);
}

TEST(Moments, VacuumValues) {
  const FockDim d(10);
  const QuantumState vac = QuantumState::vacuum(d);
  EXPECT_NEAR(expectation(vac, number(d)).real(), 0.0, 1e-15);
  EXPECT_NEAR(variance(vac, x_quadrature(d)), 0.5, 1e-15);
  const Eigen::Matrix2d g = quadrature_covariance(vac);
  EXPECT_NEAR(g(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(g(1, 1), 0.5, 1e-15);
  EXPECT_NEAR(g(0, 1), 0.0, 1e-15);
}

TEST(Moments, ThermalVariance) {
  const FockDim d(200);
  const QuantumState th = QuantumState::thermal(d, 1.0);
  EXPECT_NEAR(variance(th, x_quadrature(d)), 1.5, 1e-10);
  EXPECT_NEAR(mean_photon_number(th), 1.0, 1e-10);
}

TEST(Moments, VarianceRequiresHermitian) {
  const FockDim d(5);
  EXPECT_THROW(variance(QuantumState::vacuum(d), annihilation(d)), NotHermitian);
}

TEST(Moments, ExpectationIsLinear) {
  std::mt19937 rng(7);
  const int n = 12;
  const FockDim d(n);
  const QuantumState s = QuantumState::pure(random_ket(n, n, rng));
  for (int trial = 0; trial < 20; ++trial) {
    const Operator a(d, random_matrix(n, rng, 0.1));
    const Operator b(d, random_matrix(n, rng, 0.1));
    const cplx c(0.3 * trial - 2.0, 0.7);
    const cplx lhs = expectation(s, a + b * c);
    const cplx rhs = expectation(s, a) + c * expectation(s, b);
    EXPECT_LT(std::abs(lhs - rhs), 1e-12);
  }
}

TEST(Moments, VarianceConcaveOverMixtures) {
  std::mt19937 rng(11);
  const int n = 10;
  const FockDim d(n);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector u = random_ket(n, n, rng);
    const CVector v = random_ket(n, n, rng);
    CMatrix h = random_matrix(n, rng);
    const Operator a(d, (h + h.adjoint()) * 0.5);
    const double w = 0.3;
    const QuantumState mix = QuantumState::mixed(w * u * u.adjoint() +
                                                 (1 - w) * v * v.adjoint());
    const double vu = variance(QuantumState::pure(u), a);
    const double vv = variance(QuantumState::pure(v), a);
    EXPECT_GE(vu, 0.0);
    EXPECT_GE(variance(mix, a), w * vu + (1 - w) * vv - 1e-10);
  }
}

TEST(Moments, CoherentStatesHaveVacuumNoise) {
  const FockDim d(60);
  for (int k = 0; k < 8; ++k) {
    const cplx alpha = std::polar(0.125 * (k + 1), 0.8 * k);
    const QuantumState s = QuantumState::coherent(d, alpha);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(quadrature_covariance(s));
    EXPECT_NEAR(es.eigenvalues()(0), 0.5, 1e-7);
    EXPECT_NEAR(es.eigenvalues()(1), 0.5, 1e-7);
  }
}

TEST(Moments, CovarianceSymmetrized) {
  const FockDim d(30);
  const QuantumState s = QuantumState::coherent(d, cplx(0.3, 0.2));
  EXPECT_NEAR(covariance(s, x_quadrature(d), p_quadrature(d)), 0.0, 1e-12);
  EXPECT_NEAR(covariance(s, x_quadrature(d), x_quadrature(d)), 0.5, 1e-12);
}

TEST(QuantumState, ValidatesInvariants) {
  CVector v = CVector::Zero(4);
  v(0) = 1.1;
  EXPECT_THROW(QuantumState::pure(v), InvalidState);
  CMatrix rho = CMatrix::Zero(3, 3);
  rho(0, 0) = 1.2;
  rho(1, 1) = -0.2;
  EXPECT_THROW(QuantumState::mixed(rho), InvalidState);
  CMatrix nonherm = CMatrix::Zero(3, 3);
  nonherm(0, 0) = 1.0;
  nonherm(0, 1) = 0.1;
  EXPECT_THROW(QuantumState::mixed(nonherm), InvalidState);
}

TEST(QuantumState, KetOfMixedStateThrows) {
  const QuantumState m = QuantumState::thermal(FockDim(10), 0.2);
  EXPECT_FALSE(m.is_pure());
  EXPECT_THROW(m.ket(), InvalidState);
}

TEST(QuantumState, TruncationReportFlagsTail) {
  const FockDim d(20);
  CVector v = CVector::Zero(20);
  v(0) = std::sqrt(1 - 1e-4);
  v(19) = std::sqrt(1e-4);
  const TruncationReport r = QuantumState::pure(v).check_truncation();
  EXPECT_FALSE(r.ok);
  EXPECT_NEAR(r.tail, 1e-4, 1e-12);
  EXPECT_TRUE(QuantumState::vacuum(d).check_truncation().ok);
}

TEST(StateUtilities, EmbedAndFidelity) {
  const QuantumState c = QuantumState::coherent(FockDim(30), 0.4);
  const QuantumState big = embed(c, FockDim(40));
  EXPECT_EQ(big.dim().value(), 40);
  EXPECT_NEAR(fidelity(embed(c, FockDim(40)), big), 1.0, 1e-12);
  const QuantumState th = QuantumState::thermal(FockDim(30), 0.3);
  EXPECT_NEAR(fidelity(th, th), 1.0, 1e-9);
  EXPECT_NEAR(fidelity(c, QuantumState::mixed(c.density())), 1.0, 1e-9);
  const double f = fidelity(th, QuantumState::vacuum(FockDim(30)));
  EXPECT_NEAR(f, 1.0 / 1.3, 1e-9);  // thermal ground population
}

TEST(Expm, MatchesEigenDecompositionOfHermitian) {
  std::mt19937 rng(3);
  const int n = 20;
  CMatrix h = random_matrix(n, rng);
  h = (h + h.adjoint()).eval() * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CVector ph(n);
  for (int k = 0; k < n; ++k) ph(k) = std::polar(1.0, -0.7 * es.eigenvalues()(k));
  const CMatrix ref = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
  EXPECT_LT((expm(cplx(0, -0.7) * h) - ref).norm(), 1e-12);
}

TEST(Rotation, ShiftsCoherentPhase) {
  const FockDim d(40);
  const QuantumState c = QuantumState::coherent(d, 0.5);
  const QuantumState r = transform(c, rotation(d, 0.3).matrix());
  const cplx a = expectation(r, annihilation(d));
  EXPECT_NEAR(std::abs(a - std::polar(0.5, -0.3)), 0.0, 1e-10);
}
