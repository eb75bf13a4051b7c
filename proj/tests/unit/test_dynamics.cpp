#include "kerr/dynamics.hpp"
#include "kerr/errors.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace kerr;

TEST(Hamiltonian, DetuningOnlyIsNumberOperator) {
  const CMatrix h = hamiltonian(FockDim(6), {1.0, 0.0, 0.0}).matrix();
  for (int n = 0; n < 6; ++n) EXPECT_NEAR(h(n, n).real(), n, 1e-15);
  EXPECT_NEAR((h - CMatrix(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0,
              1e-15);
}

TEST(Hamiltonian, KerrOnlyDiagonal) {
  const CMatrix h = hamiltonian(FockDim(8), {0.0, 0.0, 1.0}).matrix();
  for (int n = 0; n < 8; ++n) EXPECT_NEAR(h(n, n).real(), -n * (n - 1.0), 1e-12);
}

TEST(Hamiltonian, PairDriveElement) {
  for (double delta : {-1.0, 0.0, 3.0}) {
    for (double k : {0.0, 2.0}) {
      const CMatrix h = hamiltonian(FockDim(10), {delta, 0.7, k}).matrix();
      EXPECT_NEAR(std::abs(h(0, 2) - std::sqrt(2.0) * 0.7), 0.0, 1e-14);
      EXPECT_NEAR(std::abs(h(2, 0) - std::sqrt(2.0) * 0.7), 0.0, 1e-14);
    }
  }
}

TEST(Hamiltonian, MatchesPaddedLadderProducts) {
  const int d = 25;
  const CMatrix h = hamiltonian(FockDim(d), {0.3, 1.7, 0.9}).matrix();
  EXPECT_LT((h - oracle::hamiltonian(d, 0.3, 1.7, 0.9)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(hamiltonian(FockDim(d), {0.3, 1.7, 0.9}).hermiticity_defect(), 1e-12);
}

TEST(UnitaryEvolution, VacuumIsKerrEigenstate) {
  const FockDim d(20);
  const QuantumState out = evolve_unitary(QuantumState::vacuum(d), {0, 0, 1}, 0.8);
  EXPECT_NEAR(fidelity(out, QuantumState::vacuum(d)), 1.0, 1e-14);
}

TEST(UnitaryEvolution, IdealSqueezingLaw) {
  const FockDim d(150);
  for (double t : {0.1, 0.25}) {
    const QuantumState s = evolve_unitary(QuantumState::vacuum(d), {0, 2, 0}, t);
    const double expected = 0.5 * std::exp(-8.0 * t);
    EXPECT_LE(testing_support::rel_diff(min_variance(s).v_min, expected), 1e-6);
  }
}

TEST(UnitaryEvolution, TimeReversalIsIdentity) {
  const FockDim d(80);
  const HamiltonianParams p{0.5, 2.0, 1.0};
  const UnitaryPropagator u(d, p);
  const QuantumState start = QuantumState::coherent(d, cplx(0.3, -0.4));
  const QuantumState back = u.evolve(u.evolve(start, 0.35), -0.35);
  EXPECT_LE(1.0 - fidelity(back, start), 1e-8);
}

TEST(UnitaryEvolution, ConservesNormAndEnergy) {
  const FockDim d(80);
  const HamiltonianParams p{-1.0, 2.0, 1.0};
  const Operator h = hamiltonian(d, p);
  const UnitaryPropagator u(d, p);
  const QuantumState start = QuantumState::coherent(d, 0.8);
  const double e0 = expectation(start, h).real();
  for (double t : {0.05, 0.2, 0.5}) {
    const QuantumState s = u.evolve(start, t);
    EXPECT_NEAR(s.ket().norm(), 1.0, 1e-9);
    EXPECT_NEAR(expectation(s, h).real(), e0, 1e-8);
  }
}

TEST(UnitaryEvolution, EvenParityPreserved) {
  const FockDim d(80);
  const QuantumState s = evolve_unitary(QuantumState::vacuum(d), {1.3, 2.0, 1.0}, 0.45);
  const RVector pops = s.populations();
  double odd = 0.0;
  for (int n = 1; n < d.value(); n += 2) odd += pops(n);
  EXPECT_LT(odd, 1e-10);
}

TEST(UnitaryEvolution, TruncationEscalates) {
  // Pure squeezing at dim 20 runs far into the top levels.
  EXPECT_THROW(evolve_unitary(QuantumState::vacuum(FockDim(40)), {0, 2, 0}, 0.5),
               TruncationError);
  testing_support::WarningCapture w;
  EXPECT_NO_THROW(
      evolve_unitary(QuantumState::vacuum(FockDim(200)), {0, 2, 0}, 0.1));
  EXPECT_TRUE(w.messages().empty());
}

TEST(UnitaryEvolution, RejectsDimensionMismatch) {
  const UnitaryPropagator u(FockDim(10), {0, 1, 1});
  EXPECT_THROW(u.evolve(QuantumState::vacuum(FockDim(12)), 0.1), DimensionMismatch);
}

TEST(MinVariance, VacuumAndCoherent) {
  const FockDim d(60);
  EXPECT_NEAR(min_variance(QuantumState::vacuum(d)).v_min, 0.5, 1e-14);
  EXPECT_NEAR(min_variance(QuantumState::coherent(d, 0.7)).v_min, 0.5, 1e-9);
}

TEST(MinVariance, OptimalAngleAttainsMinimum) {
  const FockDim d(80);
  const QuantumState s = evolve_unitary(QuantumState::vacuum(d), {0.7, 2.0, 1.0}, 0.2);
  const MinVariance mv = min_variance(s);
  EXPECT_GT(mv.v_min, 0.0);
  EXPECT_GE(mv.theta_opt, 0.0);
  EXPECT_LT(mv.theta_opt, std::numbers::pi);
  EXPECT_NEAR(variance(s, quadrature(d, mv.theta_opt)), mv.v_min, 1e-10);
  for (int k = 0; k < 64; ++k) {
    const double th = std::numbers::pi * k / 64;
    EXPECT_LE(mv.v_min, variance(s, quadrature(d, th)) + 1e-12);
  }
}

TEST(MinVariance, InvariantUnderDisplacement) {
  const FockDim d(100);
  const QuantumState s = evolve_unitary(QuantumState::vacuum(d), {0, 2, 1}, 0.15);
  const QuantumState moved = transform(s, displacement(d, 0.4).matrix());
  EXPECT_LT(std::abs(min_variance(moved).v_min - min_variance(s).v_min), 1e-8);
}

TEST(SqueezingTrace, KerrProducesInteriorMinimum) {
  std::vector<double> times;
  for (int i = 0; i <= 60; ++i) times.push_back(0.5 * i / 60);
  const SqueezingTrace tr = squeezing_trace(FockDim(100), {0, 2, 1}, times);
  ASSERT_EQ(tr.v_min.size(), times.size());
  const auto it = std::min_element(tr.v_min.begin(), tr.v_min.end());
  EXPECT_GT(it - tr.v_min.begin(), 0);
  EXPECT_LT(it - tr.v_min.begin(), 60);
  for (double v : tr.v_min) EXPECT_GT(v, 0.0);
}

TEST(SqueezingTrace, RejectsDecreasingGrid) {
  const std::vector<double> times{0.0, 0.2, 0.1};
  EXPECT_THROW(squeezing_trace(FockDim(20), {0, 1, 1}, times), Error);
}

TEST(OptimalSqueezing, NoInteriorMinimumWithoutKerr) {
  for (double t_max : {0.05, 0.1}) {
    EXPECT_THROW(optimal_squeezing(FockDim(150), {0, 2, 0}, t_max),
                 NoInteriorMinimum);
  }
}

TEST(OptimalSqueezing, BeatsStandardLimitAndGrowsWithDrive) {
  const OptimalSqueezing two = optimal_squeezing(FockDim(120), {0, 2, 1}, 1.0);
  EXPECT_GT(two.chi2inv_opt, 2.0);
  EXPECT_GT(two.t_opt, 0.0);
  EXPECT_LT(two.t_opt, 1.0);
  EXPECT_NEAR(two.chi2inv_opt * two.v_min, 1.0, 1e-12);

  double previous = 0.0;
  for (double eps : {1.0, 2.0, 4.0}) {
    const double chi = optimal_squeezing(FockDim(160), {0, eps, 1}, 1.0).chi2inv_opt;
    EXPECT_GE(chi, previous);
    previous = chi;
  }
}
