#include "kerr/dynamics.hpp"
#include "kerr/errors.hpp"
#include "kerr/gaussian_oracle.hpp"
#include "kerr/metrology.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace kerr;
using gaussian::GaussianState;
using testing_support::rel_diff;

namespace {

constexpr double kPi = std::numbers::pi;

// D(alpha) S(xi) rho_th S(xi)^dag D(alpha)^dag built with dense exponentials
// in a padded space and cut back to `dim`.
QuantumState numeric_gaussian(const GaussianState& g, int dim) {
  const int w = dim + 40;
  const CMatrix a = oracle::lowering(w);
  const CMatrix ad = a.adjoint();
  const cplx xi = std::polar(g.r, g.zeta);
  const CMatrix s = ((std::conj(xi) * a * a - xi * ad * ad) / 2.0).exp();
  const CMatrix d = (g.alpha * ad - std::conj(g.alpha) * a).exp();
  CMatrix th = CMatrix::Zero(w, w);
  const double q = g.n_thermal / (1 + g.n_thermal);
  for (int n = 0; n < w; ++n) th(n, n) = std::pow(q, n) / (1 + g.n_thermal);
  CMatrix rho = (d * s * th * s.adjoint() * d.adjoint()).topLeftCorner(dim, dim);
  rho /= rho.trace();
  return QuantumState::mixed((rho + rho.adjoint()) / 2.0);
}

}  // namespace

TEST(GaussianOracle, CovarianceExamples) {
  const Eigen::Matrix2d vac = gaussian::covariance({});
  EXPECT_NEAR((vac - 0.5 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 0.0,
              1e-15);
  GaussianState g;
  g.r = 1.0;
  const Eigen::Matrix2d c = gaussian::covariance(g);
  EXPECT_NEAR(c(0, 0), std::exp(-2.0) / 2, 1e-14);
  EXPECT_NEAR(c(1, 1), std::exp(2.0) / 2, 1e-14);
  EXPECT_NEAR(c(0, 1), 0.0, 1e-14);
  g.n_thermal = 1.0;
  for (double r : {0.0, 0.4, 1.3}) {
    for (double zeta : {0.0, 1.0, 2.7}) {
      g.r = r;
      g.zeta = zeta;
      EXPECT_NEAR(gaussian::covariance(g).determinant(), 9.0 / 4.0, 1e-12);
    }
  }
}

TEST(GaussianOracle, PurityRange) {
  EXPECT_NEAR(gaussian::purity({}), 1.0, 1e-15);
  GaussianState g;
  g.n_thermal = 1.0;
  g.r = 0.7;
  EXPECT_NEAR(gaussian::purity(g), 1.0 / 3.0, 1e-12);
}

TEST(GaussianOracle, ValidationRejectsNegativeParameters) {
  GaussianState g;
  g.r = -0.1;
  EXPECT_THROW(gaussian::validate(g), Error);
  g.r = 0.1;
  g.n_thermal = -1;
  EXPECT_THROW(gaussian::validate(g), Error);
  EXPECT_THROW(gaussian::noisy({}, -0.5), Error);
  EXPECT_THROW(gaussian::qfi_vs_photon_number(-1.0), Error);
}

TEST(GaussianOracle, QfiExamples) {
  for (double phi : {0.0, 0.9, 2.2}) {
    EXPECT_NEAR(gaussian::qfi_displacement({}, phi), 2.0, 1e-14);
  }
  GaussianState g;
  g.r = 1.0;
  EXPECT_NEAR(gaussian::qfi_max(g), 2 * std::exp(2.0), 1e-12);
  EXPECT_NEAR(gaussian::qfi_max(g), 14.778, 1e-3);
  GaussianState t;
  t.n_thermal = 1.0;
  EXPECT_NEAR(gaussian::qfi_max(t), 2.0 / 3.0, 1e-14);
}

TEST(GaussianOracle, QfiMaximumDominatesProbes) {
  GaussianState g;
  g.r = 0.6;
  g.zeta = 1.1;
  g.n_thermal = 0.3;
  const double best = gaussian::qfi_max(g);
  EXPECT_NEAR(gaussian::qfi_displacement(g, gaussian::qfi_max_angle(g)), best, 1e-12);
  for (int k = 0; k < 64; ++k) {
    EXPECT_LE(gaussian::qfi_displacement(g, kPi * k / 64), best + 1e-12);
  }
}

TEST(GaussianOracle, LinearMeasurementExamples) {
  GaussianState g;
  g.r = 0.5;
  EXPECT_NEAR(gaussian::chi_linear(g, 0.4, 0.4), 0.0, 1e-15);
  EXPECT_NEAR(gaussian::chi_linear_max(g), 2 * std::exp(1.0), 1e-12);
}

TEST(GaussianOracle, LinearMeasurementsAreOptimal) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> r(0, 1.5), zeta(0, 2 * kPi), nt(0, 2);
  for (int i = 0; i < 50; ++i) {
    GaussianState g;
    g.r = r(rng);
    g.zeta = zeta(rng);
    g.n_thermal = nt(rng);
    EXPECT_NEAR(gaussian::chi_linear_max(g), gaussian::qfi_max(g),
                1e-12 * gaussian::qfi_max(g));
    // The closed-form maximum is not beaten by a direct angle scan.
    double scan = 0.0;
    for (int a = 0; a < 48; ++a)
      for (int b = 0; b < 48; ++b)
        scan = std::max(scan, gaussian::chi_linear(g, kPi * a / 48, kPi * b / 48));
    EXPECT_LE(scan, gaussian::qfi_max(g) * (1 + 1e-12));
  }
}

TEST(GaussianOracle, NoisyRatios) {
  GaussianState g;
  g.r = 0.5;
  EXPECT_NEAR(gaussian::noisy(g, 0.0).ratio, 1.0, 1e-14);
  EXPECT_NEAR(gaussian::noisy(g, 1.0).ratio, (1 + 2 * std::exp(1.0)) / 3.0, 1e-12);
  g.r = 1.0;
  EXPECT_LE(rel_diff(gaussian::noisy(g, 1e6).ratio, std::exp(2.0)), 1e-4);
  EXPECT_NEAR(gaussian::noisy({}, 3.0).ratio, 1.0, 1e-14);
  for (double s2 : {0.1, 1.0, 10.0}) {
    GaussianState h;
    h.r = 0.3;
    h.n_thermal = 0.4;
    const auto n = gaussian::noisy(h, s2);
    EXPECT_GT(n.ratio, 1.0);
    EXPECT_NEAR(n.ratio, n.chi_mai / n.chi, 1e-14);
    EXPECT_NEAR(n.ratio, (1 + 0.8 + 2 * std::exp(0.6) * s2) / (1 + 0.8 + 2 * s2), 1e-12);
  }
  EXPECT_NEAR(gaussian::mai_gaussian(g), gaussian::qfi_max(g), 1e-12);
}

TEST(GaussianOracle, PhotonNumberScaling) {
  EXPECT_NEAR(gaussian::qfi_vs_photon_number(0.0), 2.0, 1e-15);
  const double n = std::pow(std::sinh(1.0), 2);
  EXPECT_NEAR(gaussian::qfi_vs_photon_number(n), 2 * std::exp(2.0), 1e-12);
  EXPECT_LE(rel_diff(gaussian::qfi_vs_photon_number(100.0), 804.0), 0.01);
  // The linear asymptote is approached from below.
  for (double x : {0.5, 3.0, 40.0}) {
    EXPECT_LE(gaussian::qfi_vs_photon_number(x), 4 + 8 * x);
  }
  EXPECT_GT(gaussian::qfi_vs_photon_number(1e4) / (4 + 8e4), 1 - 1e-8);
}

TEST(GaussianOracle, DynamicsMapsOntoSqueezingConvention) {
  const GaussianState g = gaussian::squeezed_vacuum_from_dynamics(2.0, 0.1);
  EXPECT_NEAR(g.r, 0.4, 1e-15);
  EXPECT_NEAR(g.zeta, kPi / 2, 1e-15);
  const int d = 120;
  const QuantumState evolved =
      evolve_unitary(QuantumState::vacuum(FockDim(d)), {0, 2.0, 0}, 0.1);
  const QuantumState analytic = QuantumState::pure(oracle::squeezed_vacuum(d, g.r, g.zeta));
  EXPECT_GE(fidelity(evolved, analytic), 1 - 1e-10);
  EXPECT_LT((quadrature_covariance(evolved) - gaussian::covariance(g)).cwiseAbs().maxCoeff(),
            1e-10);
}

TEST(GaussianOracle, MatchesNumericalGaussianStates) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> r(0, 0.8), zeta(0, 2 * kPi), nt(0, 0.6),
      re(-0.6, 0.6);
  for (int i = 0; i < 6; ++i) {
    GaussianState g;
    g.r = r(rng);
    g.zeta = zeta(rng);
    g.n_thermal = nt(rng);
    g.alpha = cplx(re(rng), re(rng));
    const QuantumState s = numeric_gaussian(g, 70);
    EXPECT_LT((quadrature_covariance(s) - gaussian::covariance(g)).cwiseAbs().maxCoeff(),
              1e-8);
    EXPECT_NEAR(s.purity(), gaussian::purity(g), 1e-8);
    EXPECT_LE(rel_diff(qfi_mixed(s).value, gaussian::qfi_max(g)), 1e-6);
    EXPECT_LT(std::abs(std::remainder(qfi_mixed(s).phi_opt - gaussian::qfi_max_angle(g), kPi)),
              1e-5);
    for (double phi : {0.3, 1.7}) {
      EXPECT_LE(rel_diff(qfi_direction(s, phi), gaussian::qfi_displacement(g, phi)), 1e-6);
      for (double theta : {0.1, 2.5}) {
        const FockDim dim(70);
        EXPECT_LE(rel_diff(sensitivity(s, quadrature(dim, phi), quadrature(dim, theta)),
                           gaussian::chi_linear(g, theta, phi)),
                  1e-6);
      }
    }
  }
}

TEST(GaussianOracle, ThermalDensityMatrix) {
  const QuantumState th = QuantumState::thermal(FockDim(80), 0.5);
  GaussianState g;
  g.n_thermal = 0.5;
  EXPECT_LE(rel_diff(qfi_mixed(th).value, gaussian::qfi_max(g)), 1e-6);
}

TEST(GaussianOracle, NumericsForIdealSqueezing) {
  for (double r : {0.2, 0.5, 1.0}) {
    const double eps = 2.0;
    const double t = r / (2 * eps);
    MaiPreparation prep{{0, eps, 0}, t, {0.0}, FockDim(200), std::nullopt};
    const QuantumState s = prepare_state(prep);
    const double expected =
        gaussian::qfi_max(gaussian::squeezed_vacuum_from_dynamics(eps, t));
    EXPECT_LE(rel_diff(qfi_mixed(s).value, expected), 1e-5);
    EXPECT_LE(rel_diff(linear_sensitivity(s).value, expected), 1e-5);
    EXPECT_LE(rel_diff(mai_sensitivity(prep).value, expected), 1e-5);
  }
}
