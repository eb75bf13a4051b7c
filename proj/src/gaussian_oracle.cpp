#include "kerr/gaussian_oracle.hpp"

#include "kerr/errors.hpp"

#include <cmath>
#include <numbers>

namespace kerr::gaussian {

void validate(const GaussianState& g) {
  if (!(g.r >= 0.0)) throw Error("GaussianState: r must be >= 0");
  if (!(g.n_thermal >= 0.0)) throw Error("GaussianState: n_T must be >= 0");
}

namespace {
double thermal_factor(const GaussianState& g) { return 1.0 + 2.0 * g.n_thermal; }
}  // namespace

Eigen::Matrix2d covariance(const GaussianState& g) {
  validate(g);
  const double ch = std::cosh(2 * g.r);
  const double sh = std::sinh(2 * g.r);
  const double pre = thermal_factor(g) / 2;
  Eigen::Matrix2d m;
  m << ch - sh * std::cos(g.zeta), -sh * std::sin(g.zeta),
      -sh * std::sin(g.zeta), ch + sh * std::cos(g.zeta);
  return pre * m;
}

double purity(const GaussianState& g) {
  return 1.0 / (2.0 * std::sqrt(covariance(g).determinant()));
}

double qfi_displacement(const GaussianState& g, double phi) {
  validate(g);
  return 2.0 *
         (std::cosh(2 * g.r) - std::sinh(2 * g.r) * std::cos(g.zeta - 2 * phi)) /
         thermal_factor(g);
}

double qfi_max(const GaussianState& g) {
  validate(g);
  return 2.0 * std::exp(2 * g.r) / thermal_factor(g);
}

double qfi_max_angle(const GaussianState& g) {
  double phi = std::fmod(g.zeta / 2 - std::numbers::pi / 2, std::numbers::pi);
  if (phi < 0) phi += std::numbers::pi;
  return phi;
}

double chi_linear(const GaussianState& g, double theta, double phi) {
  validate(g);
  const double s = std::sin(theta - phi);
  return 2.0 * s * s /
         (thermal_factor(g) * (std::cosh(2 * g.r) -
                               std::cos(g.zeta - 2 * theta) * std::sinh(2 * g.r)));
}

double chi_linear_max(const GaussianState& g) {
  // Minimum variance at theta = zeta/2 with the generator orthogonal to it.
  const double theta = g.zeta / 2;
  return chi_linear(g, theta, theta + std::numbers::pi / 2);
}

double mai_gaussian(const GaussianState& g) {
  validate(g);
  // Undoing the squeezing leaves a thermal state and a signal amplified by
  // e^{r}.
  return 2.0 * std::exp(2 * g.r) / thermal_factor(g);
}

NoisySensitivities noisy(const GaussianState& g, double sigma2) {
  validate(g);
  if (!(sigma2 >= 0.0)) throw Error("noisy: sigma2 must be >= 0");
  const double half = thermal_factor(g) / 2;
  const double chi = 1.0 / (half * std::exp(-2 * g.r) + sigma2);
  const double chi_mai = std::exp(2 * g.r) / (half + sigma2);
  const double e2r = std::exp(2 * g.r);
  const double ratio = (thermal_factor(g) + 2 * e2r * sigma2) /
                       (thermal_factor(g) + 2 * sigma2);
  return {chi, chi_mai, ratio};
}

double qfi_vs_photon_number(double n) {
  if (!(n >= 0.0)) throw Error("qfi_vs_photon_number: N must be >= 0");
  return 2.0 * (1.0 + 2.0 * n + 2.0 * std::sqrt(n * (n + 1.0)));
}

GaussianState squeezed_vacuum_from_dynamics(double epsilon, double t) {
  GaussianState g;
  g.r = 2.0 * epsilon * t;
  g.zeta = std::numbers::pi / 2;
  if (g.r < 0) {
    g.r = -g.r;
    g.zeta = -std::numbers::pi / 2;
  }
  return g;
}

}  // namespace kerr::gaussian
