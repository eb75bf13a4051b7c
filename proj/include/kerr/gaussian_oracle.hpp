#pragma once

// Closed forms for single-mode displaced squeezed thermal states
//   rho = D(alpha) S(xi) rho_th S(xi)^dag D(alpha)^dag,
//   S(xi) = exp((xi* a^2 - xi a^dag^2) / 2),  xi = r e^{i zeta}.
// With Delta = K = 0 the Hamiltonian evolution of the vacuum is S(xi) with
// r = 2 eps t and zeta = pi/2.

#include <Eigen/Dense>

#include <complex>

namespace kerr::gaussian {

struct GaussianState {
  std::complex<double> alpha{0.0, 0.0};
  double r = 0.0;
  double zeta = 0.0;
  double n_thermal = 0.0;
};

/// Throws kerr::Error for r < 0 or n_thermal < 0.
void validate(const GaussianState& g);

/// Quadrature covariance of (X, P); det = ((1 + 2 n_T) / 2)^2.
Eigen::Matrix2d covariance(const GaussianState& g);
/// (2 sqrt(det Gamma))^-1.
double purity(const GaussianState& g);

/// QFI for the generator cos(phi) X + sin(phi) P.
double qfi_displacement(const GaussianState& g, double phi);
/// 2 e^{2r} / (1 + 2 n_T), reached at phi = zeta/2 - pi/2.
double qfi_max(const GaussianState& g);
double qfi_max_angle(const GaussianState& g);

/// Linear-measurement sensitivity for measurement angle theta and generator
/// angle phi.
double chi_linear(const GaussianState& g, double theta, double phi);
double chi_linear_max(const GaussianState& g);

/// MAI with the Gaussian (squeezing) reversal; equal to qfi_max.
double mai_gaussian(const GaussianState& g);

struct NoisySensitivities {
  double chi;
  double chi_mai;
  double ratio;  // chi_mai / chi
};
NoisySensitivities noisy(const GaussianState& g, double sigma2);

/// QFI of the ideal squeezed vacuum as a function of its mean photon number.
double qfi_vs_photon_number(double n);

/// Squeezed vacuum reached by the K = 0, Delta = 0 dynamics after time t.
GaussianState squeezed_vacuum_from_dynamics(double epsilon, double t);

}  // namespace kerr::gaussian
