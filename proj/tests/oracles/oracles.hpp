#pragma once

// Reference computations used only by the tests. Each one is written
// against first principles (explicit matrices, special functions, naive
// integrators) rather than the library's own fast paths.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline CMat lowering(int d) {
  CMat a = CMat::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

// H built from products of ladder matrices in a padded space, then cut
// back, so that a^dag^2 a^2 and a^2 are exact on the kept levels.
inline CMat hamiltonian(int d, double delta, double eps, double kerr) {
  const int w = d + 4;
  const CMat a = lowering(w);
  const CMat ad = a.adjoint();
  const CMat h = delta * ad * a + eps * (ad * ad + a * a) - kerr * ad * ad * a * a;
  return h.topLeftCorner(d, d);
}

inline CMat x_op(int d) {
  const CMat a = lowering(d);
  return (a + a.adjoint()) / std::sqrt(2.0);
}

inline CMat p_op(int d) {
  const CMat a = lowering(d);
  return cplx(0, -1) * (a - a.adjoint()) / std::sqrt(2.0);
}

// Harmonic-oscillator eigenfunctions psi_n(x), n < count, by the
// normalized Hermite recurrence.
inline std::vector<double> hermite_functions(int count, double x) {
  std::vector<double> psi(count);
  psi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-x * x / 2);
  if (count > 1) psi[1] = std::sqrt(2.0) * x * psi[0];
  for (int n = 1; n + 1 < count; ++n) {
    psi[n + 1] = std::sqrt(2.0 / (n + 1)) * x * psi[n] -
                 std::sqrt(double(n) / (n + 1)) * psi[n - 1];
  }
  return psi;
}

// <x|rho|x> in the X = (a + a^dag)/sqrt2 representation.
inline double x_distribution(const CMat& rho, double x) {
  const auto psi = hermite_functions(static_cast<int>(rho.rows()), x);
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(psi.data(), psi.size());
  return (v.transpose().cast<cplx>() * rho * v.cast<cplx>())(0, 0).real();
}

// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2 via eigendecompositions.
// Eigenvalues below 1e-13 are set to zero so that round-off in the kernel
// of rank-deficient states does not leak into the square roots.
inline Eigen::VectorXd clipped_sqrt(const Eigen::VectorXd& ev) {
  return ev.unaryExpr([](double v) { return v > 1e-13 ? std::sqrt(v) : 0.0; });
}

inline double fidelity(const CMat& a, const CMat& b) {
  Eigen::SelfAdjointEigenSolver<CMat> ea((a + a.adjoint()) / 2.0);
  const Eigen::VectorXd la = clipped_sqrt(ea.eigenvalues());
  const CMat sa = ea.eigenvectors() * la.cast<cplx>().asDiagonal() *
                  ea.eigenvectors().adjoint();
  const CMat inner = sa * b * sa;
  Eigen::SelfAdjointEigenSolver<CMat> ei((inner + inner.adjoint()) / 2.0);
  const double tr = clipped_sqrt(ei.eigenvalues()).sum();
  return tr * tr;
}

// QFI from the Bures metric: F = 8 (1 - sqrt(fidelity(rho, rho_d))) / d^2
// with rho_d = exp(-i d G) rho exp(i d G). rho is embedded with `pad` spare
// levels before G is applied.
inline double qfi_from_fidelity(const CMat& rho, double phi, double step,
                                int pad = 12) {
  const int d = static_cast<int>(rho.rows()) + pad;
  CMat big = CMat::Zero(d, d);
  big.topLeftCorner(rho.rows(), rho.cols()) = rho;
  const CMat g = std::cos(phi) * x_op(d) + std::sin(phi) * p_op(d);
  const CMat u = (cplx(0, -step) * g).exp();
  const CMat moved = u * big * u.adjoint();
  return 8.0 * (1.0 - std::sqrt(fidelity(big, moved))) / (step * step);
}

// Plain Lindblad right-hand side with explicit matrices.
inline CMat lindblad_rhs(const CMat& h, const CMat& a, double gamma, double sign,
                         const CMat& rho) {
  const cplx i(0, 1);
  const CMat n = a.adjoint() * a;
  return -i * sign * (h * rho - rho * h) +
         gamma * (a * rho * a.adjoint() - 0.5 * (n * rho + rho * n));
}

// Fixed-step classical RK4.
inline CMat lindblad_rk4(const CMat& h, double gamma, double sign, CMat rho,
                         double t, int steps) {
  const CMat a = lowering(static_cast<int>(h.rows()));
  const double dt = t / steps;
  for (int s = 0; s < steps; ++s) {
    const CMat k1 = lindblad_rhs(h, a, gamma, sign, rho);
    const CMat k2 = lindblad_rhs(h, a, gamma, sign, rho + 0.5 * dt * k1);
    const CMat k3 = lindblad_rhs(h, a, gamma, sign, rho + 0.5 * dt * k2);
    const CMat k4 = lindblad_rhs(h, a, gamma, sign, rho + dt * k3);
    rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

// Squeezed vacuum amplitudes S(xi)|0> with xi = r e^{i zeta}:
// c_2m = (-e^{i zeta} tanh r)^m sqrt((2m)!) / (2^m m! sqrt(cosh r)).
inline CVec squeezed_vacuum(int d, double r, double zeta) {
  CVec c = CVec::Zero(d);
  const cplx z = -std::polar(std::tanh(r), zeta);
  cplx term = 1.0 / std::sqrt(std::cosh(r));
  for (int m = 0; 2 * m < d; ++m) {
    c(2 * m) = term;
    // ratio c_{2m+2}/c_{2m} = z sqrt((2m+1)(2m+2)) / (2(m+1))
    term *= z * std::sqrt((2.0 * m + 1) * (2.0 * m + 2)) / (2.0 * (m + 1));
  }
  return c;
}

}  // namespace oracle
