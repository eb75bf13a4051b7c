#pragma once

// Wigner function in quadrature coordinates, alpha = (x + i p) / sqrt(2):
//
//   W(x, p) = (1/pi) Tr[D(alpha)^dag rho D(alpha) Pi],   Pi = (-1)^n
//
// normalized so that the integral over dx dp is 1 and W_vac(0, 0) = 1/pi.

#include "kerr/fock.hpp"

namespace kerr {

struct PhaseGrid {
  double x_min = -5.0;
  double x_max = 5.0;
  double p_min = -5.0;
  double p_max = 5.0;
  int nx = 201;
  int np = 201;

  /// Throws kerr::Error unless min < max and nx, np >= 8.
  void validate() const;
  double x(int i) const { return x_min + (x_max - x_min) * i / (nx - 1); }
  double p(int j) const { return p_min + (p_max - p_min) * j / (np - 1); }
  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dp() const { return (p_max - p_min) / (np - 1); }
};

struct WignerGrid {
  PhaseGrid grid;
  /// nx x np; w(i, j) = W(x_i, p_j). Serialized row by row in x.
  RMatrix w;

  /// Riemann sum of W dx dp.
  double integral() const;
  /// Integral over p for each x_i.
  RVector x_marginal() const;
  double min() const { return w.minCoeff(); }
};

/// Fast evaluation on a grid. Warns when |W| on the grid boundary exceeds
/// 1e-4 (the grid does not cover the state).
WignerGrid wigner(const QuantumState& state, const PhaseGrid& grid);

/// Single point from an explicit displacement; slow, used as a reference.
double wigner_at(const QuantumState& state, double x, double p);

}  // namespace kerr
