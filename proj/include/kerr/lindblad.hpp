#pragma once

// Lindblad propagation for the squeezed Kerr oscillator with jump operator
// sqrt(gamma) a:
//
//   d rho/dt = -i s [H, rho] + gamma (a rho a^dag - {a^dag a, rho} / 2)
//
// with s = +1 (Forward) or -1 (Reversed). The map is linear, so the
// propagator acts on arbitrary matrices (density matrices as well as the
// traceless signal operators used for derivatives).

#include "kerr/dynamics.hpp"
#include "kerr/fock.hpp"

#include <span>
#include <vector>

namespace kerr {

struct LindbladOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double initial_step = 1e-3;
  double min_step = 1e-13;
  /// Dense Liouvillian exponential below this dimension; the
  /// dim^2 x dim^2 generator is built explicitly, so keep it small.
  int liouvillian_max_dim = 16;
  long max_steps = 5'000'000;
  /// The integrator steps only the leading block that holds every entry
  /// above window_tail times the matrix's largest entry (plus a margin that
  /// grows as needed); 0 steps the full matrix.
  double window_tail = 1e-18;
};

/// Schrodinger evolves states; Heisenberg applies the adjoint map to
/// observables, so that Tr[A rho(t)] = Tr[A(t) rho(0)].
enum class Picture { Schrodinger, Heisenberg };

class LindbladPropagator {
 public:
  LindbladPropagator(FockDim dim, const HamiltonianParams& p,
                     const LossParams& loss, Direction direction,
                     LindbladOptions options = {},
                     Picture picture = Picture::Schrodinger);

  FockDim dim() const noexcept { return dim_; }
  bool uses_liouvillian() const noexcept;

  /// Evolves every matrix in `batch` by time t >= 0, in place. Returns the
  /// number of accepted Runge-Kutta steps (0 on the Liouvillian route).
  long evolve(std::span<CMatrix> batch, double t) const;
  CMatrix evolve(const CMatrix& m, double t) const;

  /// Density matrices at each of the increasing checkpoint times.
  std::vector<CMatrix> trajectory(const CMatrix& rho0,
                                  std::span<const double> times) const;
  /// Same for a batch; result[k] holds the batch at times[k].
  std::vector<std::vector<CMatrix>> trajectory(
      std::vector<CMatrix> batch, std::span<const double> times) const;

  /// Right-hand side L(m) (or its adjoint in the Heisenberg picture).
  CMatrix generator(const CMatrix& m) const;
  /// Dense generator acting on column-major vec(m).
  CMatrix liouvillian() const;

 private:
  // Integrates from t0 to t1 carrying the step size between calls.
  long integrate(std::span<CMatrix> batch, double t0, double t1,
                 double& h) const;
  // Coupling part: everything except the diagonal of H.
  void coupling(const CMatrix& m, CMatrix& out) const;

  FockDim dim_;
  double sign_;
  double gamma_;
  bool heisenberg_;
  LindbladOptions opt_;
  RVector diag_energy_;   // s * H_nn
  RVector pair_coupling_; // s * eps sqrt((n+1)(n+2)), n = 0..dim-3
  RVector sqrt_n1_;       // sqrt(n+1), n = 0..dim-2
  RVector number_;        // n
};

}  // namespace kerr
