#pragma once

// Squeezed Kerr oscillator: H = Delta a^dag a + eps (a^dag^2 + a^2)
//                               - K a^dag^2 a^2   (hbar = 1)
// Unitary propagation, squeezing analysis and lossy evolution entry points.

#include "kerr/fock.hpp"

#include <span>
#include <vector>

namespace kerr {

struct HamiltonianParams {
  double delta = 0.0;
  double epsilon = 0.0;
  double kerr = 0.0;

  friend bool operator==(const HamiltonianParams&,
                         const HamiltonianParams&) = default;
};

/// Energy relaxation with jump operator sqrt(gamma) a.
struct LossParams {
  double gamma = 0.0;
};

/// Forward evolves with H; Reversed evolves with -H under the same
/// dissipator.
enum class Direction { Forward, Reversed };

/// Tail population above which propagation aborts instead of warning.
inline constexpr double kTruncationHardLimit = 1e-3;

Operator hamiltonian(FockDim dim, const HamiltonianParams& p);

/// exp(-i H t) for a fixed truncated H, from one Hermitian
/// eigendecomposition. Negative t runs the evolution backwards.
class UnitaryPropagator {
 public:
  UnitaryPropagator(FockDim dim, const HamiltonianParams& p);

  FockDim dim() const noexcept { return dim_; }
  CMatrix unitary(double t) const;
  /// Evolved state; warns above the tail threshold and throws
  /// TruncationError above kTruncationHardLimit.
  QuantumState evolve(const QuantumState& state, double t) const;
  CVector evolve_ket(const CVector& ket, double t) const;

 private:
  FockDim dim_;
  RVector energies_;
  CMatrix vectors_;
};

QuantumState evolve_unitary(const QuantumState& state,
                            const HamiltonianParams& p, double t);

/// Lindblad evolution of a density matrix (see lindblad.hpp for the
/// propagator used underneath). t must be non-negative.
QuantumState evolve_lindblad(const QuantumState& state,
                             const HamiltonianParams& p, const LossParams& loss,
                             double t, Direction direction = Direction::Forward);

/// Tail policy shared by all propagators: warn above `threshold`, throw
/// above kTruncationHardLimit.
void enforce_truncation(const QuantumState& state, const char* where,
                        double threshold = kDefaultTailThreshold);

// ---- squeezing ----------------------------------------------------------------

struct MinVariance {
  double v_min = 0.0;
  double theta_opt = 0.0;  // in [0, pi)
};

/// min over theta of Var[M(theta)], from the 2x2 quadrature covariance.
MinVariance min_variance(const QuantumState& state);

struct SqueezingTrace {
  std::vector<double> times;
  std::vector<double> v_min;
  std::vector<double> theta_opt;
};

/// V_min(t) of exp(-iHt)|0> on an increasing time grid.
SqueezingTrace squeezing_trace(FockDim dim, const HamiltonianParams& p,
                               std::span<const double> times);

struct OptimalSqueezing {
  double chi2inv_opt = 0.0;  // 1 / V_min(t_opt)
  double t_opt = 0.0;
  double v_min = 0.0;
};

/// Locates the smallest V_min on [0, t_max] by a grid scan refined with
/// golden-section search (relative tolerance `refinement_tol` in t). Throws
/// NoInteriorMinimum when the scan is monotone (e.g. K = 0).
OptimalSqueezing optimal_squeezing(FockDim dim, const HamiltonianParams& p,
                                   double t_max, double refinement_tol = 1e-4,
                                   int grid_points = 201);

}  // namespace kerr
