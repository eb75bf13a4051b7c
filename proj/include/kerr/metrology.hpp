#pragma once

// Displacement-sensing figures of merit.
//
// Generators G(phi) = cos(phi) X + sin(phi) P displace the state along
// phi + pi/2; measurements M(theta) are quadratures. The sensitivity of a
// measurement M to the parameter d in rho_d = exp(-i d G) rho exp(i d G) is
//
//   chi^-2[rho, G, M] = |<[G, M]>|^2 / Var[M]
//
// and is bounded by the quantum Fisher information F_Q[rho, G].

#include "kerr/dynamics.hpp"
#include "kerr/fock.hpp"
#include "kerr/lindblad.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kerr {

/// Additive Gaussian readout noise of variance sigma2.
struct DetectionNoise {
  double sigma2 = 0.0;
};

struct SensitivityReport {
  double value = 0.0;
  double phi_opt = 0.0;                // generator direction, in [0, pi)
  std::optional<double> theta_opt;     // measurement angle for 2-element bases
  RVector m_opt;                       // measurement coefficients (unit norm)
  Eigen::Vector2d n_opt = Eigen::Vector2d::Zero();
  bool reliable = true;
  std::string note;
};

/// Ordered vector of Hermitian measurement operators up to a given order:
///   k=1: X, P
///   k=2: + X^2, P^2, (XP + PX)/2
///   k=3: + X^3, P^3, (XPP + PXP + PPX)/3, (PXX + XPX + XXP)/3
struct MomentBasis {
  int order = 1;
  std::vector<Operator> ops;

  static MomentBasis build(FockDim dim, int order);
  std::size_t size() const noexcept { return ops.size(); }
};

inline constexpr double kDegenerateVariance = 1e-14;
inline constexpr double kPinvCutoff = 1e-10;
inline constexpr double kQfiCutoff = 1e-12;
inline constexpr double kSignalFloor = 1e-8;

/// chi^-2 for one generator / measurement pair. Throws
/// DegenerateMeasurement when Var[M] <= 1e-14.
double sensitivity(const QuantumState& state, const Operator& g,
                   const Operator& m);

/// max over phi, theta of chi^-2 with quadrature generator and measurement:
/// 1 / V_min. phi_opt = theta_opt + pi/2 (mod pi).
SensitivityReport linear_sensitivity(const QuantumState& state);
/// As linear_sensitivity with Var + sigma2 in the denominator.
SensitivityReport noisy_linear_sensitivity(const QuantumState& state,
                                           DetectionNoise noise);

/// 4 Var[G] for a pure state.
double qfi_pure(const QuantumState& state, const Operator& g);
/// Maximum QFI over displacement directions from the spectral formula
///   [F]_ij = 2 sum_{k,l: l_k + l_l > cutoff} (l_k - l_l)^2 / (l_k + l_l)
///            Re(<k|G_i|l><l|G_j|k>),   G = (X, P)
/// F_Q = lambda_max(F), n_opt its eigenvector. Works for pure inputs too.
SensitivityReport qfi_mixed(const QuantumState& state);
/// The 2x2 matrix F above.
Eigen::Matrix2d qfi_matrix(const QuantumState& state);
/// F_Q for G(phi), pure or mixed.
double qfi_direction(const QuantumState& state, double phi);

/// C_ij = -i <[G_i, M_j]>, real for Hermitian operands.
RMatrix commutator_matrix(const QuantumState& state,
                          std::span<const Operator> generators,
                          std::span<const Operator> measurements);
/// Gamma_ij = Cov[M_i, M_j] (symmetrized).
RMatrix covariance_matrix(const QuantumState& state,
                          std::span<const Operator> measurements);

/// Top eigenvalue of C Gamma^+ C^T and the optimal vectors
/// n_opt (eigenvector) and m_opt ~ Gamma^+ C^T n_opt. Gamma is inverted
/// with a relative singular-value cutoff of 1e-10.
SensitivityReport moment_matrix_optimum(const RMatrix& c, const RMatrix& gamma);

/// Nonlinear squeezing chi^-2_(k) over the order-k basis. The state is
/// padded by 2k+1 levels so every product in C and Gamma is exact on its
/// support.
SensitivityReport moment_sensitivity(const QuantumState& state, int order);
/// Same for a caller-supplied basis (no padding).
SensitivityReport moment_sensitivity(const QuantumState& state,
                                     const MomentBasis& basis);

// ---- measurement after interaction ----------------------------------------------

enum class MaiRoute {
  Auto,              // operator form for lossless pure states, tangent otherwise
  Operator,          // M_MAI = U M U^dag evaluated directly (pure, gamma = 0)
  Tangent,           // d rho/dd = -i[G, rho] propagated through the reversal
  FiniteDifference,  // central difference in d with step halving
  Heisenberg,        // readout operators evolved backwards once per series
};

struct MaiOptions {
  MaiRoute route = MaiRoute::Auto;
  double delta_d = 1e-4;
  double richardson_tol = 1e-5;
  int max_halvings = 4;
  LindbladOptions lindblad;
};

struct MaiPreparation {
  HamiltonianParams hamiltonian;
  double t = 0.0;
  LossParams loss;
  FockDim dim{80};
  /// Duration of the reversed evolution; defaults to t.
  std::optional<double> reversal_t;
};

/// Signal/noise data of a MAI readout: C_ij = -i<[G_i, M_MAI_j]> and the
/// covariance of (X, P) after the reversed evolution.
struct MaiMoments {
  Eigen::Matrix2d c = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d gamma = Eigen::Matrix2d::Zero();
  bool reliable = true;
  std::string note;
};

/// chi^-2 for G(phi), M_MAI(theta) from precomputed moments.
double mai_value_at(const MaiMoments& m, double phi, double theta,
                    DetectionNoise noise = {});
/// 72 x 72 grid over (phi, theta) followed by local quadratic refinement.
SensitivityReport mai_grid_search(const MaiMoments& m, DetectionNoise noise = {},
                                  int grid = 72);
/// Closed-form optimum: lambda_max(C (Gamma + sigma2 I)^-1 C^T).
SensitivityReport mai_optimum(const MaiMoments& m, DetectionNoise noise = {});

/// Reuses propagators across many prepared states with the same dynamics.
class MaiEvaluator {
 public:
  MaiEvaluator(FockDim dim, const HamiltonianParams& p, const LossParams& loss,
               MaiOptions options = {});

  /// Moments for a prepared state followed by a reversed evolution of
  /// duration reversal_t.
  MaiMoments moments(const QuantumState& prepared, double reversal_t) const;
  /// Evolves the batch through the reversed dynamics, in place.
  void reverse(std::vector<CMatrix>& batch, double reversal_t) const;
  MaiMoments moments_operator_form(const QuantumState& prepared,
                                   double reversal_t) const;
  MaiMoments moments_tangent(const QuantumState& prepared,
                             double reversal_t) const;
  MaiMoments moments_finite_difference(const QuantumState& prepared,
                                       double reversal_t) const;

  /// Moments for many prepared states at once; reversal_ts[k] belongs to
  /// prepared[k] and must be non-decreasing. On the Heisenberg route the
  /// readout operators are evolved once and shared; that pays off only for
  /// small dimensions, since the operators fill the whole truncated space
  /// while states stay inside the integrator's active window.
  std::vector<MaiMoments> moments_series(
      std::span<const QuantumState> prepared,
      std::span<const double> reversal_ts) const;

  SensitivityReport evaluate(const QuantumState& prepared, double reversal_t,
                             DetectionNoise noise = {}) const;

 private:
  FockDim dim_;
  HamiltonianParams params_;
  LossParams loss_;
  MaiOptions options_;
  UnitaryPropagator unitary_;
  CMatrix x_, p_;
};

/// Prepares exp(-iHt)|0> (or its Lindblad counterpart when gamma > 0) and
/// evaluates chi^-2_MAI.
SensitivityReport mai_sensitivity(const MaiPreparation& prep,
                                  DetectionNoise noise = {},
                                  MaiOptions options = {});

/// Prepared state of a MAI run: unitary for gamma = 0, Lindblad otherwise.
QuantumState prepare_state(const MaiPreparation& prep);

}  // namespace kerr
