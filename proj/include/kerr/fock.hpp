#pragma once

// Truncated Fock-space algebra: ladder, quadrature and displacement
// operators, the state container, and expectation-value primitives.

#include <Eigen/Dense>

#include <complex>
#include <compare>

namespace kerr {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kNormTol = 1e-9;
inline constexpr double kPositivityTol = 1e-9;
inline constexpr double kDefaultTailThreshold = 1e-8;
inline constexpr double kTailFraction = 0.05;

/// Number of retained Fock levels |0>..|dim-1>. Always at least 2.
class FockDim {
 public:
  explicit FockDim(int levels);

  int value() const noexcept { return levels_; }
  Eigen::Index index() const noexcept { return levels_; }

  friend auto operator<=>(const FockDim&, const FockDim&) = default;

 private:
  int levels_;
};

/// Dense operator on a truncated Fock space.
class Operator {
 public:
  Operator(FockDim dim, CMatrix entries);

  FockDim dim() const noexcept { return dim_; }
  const CMatrix& matrix() const noexcept { return m_; }

  /// max |A - A^dagger| over all entries.
  double hermiticity_defect() const;
  bool is_hermitian(double tol = kHermitianTol) const;

  Operator adjoint() const;

  Operator& operator+=(const Operator& other);
  Operator& operator-=(const Operator& other);
  Operator& operator*=(cplx c);

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(Operator a, cplx c) { return a *= c; }
  friend Operator operator*(cplx c, Operator a) { return a *= c; }
  friend Operator operator*(const Operator& a, const Operator& b);

 private:
  FockDim dim_;
  CMatrix m_;
};

/// Report of the population held by the top 5% of Fock levels (at least
/// two levels).
struct TruncationReport {
  double tail = 0.0;
  int first_tail_level = 0;
  bool ok = true;
};

/// Pure ket or density matrix with validated invariants.
class QuantumState {
 public:
  enum class Kind { Pure, Mixed };

  /// Normalized ket; throws InvalidState if | ||psi|| - 1 | > 1e-9.
  static QuantumState pure(CVector ket);
  /// Density matrix; checks unit trace, Hermiticity and positivity.
  static QuantumState mixed(CMatrix rho);

  static QuantumState vacuum(FockDim dim);
  static QuantumState fock(FockDim dim, int n);
  static QuantumState coherent(FockDim dim, cplx alpha);
  /// Boltzmann-weighted diagonal state with mean occupation n_T, normalized
  /// on the truncated space.
  static QuantumState thermal(FockDim dim, double n_thermal);

  Kind kind() const noexcept { return kind_; }
  bool is_pure() const noexcept { return kind_ == Kind::Pure; }
  FockDim dim() const noexcept { return dim_; }

  /// Ket of a pure state; throws InvalidState for mixed states.
  const CVector& ket() const;
  /// Density matrix (computed as |psi><psi| for pure states).
  CMatrix density() const;

  /// Populations <n|rho|n>.
  RVector populations() const;
  TruncationReport check_truncation(
      double threshold = kDefaultTailThreshold) const;

  double purity() const;

 private:
  QuantumState(Kind kind, FockDim dim, CVector ket, CMatrix rho);

  Kind kind_;
  FockDim dim_;
  CVector ket_;
  CMatrix rho_;
};

// ---- operators -----------------------------------------------------------

Operator identity(FockDim dim);
/// a|n> = sqrt(n)|n-1>.
Operator annihilation(FockDim dim);
Operator creation(FockDim dim);
Operator number(FockDim dim);
/// M(theta) = (a e^{-i theta} + a^dagger e^{i theta}) / sqrt(2).
Operator quadrature(FockDim dim, double theta);
Operator x_quadrature(FockDim dim);
Operator p_quadrature(FockDim dim);
/// (-1)^n on the diagonal.
Operator parity(FockDim dim);
/// exp(-i phi a^dagger a).
Operator rotation(FockDim dim, double phi);
/// D(alpha) = exp(alpha a^dagger - alpha^* a). Warns when |alpha|^2 > dim/10.
Operator displacement(FockDim dim, cplx alpha);

/// Matrix exponential (scaling and squaring with a degree-13 Pade
/// approximant).
CMatrix expm(const CMatrix& a);

// ---- state utilities -----------------------------------------------------

/// Zero-pads a state into a larger truncation.
QuantumState embed(const QuantumState& state, FockDim larger);
/// Applies an operator as a unitary map: U|psi> or U rho U^dagger. The
/// result is validated, so U must be unitary on the state's support.
QuantumState transform(const QuantumState& state, const CMatrix& u);
/// |<psi|phi>|^2 for pure states, Uhlmann fidelity otherwise.
double fidelity(const QuantumState& a, const QuantumState& b);

// ---- moments ---------------------------------------------------------------

cplx expectation(const QuantumState& state, const Operator& a);
/// Var[A] = <A^2> - <A>^2 (clamped at zero). Requires Hermitian A.
double variance(const QuantumState& state, const Operator& a);
/// Symmetrized covariance (1/2)<AB + BA> - <A><B>.
double covariance(const QuantumState& state, const Operator& a,
                  const Operator& b);

/// 2x2 covariance matrix of (X, P), built from <a>, <a^2> and <a^dag a>
/// so the top-level truncation artifact of X^2 and P^2 never enters.
Eigen::Matrix2d quadrature_covariance(const QuantumState& state);
/// (<X>, <P>).
Eigen::Vector2d quadrature_means(const QuantumState& state);
double mean_photon_number(const QuantumState& state);

}  // namespace kerr
