#include "kerr/fock.hpp"

#include "kerr/errors.hpp"
#include "kerr/log.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace kerr {
namespace {

void require_same_dim(FockDim a, FockDim b, const char* where) {
  if (a != b) {
    std::ostringstream os;
    os << where << ": dimension mismatch (" << a.value() << " vs "
       << b.value() << ")";
    throw DimensionMismatch(os.str());
  }
}

// Eigenvalues of a Hermitian matrix, smallest first.
RVector hermitian_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

FockDim::FockDim(int levels) : levels_(levels) {
  if (levels < 2) {
    throw Error("FockDim: need at least 2 levels, got " +
                std::to_string(levels));
  }
}

// ---- Operator ---------------------------------------------------------------

Operator::Operator(FockDim dim, CMatrix entries)
    : dim_(dim), m_(std::move(entries)) {
  if (m_.rows() != dim.index() || m_.cols() != dim.index()) {
    throw DimensionMismatch("Operator: matrix shape does not match dim " +
                            std::to_string(dim.value()));
  }
  if (!m_.allFinite()) throw Error("Operator: non-finite entries");
}

double Operator::hermiticity_defect() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

bool Operator::is_hermitian(double tol) const {
  return hermiticity_defect() <= tol;
}

Operator Operator::adjoint() const { return Operator(dim_, m_.adjoint()); }

Operator& Operator::operator+=(const Operator& other) {
  require_same_dim(dim_, other.dim_, "Operator::operator+");
  m_ += other.m_;
  return *this;
}

Operator& Operator::operator-=(const Operator& other) {
  require_same_dim(dim_, other.dim_, "Operator::operator-");
  m_ -= other.m_;
  return *this;
}

Operator& Operator::operator*=(cplx c) {
  m_ *= c;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dim(a.dim(), b.dim(), "Operator::operator*");
  return Operator(a.dim(), a.matrix() * b.matrix());
}

// ---- QuantumState -------------------------------------------------------------

QuantumState::QuantumState(Kind kind, FockDim dim, CVector ket, CMatrix rho)
    : kind_(kind), dim_(dim), ket_(std::move(ket)), rho_(std::move(rho)) {}

QuantumState QuantumState::pure(CVector ket) {
  const FockDim dim(static_cast<int>(ket.size()));
  if (!ket.allFinite()) throw InvalidState("pure state: non-finite amplitude");
  const double norm = ket.norm();
  if (std::abs(norm - 1.0) > kNormTol) {
    throw InvalidState("pure state: norm " + std::to_string(norm) +
                       " deviates from 1");
  }
  return QuantumState(Kind::Pure, dim, std::move(ket), CMatrix());
}

QuantumState QuantumState::mixed(CMatrix rho) {
  if (rho.rows() != rho.cols()) {
    throw InvalidState("density matrix must be square");
  }
  const FockDim dim(static_cast<int>(rho.rows()));
  if (!rho.allFinite()) throw InvalidState("density matrix: non-finite entry");
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) {
    throw InvalidState("density matrix: Hermiticity defect " +
                       std::to_string(herm));
  }
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > kNormTol) {
    throw InvalidState("density matrix: trace " + std::to_string(tr));
  }
  const double min_eig = hermitian_eigenvalues(rho)(0);
  if (min_eig < -kPositivityTol) {
    throw InvalidState("density matrix: negative eigenvalue " +
                       std::to_string(min_eig));
  }
  return QuantumState(Kind::Mixed, dim, CVector(), std::move(rho));
}

QuantumState QuantumState::vacuum(FockDim dim) { return fock(dim, 0); }

QuantumState QuantumState::fock(FockDim dim, int n) {
  if (n < 0 || n >= dim.value()) {
    throw Error("fock state |" + std::to_string(n) + "> outside truncation");
  }
  CVector ket = CVector::Zero(dim.index());
  ket(n) = 1.0;
  return pure(std::move(ket));
}

QuantumState QuantumState::coherent(FockDim dim, cplx alpha) {
  CVector ket = displacement(dim, alpha).matrix().col(0);
  ket.normalize();
  return pure(std::move(ket));
}

QuantumState QuantumState::thermal(FockDim dim, double n_thermal) {
  if (n_thermal < 0) throw Error("thermal state: negative occupation");
  CMatrix rho = CMatrix::Zero(dim.index(), dim.index());
  if (n_thermal == 0) {
    rho(0, 0) = 1.0;
  } else {
    const double ratio = n_thermal / (1.0 + n_thermal);
    double w = 1.0;
    double total = 0.0;
    for (int n = 0; n < dim.value(); ++n) {
      rho(n, n) = w;
      total += w;
      w *= ratio;
    }
    rho /= total;
  }
  return mixed(std::move(rho));
}

const CVector& QuantumState::ket() const {
  if (!is_pure()) throw InvalidState("ket() requested from a mixed state");
  return ket_;
}

CMatrix QuantumState::density() const {
  if (is_pure()) return ket_ * ket_.adjoint();
  return rho_;
}

RVector QuantumState::populations() const {
  if (is_pure()) return ket_.cwiseAbs2();
  return rho_.diagonal().real();
}

TruncationReport QuantumState::check_truncation(double threshold) const {
  const int d = dim_.value();
  // At least two levels, so states of a single parity cannot hide their
  // tail in a level they never occupy.
  const int tail_levels = std::min(
      d - 1, std::max(2, static_cast<int>(std::ceil(kTailFraction * d))));
  TruncationReport r;
  r.first_tail_level = d - tail_levels;
  r.tail = populations().tail(tail_levels).sum();
  r.ok = r.tail < threshold;
  return r;
}

double QuantumState::purity() const {
  if (is_pure()) return 1.0;
  return rho_.cwiseAbs2().sum();
}

// ---- operators ----------------------------------------------------------------

Operator identity(FockDim dim) {
  return Operator(dim, CMatrix::Identity(dim.index(), dim.index()));
}

Operator annihilation(FockDim dim) {
  CMatrix a = CMatrix::Zero(dim.index(), dim.index());
  for (int n = 1; n < dim.value(); ++n) a(n - 1, n) = std::sqrt(double(n));
  return Operator(dim, std::move(a));
}

Operator creation(FockDim dim) { return annihilation(dim).adjoint(); }

Operator number(FockDim dim) {
  CMatrix n = CMatrix::Zero(dim.index(), dim.index());
  for (int k = 0; k < dim.value(); ++k) n(k, k) = double(k);
  return Operator(dim, std::move(n));
}

Operator quadrature(FockDim dim, double theta) {
  const CMatrix a = annihilation(dim).matrix();
  const cplx phase = std::polar(1.0, -theta);
  CMatrix m = (a * phase + a.adjoint() * std::conj(phase)) / std::sqrt(2.0);
  // Exact Hermiticity; the two terms above are adjoints of each other.
  m = (m + m.adjoint()).eval() * 0.5;
  return Operator(dim, std::move(m));
}

Operator x_quadrature(FockDim dim) { return quadrature(dim, 0.0); }

Operator p_quadrature(FockDim dim) {
  const CMatrix a = annihilation(dim).matrix();
  return Operator(dim, cplx(0, -1) * (a - a.adjoint()) / std::sqrt(2.0));
}

Operator parity(FockDim dim) {
  CMatrix p = CMatrix::Zero(dim.index(), dim.index());
  for (int n = 0; n < dim.value(); ++n) p(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  return Operator(dim, std::move(p));
}

Operator rotation(FockDim dim, double phi) {
  CMatrix r = CMatrix::Zero(dim.index(), dim.index());
  for (int n = 0; n < dim.value(); ++n) r(n, n) = std::polar(1.0, -phi * n);
  return Operator(dim, std::move(r));
}

Operator displacement(FockDim dim, cplx alpha) {
  if (std::norm(alpha) > dim.value() / 10.0) {
    warn("displacement: |alpha|^2 = " + std::to_string(std::norm(alpha)) +
         " is large for dim " + std::to_string(dim.value()));
  }
  if (alpha == cplx(0)) return identity(dim);
  const CMatrix a = annihilation(dim).matrix();
  const CMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
  return Operator(dim, expm(gen));
}

CMatrix expm(const CMatrix& a) { return a.exp(); }

// ---- state utilities ------------------------------------------------------------

QuantumState embed(const QuantumState& state, FockDim larger) {
  const Eigen::Index d = state.dim().index();
  if (larger.index() < d) {
    throw DimensionMismatch("embed: target dimension is smaller than state");
  }
  if (larger == state.dim()) return state;
  if (state.is_pure()) {
    CVector ket = CVector::Zero(larger.index());
    ket.head(d) = state.ket();
    return QuantumState::pure(std::move(ket));
  }
  CMatrix rho = CMatrix::Zero(larger.index(), larger.index());
  rho.topLeftCorner(d, d) = state.density();
  return QuantumState::mixed(std::move(rho));
}

QuantumState transform(const QuantumState& state, const CMatrix& u) {
  if (u.rows() != state.dim().index() || u.cols() != state.dim().index()) {
    throw DimensionMismatch("transform: operator/state dimension mismatch");
  }
  if (state.is_pure()) return QuantumState::pure(u * state.ket());
  CMatrix rho = u * state.density() * u.adjoint();
  rho = (rho + rho.adjoint()).eval() * 0.5;
  return QuantumState::mixed(std::move(rho));
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  require_same_dim(a.dim(), b.dim(), "fidelity");
  if (a.is_pure() && b.is_pure()) return std::norm(a.ket().dot(b.ket()));
  if (a.is_pure()) {
    return (a.ket().adjoint() * b.density() * a.ket())(0, 0).real();
  }
  if (b.is_pure()) {
    return (b.ket().adjoint() * a.density() * b.ket())(0, 0).real();
  }
  // F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.density());
  const RVector lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix sqrt_rho =
      es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  const CMatrix inner = sqrt_rho * b.density() * sqrt_rho;
  const RVector mu = hermitian_eigenvalues((inner + inner.adjoint()) * 0.5);
  const double s = mu.cwiseMax(0.0).cwiseSqrt().sum();
  return s * s;
}

// ---- moments --------------------------------------------------------------------

cplx expectation(const QuantumState& state, const Operator& a) {
  require_same_dim(state.dim(), a.dim(), "expectation");
  if (state.is_pure()) return state.ket().dot(a.matrix() * state.ket());
  // Tr(rho A) without forming the product.
  return (state.density().transpose().cwiseProduct(a.matrix())).sum();
}

double variance(const QuantumState& state, const Operator& a) {
  require_same_dim(state.dim(), a.dim(), "variance");
  if (!a.is_hermitian()) {
    throw NotHermitian("variance: operator is not Hermitian (defect " +
                       std::to_string(a.hermiticity_defect()) + ")");
  }
  return std::max(0.0, covariance(state, a, a));
}

double covariance(const QuantumState& state, const Operator& a,
                  const Operator& b) {
  require_same_dim(state.dim(), a.dim(), "covariance");
  require_same_dim(state.dim(), b.dim(), "covariance");
  const double ab = expectation(state, a * b).real();
  const double ba = expectation(state, b * a).real();
  return 0.5 * (ab + ba) -
         expectation(state, a).real() * expectation(state, b).real();
}

namespace {

// <a>, <a^2> and <a^dag a> from the matrix elements rho(n, n-1),
// rho(n, n-2) and rho(n, n). These are the untruncated values, so no
// padding is needed.
struct LadderMoments {
  cplx a{0.0, 0.0};
  cplx a2{0.0, 0.0};
  double n = 0.0;
};

LadderMoments ladder_moments(const QuantumState& state) {
  const Eigen::Index d = state.dim().index();
  LadderMoments m;
  auto accumulate = [&](auto&& element) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const double kd = double(k);
      m.n += kd * element(k, k).real();
      if (k >= 1) m.a += std::sqrt(kd) * element(k, k - 1);
      if (k >= 2) m.a2 += std::sqrt(kd * (kd - 1.0)) * element(k, k - 2);
    }
  };
  if (state.is_pure()) {
    const CVector& psi = state.ket();
    accumulate([&](Eigen::Index i, Eigen::Index j) {
      return psi(i) * std::conj(psi(j));
    });
  } else {
    const CMatrix rho = state.density();
    accumulate([&](Eigen::Index i, Eigen::Index j) { return rho(i, j); });
  }
  return m;
}

}  // namespace

Eigen::Matrix2d quadrature_covariance(const QuantumState& state) {
  const LadderMoments m = ladder_moments(state);
  const double mx = std::sqrt(2.0) * m.a.real();
  const double mp = std::sqrt(2.0) * m.a.imag();
  Eigen::Matrix2d g;
  g(0, 0) = std::max(0.0, m.a2.real() + m.n + 0.5 - mx * mx);
  g(1, 1) = std::max(0.0, -m.a2.real() + m.n + 0.5 - mp * mp);
  g(0, 1) = g(1, 0) = m.a2.imag() - mx * mp;
  return g;
}

Eigen::Vector2d quadrature_means(const QuantumState& state) {
  const cplx a = ladder_moments(state).a;
  return {std::sqrt(2.0) * a.real(), std::sqrt(2.0) * a.imag()};
}

double mean_photon_number(const QuantumState& state) {
  const RVector pop = state.populations();
  double n = 0.0;
  for (Eigen::Index k = 0; k < pop.size(); ++k) n += double(k) * pop(k);
  return n;
}

}  // namespace kerr
