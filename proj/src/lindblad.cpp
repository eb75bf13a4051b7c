#include "kerr/lindblad.hpp"

#include "kerr/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace kerr {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5,
                                      8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
     -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
     11.0 / 84},
};
// b - b*, the embedded error weights.
constexpr std::array<double, 7> kE = {
    71.0 / 57600,  0.0,          -71.0 / 16695, 71.0 / 1920,
    -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

// Levels kept above the last significant one, so that the block has room
// to spread before the next size check.
constexpr Eigen::Index kWindowMargin = 16;

// One past the highest level n whose row or column holds an entry above
// tail * max|m|.
Eigen::Index significant_size(const CMatrix& m, double tail) {
  const double cut = tail * m.cwiseAbs().maxCoeff();
  for (Eigen::Index n = m.rows() - 1; n >= 0; --n) {
    if (m.row(n).cwiseAbs().maxCoeff() > cut ||
        m.col(n).cwiseAbs().maxCoeff() > cut) {
      return n + 1;
    }
  }
  return 0;
}

}  // namespace

LindbladPropagator::LindbladPropagator(FockDim dim, const HamiltonianParams& p,
                                       const LossParams& loss,
                                       Direction direction,
                                       LindbladOptions options,
                                       Picture picture)
    : dim_(dim),
      sign_(direction == Direction::Forward ? 1.0 : -1.0),
      gamma_(loss.gamma),
      heisenberg_(picture == Picture::Heisenberg),
      opt_(options) {
  // The adjoint of -i s[H, .] is +i s[H, .].
  if (heisenberg_) sign_ = -sign_;
  if (!(loss.gamma >= 0.0)) throw Error("LossParams: gamma must be >= 0");
  const int d = dim.value();
  diag_energy_.resize(d);
  number_.resize(d);
  for (int n = 0; n < d; ++n) {
    diag_energy_(n) = sign_ * (p.delta * n - p.kerr * double(n) * (n - 1));
    number_(n) = n;
  }
  pair_coupling_ = RVector::Zero(std::max(0, d - 2));
  for (int n = 0; n + 2 < d; ++n) {
    pair_coupling_(n) =
        sign_ * p.epsilon * std::sqrt(double(n + 1) * double(n + 2));
  }
  sqrt_n1_.resize(d - 1);
  for (int n = 0; n + 1 < d; ++n) sqrt_n1_(n) = std::sqrt(double(n + 1));
}

bool LindbladPropagator::uses_liouvillian() const noexcept {
  return dim_.value() <= opt_.liouvillian_max_dim;
}

void LindbladPropagator::coupling(const CMatrix& m, CMatrix& out) const {
  const Eigen::Index d = m.rows();
  const cplx mi(0.0, -1.0);
  out.setZero(d, d);
  if (d > 2) {
    const auto c = pair_coupling_.head(d - 2).asDiagonal();
    // -i [B, m] with B the (a^dag^2 + a^2) part of s*H.
    out.topRows(d - 2).noalias() += mi * (c * m.bottomRows(d - 2));
    out.bottomRows(d - 2).noalias() += mi * (c * m.topRows(d - 2));
    out.leftCols(d - 2).noalias() -= mi * (m.rightCols(d - 2) * c);
    out.rightCols(d - 2).noalias() -= mi * (m.leftCols(d - 2) * c);
  }
  if (gamma_ > 0.0) {
    const auto s = sqrt_n1_.head(d - 1).asDiagonal();
    if (heisenberg_) {
      // a^dag m a
      out.bottomRightCorner(d - 1, d - 1).noalias() +=
          gamma_ * (s * m.topLeftCorner(d - 1, d - 1) * s);
    } else {
      // a m a^dag
      out.topLeftCorner(d - 1, d - 1).noalias() +=
          gamma_ * (s * m.bottomRightCorner(d - 1, d - 1) * s);
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index i = 0; i < d; ++i) {
        out(i, j) -= 0.5 * gamma_ * (number_(i) + number_(j)) * m(i, j);
      }
    }
  }
}

CMatrix LindbladPropagator::generator(const CMatrix& m) const {
  CMatrix out;
  coupling(m, out);
  const Eigen::Index d = dim_.index();
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      out(i, j) += cplx(0.0, -(diag_energy_(i) - diag_energy_(j))) * m(i, j);
    }
  }
  return out;
}

CMatrix LindbladPropagator::liouvillian() const {
  const Eigen::Index d = dim_.index();
  CMatrix h = CMatrix::Zero(d, d);
  h.diagonal() = diag_energy_.cast<cplx>();
  for (Eigen::Index n = 0; n + 2 < d; ++n) {
    h(n, n + 2) = pair_coupling_(n);
    h(n + 2, n) = pair_coupling_(n);
  }
  CMatrix a = CMatrix::Zero(d, d);
  for (Eigen::Index n = 0; n + 1 < d; ++n) a(n, n + 1) = sqrt_n1_(n);
  const CMatrix num = number_.cast<cplx>().asDiagonal();
  const CMatrix id = CMatrix::Identity(d, d);
  // Column-major vec: vec(A X B) = (B^T kron A) vec(X).
  CMatrix l = cplx(0, -1) * (Eigen::kroneckerProduct(id, h).eval() -
                             Eigen::kroneckerProduct(h.transpose(), id).eval());
  if (gamma_ > 0.0) {
    if (heisenberg_) {
      l += gamma_ * Eigen::kroneckerProduct(a.transpose(), a.adjoint()).eval();
    } else {
      l += gamma_ * Eigen::kroneckerProduct(a.conjugate(), a).eval();
    }
    l -= 0.5 * gamma_ * Eigen::kroneckerProduct(id, num).eval();
    l -= 0.5 * gamma_ * Eigen::kroneckerProduct(num.transpose(), id).eval();
  }
  return l;
}

long LindbladPropagator::evolve(std::span<CMatrix> batch, double t) const {
  if (t < 0) throw Error("LindbladPropagator: negative duration");
  for (const CMatrix& m : batch) {
    if (m.rows() != dim_.index() || m.cols() != dim_.index()) {
      throw DimensionMismatch("LindbladPropagator: matrix dimension mismatch");
    }
  }
  if (t == 0 || batch.empty()) return 0;
  if (uses_liouvillian()) {
    const CMatrix prop = expm(liouvillian() * t);
    const Eigen::Index d = dim_.index();
    for (CMatrix& m : batch) {
      CVector v = Eigen::Map<const CVector>(m.data(), d * d);
      CVector w = prop * v;
      m = Eigen::Map<const CMatrix>(w.data(), d, d);
    }
    return 0;
  }
  double h = opt_.initial_step;
  return integrate(batch, 0.0, t, h);
}

CMatrix LindbladPropagator::evolve(const CMatrix& m, double t) const {
  CMatrix out = m;
  evolve(std::span<CMatrix>(&out, 1), t);
  return out;
}

std::vector<CMatrix> LindbladPropagator::trajectory(
    const CMatrix& rho0, std::span<const double> times) const {
  std::vector<CMatrix> out;
  out.reserve(times.size());
  for (auto& batch : trajectory(std::vector<CMatrix>{rho0}, times)) {
    out.push_back(std::move(batch.front()));
  }
  return out;
}

std::vector<std::vector<CMatrix>> LindbladPropagator::trajectory(
    std::vector<CMatrix> batch, std::span<const double> times) const {
  std::vector<std::vector<CMatrix>> out;
  out.reserve(times.size());
  double t_now = 0.0;
  double h = opt_.initial_step;
  for (double t : times) {
    if (t < t_now) throw Error("trajectory: checkpoint times must increase");
    if (t > t_now) {
      if (uses_liouvillian()) {
        evolve(batch, t - t_now);
      } else {
        for (const CMatrix& m : batch) {
          if (m.rows() != dim_.index() || m.cols() != dim_.index()) {
            throw DimensionMismatch("trajectory: matrix dimension mismatch");
          }
        }
        integrate(batch, t_now, t, h);
      }
      t_now = t;
    }
    out.push_back(batch);
  }
  return out;
}

// Integrating-factor (Lawson) Dormand-Prince 5(4): the diagonal of s*H is
// integrated exactly through the phase matrix E(tau)_ij =
// exp(-i (e_i - e_j) tau), and the remaining coupling is stepped in the frame
// anchored at the start of each step. |E_ij| = 1, so the embedded error
// estimate carries over to the lab frame unchanged, and every stage stays
// traceless and Hermiticity-preserving.
//
// Only the leading w x w block is stepped, where w covers every entry above
// window_tail relative to each matrix's largest entry plus kWindowMargin
// levels; w grows whenever the margin fills up.
long LindbladPropagator::integrate(std::span<CMatrix> batch, double t0,
                                   double t1, double& h) const {
  const Eigen::Index d = dim_.index();
  const std::size_t nb = batch.size();

  auto wanted_size = [&](const std::vector<CMatrix>& ms) {
    if (opt_.window_tail <= 0.0) return d;
    Eigen::Index n = 0;
    for (const CMatrix& m : ms) {
      n = std::max(n, significant_size(m, opt_.window_tail));
    }
    return std::min(d, n + kWindowMargin);
  };
  std::vector<CMatrix> y(batch.begin(), batch.end());
  Eigen::Index w = wanted_size(y);
  for (CMatrix& m : y) m = m.topLeftCorner(w, w).eval();

  std::vector<std::array<CMatrix, 7>> k(nb);
  CMatrix stage, lab, tmp;
  CVector u;

  auto phase_vector = [&](double tau) {
    u.resize(w);
    for (Eigen::Index i = 0; i < w; ++i) {
      u(i) = std::polar(1.0, -diag_energy_(i) * tau);
    }
  };
  // F(tau, v) = conj(E) o L1(E o v), E = u u^dag.
  auto frame_rhs = [&](double tau, const CMatrix& v, CMatrix& out) {
    if (tau == 0.0) {
      coupling(v, out);
      return;
    }
    phase_vector(tau);
    lab.noalias() = u.asDiagonal() * v * u.conjugate().asDiagonal();
    coupling(lab, tmp);
    out.noalias() = u.conjugate().asDiagonal() * tmp * u.asDiagonal();
  };

  for (std::size_t b = 0; b < nb; ++b) frame_rhs(0.0, y[b], k[b][0]);

  double t = t0;
  long steps = 0;
  long attempts = 0;
  std::vector<CMatrix> y5(nb);
  while (t < t1) {
    if (++attempts > opt_.max_steps) {
      throw IntegratorError("Lindblad integrator: step budget exhausted", t);
    }
    const bool last = t + h >= t1;
    const double step = last ? t1 - t : h;

    double err = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      const CMatrix& yb = y[b];
      for (int s = 1; s < 7; ++s) {
        stage = yb;
        for (int j = 0; j < s; ++j) {
          if (kA[s][j] != 0.0) stage.noalias() += (step * kA[s][j]) * k[b][j];
        }
        frame_rhs(kC[s] * step, stage, k[b][s]);
        if (s == 6) y5[b] = stage;  // row 7 of the tableau is b
      }
      // Error estimate, max norm scaled per entry.
      tmp.setZero(w, w);
      for (int s = 0; s < 7; ++s) {
        if (kE[s] != 0.0) tmp.noalias() += (step * kE[s]) * k[b][s];
      }
      for (Eigen::Index j = 0; j < w; ++j) {
        for (Eigen::Index i = 0; i < w; ++i) {
          const double scale =
              opt_.abs_tol +
              opt_.rel_tol * std::max(std::abs(yb(i, j)), std::abs(y5[b](i, j)));
          err = std::max(err, std::abs(tmp(i, j)) / scale);
        }
      }
    }

    if (!std::isfinite(err)) err = 1e10;
    if (err <= 1.0) {
      phase_vector(step);
      for (std::size_t b = 0; b < nb; ++b) {
        y[b].noalias() = u.asDiagonal() * y5[b] * u.conjugate().asDiagonal();
        // FSAL: first stage of the next step is E(step) o k7.
        k[b][0] = u.asDiagonal() * k[b][6] * u.conjugate().asDiagonal();
      }
      t = last ? t1 : t + step;
      ++steps;
      const double grow =
          err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      // Keep the controller's natural step when the last one was clipped.
      if (!last || step >= h) h = step * grow;

      if (w < d && wanted_size(y) > w - kWindowMargin / 2) {
        const Eigen::Index grown = std::min(d, w + kWindowMargin);
        for (std::size_t b = 0; b < nb; ++b) {
          CMatrix padded = CMatrix::Zero(grown, grown);
          padded.topLeftCorner(w, w) = y[b];
          y[b] = std::move(padded);
        }
        w = grown;
        for (std::size_t b = 0; b < nb; ++b) frame_rhs(0.0, y[b], k[b][0]);
      }
    } else {
      h = step * std::max(0.2, 0.9 * std::pow(err, -0.2));
      if (h < opt_.min_step) {
        std::ostringstream os;
        os << "Lindblad integrator: step size underflow at t = " << t;
        throw IntegratorError(os.str(), t);
      }
    }
  }
  for (std::size_t b = 0; b < nb; ++b) {
    batch[b].setZero();
    batch[b].topLeftCorner(w, w) = y[b];
  }
  return steps;
}

}  // namespace kerr
