#include "kerr/metrology.hpp"

#include "kerr/errors.hpp"
#include "kerr/lindblad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace kerr {
namespace {

constexpr double kPi = std::numbers::pi;

double wrap_pi(double angle) {
  double a = std::fmod(angle, kPi);
  if (a < 0) a += kPi;
  if (a >= kPi) a -= kPi;
  return a;
}

double angle_of(const Eigen::Vector2d& v) {
  return wrap_pi(std::atan2(v(1), v(0)));
}

Eigen::Vector2d unit(double angle) {
  return {std::cos(angle), std::sin(angle)};
}

CMatrix hermitize(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

void require_hermitian(const Operator& op, const char* where) {
  if (!op.is_hermitian()) {
    std::ostringstream os;
    os << where << ": operator is not Hermitian (defect "
       << op.hermiticity_defect() << ")";
    throw NotHermitian(os.str());
  }
}

// Tr(A B) without forming the product.
cplx trace_product(const CMatrix& a, const CMatrix& b) {
  return a.transpose().cwiseProduct(b).sum();
}

// Applies each operator to the state once: vectors for kets, rho*O for
// density matrices.
struct Applied {
  bool pure;
  std::vector<CVector> vecs;
  std::vector<CMatrix> rho_ops;
};

Applied apply_all(const QuantumState& state, std::span<const Operator> ops) {
  Applied a{state.is_pure(), {}, {}};
  if (a.pure) {
    for (const Operator& op : ops) a.vecs.push_back(op.matrix() * state.ket());
  } else {
    const CMatrix rho = state.density();
    for (const Operator& op : ops) a.rho_ops.push_back(rho * op.matrix());
  }
  return a;
}

// <A_i B_j> with A_i already applied to the state.
cplx product_expectation(const Applied& left, std::size_t i,
                         const Operator& right_op, const Applied& right,
                         std::size_t j) {
  if (left.pure) {
    // <psi| A B |psi> = <A psi | B psi> for Hermitian A.
    return left.vecs[i].dot(right.vecs[j]);
  }
  return trace_product(left.rho_ops[i], right_op.matrix());
}

}  // namespace

// ---- basic sensitivity ----------------------------------------------------------

double sensitivity(const QuantumState& state, const Operator& g,
                   const Operator& m) {
  require_hermitian(g, "sensitivity");
  require_hermitian(m, "sensitivity");
  const double var = variance(state, m);
  if (var <= kDegenerateVariance) {
    throw DegenerateMeasurement("sensitivity: Var[M] = " +
                                std::to_string(var) + " is degenerate");
  }
  const cplx comm = expectation(state, g * m - m * g);
  return std::norm(comm) / var;
}

SensitivityReport noisy_linear_sensitivity(const QuantumState& state,
                                           DetectionNoise noise) {
  if (noise.sigma2 < 0) throw Error("DetectionNoise: sigma2 must be >= 0");
  const MinVariance mv = min_variance(state);
  const double denom = mv.v_min + noise.sigma2;
  if (denom <= kDegenerateVariance) {
    throw DegenerateMeasurement("linear_sensitivity: vanishing variance");
  }
  SensitivityReport r;
  r.value = 1.0 / denom;
  r.theta_opt = mv.theta_opt;
  r.phi_opt = wrap_pi(mv.theta_opt + kPi / 2);
  r.n_opt = unit(r.phi_opt);
  r.m_opt = unit(mv.theta_opt);
  return r;
}

SensitivityReport linear_sensitivity(const QuantumState& state) {
  return noisy_linear_sensitivity(state, DetectionNoise{0.0});
}

// ---- QFI ---------------------------------------------------------------------------

double qfi_pure(const QuantumState& state, const Operator& g) {
  if (!state.is_pure()) throw InvalidState("qfi_pure: state is mixed");
  return 4.0 * variance(state, g);
}

Eigen::Matrix2d qfi_matrix(const QuantumState& state) {
  if (state.is_pure()) return 4.0 * quadrature_covariance(state);
  // One extra level keeps the |dim> direction in the kernel of rho so that
  // G_i |k> is represented exactly.
  const FockDim padded(state.dim().value() + 1);
  const CMatrix rho = hermitize(embed(state, padded).density());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  const RVector lam = es.eigenvalues().cwiseMax(0.0);
  const CMatrix& v = es.eigenvectors();
  const CMatrix gx = v.adjoint() * x_quadrature(padded).matrix() * v;
  const CMatrix gp = v.adjoint() * p_quadrature(padded).matrix() * v;

  const Eigen::Index n = lam.size();
  RMatrix w = RMatrix::Zero(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double s = lam(k) + lam(l);
      if (s > kQfiCutoff) {
        const double d = lam(k) - lam(l);
        w(k, l) = 2.0 * d * d / s;
      }
    }
  }
  // <k|G_i|l><l|G_j|k> = gi(k,l) * conj(gj(k,l)) for Hermitian G_j.
  Eigen::Matrix2d f;
  f(0, 0) = (w.array() * gx.array().abs2()).sum();
  f(1, 1) = (w.array() * gp.array().abs2()).sum();
  f(0, 1) = f(1, 0) =
      (w.array() * (gx.array() * gp.array().conjugate()).real()).sum();
  return f;
}

SensitivityReport qfi_mixed(const QuantumState& state) {
  const Eigen::Matrix2d f = qfi_matrix(state);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(f);
  SensitivityReport r;
  r.value = es.eigenvalues()(1);
  r.n_opt = es.eigenvectors().col(1);
  r.phi_opt = angle_of(r.n_opt);
  return r;
}

double qfi_direction(const QuantumState& state, double phi) {
  const Eigen::Vector2d n = unit(phi);
  return n.dot(qfi_matrix(state) * n);
}

// ---- moment matrices -----------------------------------------------------------------

MomentBasis MomentBasis::build(FockDim dim, int order) {
  if (order < 1 || order > 3) {
    throw Error("MomentBasis: order must be 1, 2 or 3");
  }
  const CMatrix x = x_quadrature(dim).matrix();
  const CMatrix p = p_quadrature(dim).matrix();
  MomentBasis b;
  b.order = order;
  auto push = [&](const CMatrix& m) { b.ops.emplace_back(dim, hermitize(m)); };
  push(x);
  push(p);
  if (order >= 2) {
    push(x * x);
    push(p * p);
    push((x * p + p * x) / 2.0);
  }
  if (order >= 3) {
    push(x * x * x);
    push(p * p * p);
    push((x * p * p + p * x * p + p * p * x) / 3.0);
    push((p * x * x + x * p * x + x * x * p) / 3.0);
  }
  return b;
}

RMatrix commutator_matrix(const QuantumState& state,
                          std::span<const Operator> generators,
                          std::span<const Operator> measurements) {
  for (const Operator& g : generators) require_hermitian(g, "commutator_matrix");
  for (const Operator& m : measurements) {
    require_hermitian(m, "commutator_matrix");
  }
  const Applied ga = apply_all(state, generators);
  const Applied ma = apply_all(state, measurements);
  RMatrix c(generators.size(), measurements.size());
  for (std::size_t i = 0; i < generators.size(); ++i) {
    for (std::size_t j = 0; j < measurements.size(); ++j) {
      const cplx gm = product_expectation(ga, i, measurements[j], ma, j);
      cplx mg;
      if (state.is_pure()) {
        mg = ma.vecs[j].dot(ga.vecs[i]);
      } else {
        mg = trace_product(ma.rho_ops[j], generators[i].matrix());
      }
      c(i, j) = (cplx(0, -1) * (gm - mg)).real();
    }
  }
  return c;
}

RMatrix covariance_matrix(const QuantumState& state,
                          std::span<const Operator> measurements) {
  for (const Operator& m : measurements) {
    require_hermitian(m, "covariance_matrix");
  }
  const Applied ma = apply_all(state, measurements);
  const std::size_t n = measurements.size();
  RVector mean(n);
  for (std::size_t i = 0; i < n; ++i) {
    mean(i) = ma.pure ? state.ket().dot(ma.vecs[i]).real()
                      : ma.rho_ops[i].trace().real();
  }
  RMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double second =
          product_expectation(ma, i, measurements[j], ma, j).real();
      g(i, j) = g(j, i) = second - mean(i) * mean(j);
    }
  }
  return g;
}

SensitivityReport moment_matrix_optimum(const RMatrix& c,
                                        const RMatrix& gamma) {
  if (c.cols() != gamma.rows() || gamma.rows() != gamma.cols()) {
    throw DimensionMismatch("moment_matrix_optimum: C and Gamma disagree");
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> es((gamma + gamma.transpose()) * 0.5);
  const RVector lam = es.eigenvalues();
  const double top = lam.maxCoeff();
  if (!(top > 0.0)) {
    throw SingularCovariance("moment_matrix_optimum: covariance matrix has "
                             "no positive singular values");
  }
  RVector inv = RVector::Zero(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) > kPinvCutoff * top) inv(i) = 1.0 / lam(i);
  }
  const RMatrix pinv =
      es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
  const RMatrix mm = c * pinv * c.transpose();
  Eigen::SelfAdjointEigenSolver<RMatrix> top_es((mm + mm.transpose()) * 0.5);
  const Eigen::Index last = mm.rows() - 1;

  SensitivityReport r;
  r.value = std::max(0.0, top_es.eigenvalues()(last));
  RVector n = top_es.eigenvectors().col(last);
  if (n.size() == 2) {
    r.n_opt = n;
    r.phi_opt = angle_of(r.n_opt);
  }
  RVector m = pinv * c.transpose() * n;
  if (m.norm() > 0) m.normalize();
  r.m_opt = m;
  if (m.size() == 2) r.theta_opt = angle_of(Eigen::Vector2d(m(0), m(1)));
  return r;
}

SensitivityReport moment_sensitivity(const QuantumState& state,
                                     const MomentBasis& basis) {
  if (basis.ops.empty() || basis.ops.front().dim() != state.dim()) {
    throw DimensionMismatch("moment_sensitivity: basis/state mismatch");
  }
  const std::span<const Operator> gens(basis.ops.data(), 2);
  const RMatrix c = commutator_matrix(state, gens, basis.ops);
  const RMatrix g = covariance_matrix(state, basis.ops);
  return moment_matrix_optimum(c, g);
}

SensitivityReport moment_sensitivity(const QuantumState& state, int order) {
  const FockDim padded(state.dim().value() + 2 * order + 1);
  return moment_sensitivity(embed(state, padded),
                            MomentBasis::build(padded, order));
}

// ---- MAI ---------------------------------------------------------------------------

double mai_value_at(const MaiMoments& m, double phi, double theta,
                    DetectionNoise noise) {
  const Eigen::Vector2d n = unit(phi);
  const Eigen::Vector2d v = unit(theta);
  const double signal = n.dot(m.c * v);
  const double var = v.dot(m.gamma * v) + noise.sigma2;
  return signal * signal / var;
}

SensitivityReport mai_optimum(const MaiMoments& m, DetectionNoise noise) {
  if (noise.sigma2 < 0) throw Error("DetectionNoise: sigma2 must be >= 0");
  if (!m.reliable) {
    SensitivityReport r;
    r.value = std::numeric_limits<double>::quiet_NaN();
    r.reliable = false;
    r.note = m.note;
    return r;
  }
  const Eigen::Matrix2d g =
      m.gamma + noise.sigma2 * Eigen::Matrix2d::Identity();
  SensitivityReport r = moment_matrix_optimum(m.c, g);
  r.note = m.note;
  return r;
}

SensitivityReport mai_grid_search(const MaiMoments& m, DetectionNoise noise,
                                  int grid) {
  if (grid < 3) throw Error("mai_grid_search: grid too small");
  double best = -1.0;
  double bp = 0.0;
  double bt = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double phi = kPi * i / grid;
      const double theta = kPi * j / grid;
      const double v = mai_value_at(m, phi, theta, noise);
      if (v > best) {
        best = v;
        bp = phi;
        bt = theta;
      }
    }
  }
  // Coordinate-wise parabolic refinement with a shrinking bracket.
  double step = kPi / grid;
  for (int sweep = 0; sweep < 60 && step > 1e-12; ++sweep) {
    for (int axis = 0; axis < 2; ++axis) {
      auto f = [&](double s) {
        return axis == 0 ? mai_value_at(m, bp + s, bt, noise)
                         : mai_value_at(m, bp, bt + s, noise);
      };
      const double fm = f(-step);
      const double f0 = f(0.0);
      const double fp = f(step);
      const double curv = fm - 2.0 * f0 + fp;
      if (curv < 0.0) {
        const double off =
            std::clamp(0.5 * step * (fm - fp) / curv, -step, step);
        const double fo = f(off);
        if (fo > best) {
          best = fo;
          (axis == 0 ? bp : bt) += off;
        }
      }
    }
    step *= 0.5;
  }
  SensitivityReport r;
  r.phi_opt = wrap_pi(bp);
  r.theta_opt = wrap_pi(bt);
  r.value = mai_value_at(m, r.phi_opt, *r.theta_opt, noise);
  r.n_opt = unit(r.phi_opt);
  r.m_opt = unit(*r.theta_opt);
  return r;
}

MaiEvaluator::MaiEvaluator(FockDim dim, const HamiltonianParams& p,
                           const LossParams& loss, MaiOptions options)
    : dim_(dim),
      params_(p),
      loss_(loss),
      options_(options),
      unitary_(dim, p),
      x_(x_quadrature(dim).matrix()),
      p_(p_quadrature(dim).matrix()) {
  if (!(loss.gamma >= 0.0)) throw Error("LossParams: gamma must be >= 0");
  if (!(options.delta_d > 0.0)) throw Error("MaiOptions: delta_d must be > 0");
}

MaiMoments MaiEvaluator::moments_operator_form(const QuantumState& prepared,
                                               double reversal_t) const {
  if (!prepared.is_pure() || loss_.gamma != 0.0) {
    throw Error("MAI operator form needs a pure state and gamma = 0");
  }
  if (prepared.dim() != dim_) {
    throw DimensionMismatch("MaiEvaluator: state dimension mismatch");
  }
  // M_MAI = U M U^dag with U = exp(-iHt):
  //   <psi|G U M U^dag|psi> = <U^dag G psi| M |U^dag psi>.
  const CVector& psi = prepared.ket();
  const CVector back = unitary_.evolve_ket(psi, -reversal_t);
  const std::array<CVector, 2> gen_back = {
      unitary_.evolve_ket(x_ * psi, -reversal_t),
      unitary_.evolve_ket(p_ * psi, -reversal_t)};
  const std::array<const CMatrix*, 2> meas = {&x_, &p_};
  MaiMoments out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const cplx z = gen_back[i].dot(*meas[j] * back);
      out.c(i, j) = 2.0 * z.imag();
    }
  }
  const QuantumState final_state = QuantumState::pure(back);
  out.gamma = quadrature_covariance(final_state);
  if (out.c.cwiseAbs().maxCoeff() < kSignalFloor) {
    out.reliable = false;
    out.note = "signal below numerical noise floor";
  }
  return out;
}

void MaiEvaluator::reverse(std::vector<CMatrix>& batch,
                           double reversal_t) const {
  if (loss_.gamma == 0.0) {
    const CMatrix u = unitary_.unitary(-reversal_t);
    for (CMatrix& m : batch) m = u * m * u.adjoint();
  } else {
    const LindbladPropagator prop(dim_, params_, loss_, Direction::Reversed,
                                  options_.lindblad);
    prop.evolve(batch, reversal_t);
  }
}

namespace {

// C_ij = -d<M_j>/dd for the propagated signals S_i = d rho / dd, since
// d<M>/dd = i<[G, M]>.
Eigen::Matrix2d signal_to_c(const CMatrix& sx, const CMatrix& sp,
                            const CMatrix& x, const CMatrix& p) {
  const std::array<const CMatrix*, 2> s = {&sx, &sp};
  const std::array<const CMatrix*, 2> m = {&x, &p};
  Eigen::Matrix2d c;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) c(i, j) = -trace_product(*s[i], *m[j]).real();
  }
  return c;
}

}  // namespace

MaiMoments MaiEvaluator::moments_tangent(const QuantumState& prepared,
                                         double reversal_t) const {
  if (prepared.dim() != dim_) {
    throw DimensionMismatch("MaiEvaluator: state dimension mismatch");
  }
  // The reversal is linear, so the derivative of the readout is the
  // propagated tangent -i[G, rho].
  const CMatrix rho = prepared.density();
  const cplx mi(0.0, -1.0);
  std::vector<CMatrix> batch = {rho, mi * (x_ * rho - rho * x_),
                                mi * (p_ * rho - rho * p_)};
  reverse(batch, reversal_t);

  MaiMoments out;
  out.gamma = quadrature_covariance(QuantumState::mixed(hermitize(batch[0])));
  out.c = signal_to_c(batch[1], batch[2], x_, p_);
  if (out.c.cwiseAbs().maxCoeff() < kSignalFloor) {
    out.reliable = false;
    out.note = "signal below numerical noise floor";
  }
  return out;
}

MaiMoments MaiEvaluator::moments_finite_difference(const QuantumState& prepared,
                                                   double reversal_t) const {
  if (prepared.dim() != dim_) {
    throw DimensionMismatch("MaiEvaluator: state dimension mismatch");
  }
  const CMatrix rho = prepared.density();
  const std::array<const CMatrix*, 2> gens = {&x_, &p_};

  // rho_d = exp(-i d G) rho exp(i d G); the central difference quotient is
  // propagated directly instead of the two displaced states.
  auto signal = [&](const CMatrix& g, double delta) {
    const CMatrix u = expm(cplx(0, -delta) * g);
    const CMatrix plus = u * rho * u.adjoint();
    const CMatrix minus = u.adjoint() * rho * u;
    return CMatrix((plus - minus) / (2.0 * delta));
  };

  double delta = options_.delta_d;
  std::vector<CMatrix> batch = {rho,
                                signal(*gens[0], delta),
                                signal(*gens[1], delta),
                                signal(*gens[0], delta / 2),
                                signal(*gens[1], delta / 2)};
  reverse(batch, reversal_t);

  MaiMoments out;
  out.gamma = quadrature_covariance(QuantumState::mixed(hermitize(batch[0])));

  Eigen::Matrix2d coarse = signal_to_c(batch[1], batch[2], x_, p_);
  Eigen::Matrix2d fine = signal_to_c(batch[3], batch[4], x_, p_);
  for (int halving = 0;; ++halving) {
    const double scale = fine.cwiseAbs().maxCoeff();
    if (scale < kSignalFloor) {
      out.reliable = false;
      out.note = "signal below numerical noise floor";
      out.c = fine;
      return out;
    }
    const double rel = (coarse - fine).cwiseAbs().maxCoeff() / scale;
    if (rel <= options_.richardson_tol) {
      out.c = (4.0 * fine - coarse) / 3.0;
      return out;
    }
    if (halving >= options_.max_halvings) {
      out.reliable = false;
      out.note = "finite-difference derivative did not converge";
      out.c = fine;
      return out;
    }
    delta /= 2;
    std::vector<CMatrix> next = {signal(*gens[0], delta / 2),
                                 signal(*gens[1], delta / 2)};
    reverse(next, reversal_t);
    coarse = fine;
    fine = signal_to_c(next[0], next[1], x_, p_);
  }
}

std::vector<MaiMoments> MaiEvaluator::moments_series(
    std::span<const QuantumState> prepared,
    std::span<const double> reversal_ts) const {
  if (prepared.size() != reversal_ts.size()) {
    throw DimensionMismatch("moments_series: one reversal time per state");
  }
  for (std::size_t k = 1; k < reversal_ts.size(); ++k) {
    if (reversal_ts[k] < reversal_ts[k - 1]) {
      throw Error("moments_series: reversal times must be non-decreasing");
    }
  }
  std::vector<MaiMoments> out;
  out.reserve(prepared.size());
  if (options_.route != MaiRoute::Heisenberg) {
    for (std::size_t k = 0; k < prepared.size(); ++k) {
      out.push_back(moments(prepared[k], reversal_ts[k]));
    }
    return out;
  }
  if (!reversal_ts.empty() && reversal_ts.front() < 0) {
    throw Error("MAI: reversal duration must be >= 0");
  }

  // Readout operators X, P, X^2, P^2, (XP + PX)/2. The quadratic ones are
  // truncations of products formed with two spare levels, so their matrix
  // elements are exact on the kept levels.
  const int d = dim_.value();
  const FockDim wide(d + 2);
  const CMatrix xw = x_quadrature(wide).matrix();
  const CMatrix pw = p_quadrature(wide).matrix();
  std::vector<CMatrix> readout = {
      x_, p_, (xw * xw).topLeftCorner(d, d), (pw * pw).topLeftCorner(d, d),
      ((xw * pw + pw * xw) * 0.5).topLeftCorner(d, d)};
  const LindbladPropagator adjoint(dim_, params_, loss_, Direction::Reversed,
                                   options_.lindblad, Picture::Heisenberg);
  const auto evolved = adjoint.trajectory(std::move(readout), reversal_ts);

  const cplx mi(0.0, -1.0);
  for (std::size_t k = 0; k < prepared.size(); ++k) {
    if (prepared[k].dim() != dim_) {
      throw DimensionMismatch("MaiEvaluator: state dimension mismatch");
    }
    const CMatrix rho = prepared[k].density();
    const auto& ops = evolved[k];
    std::array<double, 5> mean{};
    for (int a = 0; a < 5; ++a) mean[a] = trace_product(ops[a], rho).real();
    MaiMoments m;
    m.gamma(0, 0) = mean[2] - mean[0] * mean[0];
    m.gamma(1, 1) = mean[3] - mean[1] * mean[1];
    m.gamma(0, 1) = m.gamma(1, 0) = mean[4] - mean[0] * mean[1];
    const std::array<CMatrix, 2> tangent = {mi * (x_ * rho - rho * x_),
                                            mi * (p_ * rho - rho * p_)};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        m.c(i, j) = -trace_product(tangent[i], ops[j]).real();
      }
    }
    if (m.c.cwiseAbs().maxCoeff() < kSignalFloor) {
      m.reliable = false;
      m.note = "signal below numerical noise floor";
    }
    out.push_back(std::move(m));
  }
  return out;
}

MaiMoments MaiEvaluator::moments(const QuantumState& prepared,
                                 double reversal_t) const {
  if (reversal_t < 0) throw Error("MAI: reversal duration must be >= 0");
  switch (options_.route) {
    case MaiRoute::Operator:
      return moments_operator_form(prepared, reversal_t);
    case MaiRoute::Tangent:
      return moments_tangent(prepared, reversal_t);
    case MaiRoute::FiniteDifference:
      return moments_finite_difference(prepared, reversal_t);
    case MaiRoute::Heisenberg:
      return moments_series(std::span(&prepared, 1),
                            std::span(&reversal_t, 1))
          .front();
    case MaiRoute::Auto:
      break;
  }
  if (loss_.gamma == 0.0 && prepared.is_pure()) {
    return moments_operator_form(prepared, reversal_t);
  }
  return moments_tangent(prepared, reversal_t);
}

SensitivityReport MaiEvaluator::evaluate(const QuantumState& prepared,
                                         double reversal_t,
                                         DetectionNoise noise) const {
  return mai_optimum(moments(prepared, reversal_t), noise);
}

QuantumState prepare_state(const MaiPreparation& prep) {
  const QuantumState vac = QuantumState::vacuum(prep.dim);
  if (prep.loss.gamma == 0.0) {
    return evolve_unitary(vac, prep.hamiltonian, prep.t);
  }
  return evolve_lindblad(vac, prep.hamiltonian, prep.loss, prep.t,
                         Direction::Forward);
}

SensitivityReport mai_sensitivity(const MaiPreparation& prep,
                                  DetectionNoise noise, MaiOptions options) {
  const MaiEvaluator eval(prep.dim, prep.hamiltonian, prep.loss, options);
  return eval.evaluate(prepare_state(prep), prep.reversal_t.value_or(prep.t),
                       noise);
}

}  // namespace kerr
