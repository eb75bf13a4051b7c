#include "kerr/dynamics.hpp"

#include "kerr/errors.hpp"
#include "kerr/lindblad.hpp"
#include "kerr/log.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace kerr {

Operator hamiltonian(FockDim dim, const HamiltonianParams& p) {
  const int d = dim.value();
  CMatrix h = CMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    h(n, n) = p.delta * n - p.kerr * double(n) * double(n - 1);
  }
  for (int n = 0; n + 2 < d; ++n) {
    const double c = p.epsilon * std::sqrt(double(n + 1) * double(n + 2));
    h(n, n + 2) = c;
    h(n + 2, n) = c;
  }
  return Operator(dim, std::move(h));
}

void enforce_truncation(const QuantumState& state, const char* where,
                        double threshold) {
  const TruncationReport r = state.check_truncation(threshold);
  if (r.ok) return;
  std::ostringstream os;
  os << where << ": population " << r.tail << " in Fock levels >= "
     << r.first_tail_level << " (dim " << state.dim().value() << ")";
  if (r.tail > kTruncationHardLimit) throw TruncationError(os.str(), r.tail);
  warn(os.str());
}

// ---- unitary ----------------------------------------------------------------

UnitaryPropagator::UnitaryPropagator(FockDim dim, const HamiltonianParams& p)
    : dim_(dim) {
  // H is real symmetric in the Fock basis.
  const RMatrix h = hamiltonian(dim, p).matrix().real();
  Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
  if (es.info() != Eigen::Success) {
    throw Error("UnitaryPropagator: eigendecomposition failed");
  }
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors().cast<cplx>();
}

CMatrix UnitaryPropagator::unitary(double t) const {
  CVector phases(energies_.size());
  for (Eigen::Index k = 0; k < energies_.size(); ++k) {
    phases(k) = std::polar(1.0, -energies_(k) * t);
  }
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

CVector UnitaryPropagator::evolve_ket(const CVector& ket, double t) const {
  CVector c = vectors_.adjoint() * ket;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    c(k) *= std::polar(1.0, -energies_(k) * t);
  }
  return vectors_ * c;
}

QuantumState UnitaryPropagator::evolve(const QuantumState& state,
                                       double t) const {
  if (state.dim() != dim_) {
    throw DimensionMismatch("UnitaryPropagator: state dimension mismatch");
  }
  QuantumState out = state.is_pure()
                         ? QuantumState::pure(evolve_ket(state.ket(), t))
                         : transform(state, unitary(t));
  enforce_truncation(out, "evolve_unitary");
  return out;
}

QuantumState evolve_unitary(const QuantumState& state,
                            const HamiltonianParams& p, double t) {
  return UnitaryPropagator(state.dim(), p).evolve(state, t);
}

QuantumState evolve_lindblad(const QuantumState& state,
                             const HamiltonianParams& p, const LossParams& loss,
                             double t, Direction direction) {
  if (t < 0) throw Error("evolve_lindblad: negative duration");
  const LindbladPropagator prop(state.dim(), p, loss, direction);
  CMatrix rho = prop.evolve(state.density(), t);
  rho = (rho + rho.adjoint()).eval() * 0.5;
  QuantumState out = QuantumState::mixed(std::move(rho));
  enforce_truncation(out, "evolve_lindblad");
  return out;
}

// ---- squeezing ----------------------------------------------------------------

MinVariance min_variance(const QuantumState& state) {
  const Eigen::Matrix2d g = quadrature_covariance(state);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g);
  const Eigen::Vector2d v = es.eigenvectors().col(0);
  double theta = std::atan2(v(1), v(0));
  if (theta < 0) theta += std::numbers::pi;
  if (theta >= std::numbers::pi) theta -= std::numbers::pi;
  return {es.eigenvalues()(0), theta};
}

SqueezingTrace squeezing_trace(FockDim dim, const HamiltonianParams& p,
                               std::span<const double> times) {
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw Error("squeezing_trace: time grid must be increasing");
    }
  }
  const UnitaryPropagator prop(dim, p);
  const CVector vac = QuantumState::vacuum(dim).ket();
  SqueezingTrace out;
  out.times.assign(times.begin(), times.end());
  out.v_min.reserve(times.size());
  out.theta_opt.reserve(times.size());
  for (double t : times) {
    const QuantumState psi = QuantumState::pure(prop.evolve_ket(vac, t));
    enforce_truncation(psi, "squeezing_trace");
    const MinVariance mv = min_variance(psi);
    out.v_min.push_back(mv.v_min);
    out.theta_opt.push_back(mv.theta_opt);
  }
  return out;
}

OptimalSqueezing optimal_squeezing(FockDim dim, const HamiltonianParams& p,
                                   double t_max, double refinement_tol,
                                   int grid_points) {
  if (!(t_max > 0) || grid_points < 3) {
    throw Error("optimal_squeezing: need t_max > 0 and at least 3 points");
  }
  const UnitaryPropagator prop(dim, p);
  const CVector vac = QuantumState::vacuum(dim).ket();
  auto v_at = [&](double t) {
    const QuantumState psi = QuantumState::pure(prop.evolve_ket(vac, t));
    enforce_truncation(psi, "optimal_squeezing");
    return min_variance(psi).v_min;
  };

  std::vector<double> grid(grid_points), values(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    grid[i] = t_max * i / (grid_points - 1);
    values[i] = v_at(grid[i]);
  }
  const auto best = std::min_element(values.begin(), values.end());
  const auto idx = std::distance(values.begin(), best);
  if (idx == 0 || idx == grid_points - 1) {
    throw NoInteriorMinimum(
        "optimal_squeezing: V_min is monotone on [0, t_max]; no interior "
        "minimum");
  }

  // Golden-section search on the bracketing grid cell pair.
  constexpr double invphi = 0.6180339887498949;
  double lo = grid[idx - 1];
  double hi = grid[idx + 1];
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = v_at(c);
  double fd = v_at(d);
  while (hi - lo > refinement_tol * grid[idx]) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = v_at(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = v_at(d);
    }
  }
  const double t_opt = 0.5 * (lo + hi);
  double v = v_at(t_opt);
  double t_best = t_opt;
  if (*best < v) {  // the grid point itself can win on flat minima
    v = *best;
    t_best = grid[idx];
  }
  return {1.0 / v, t_best, v};
}

}  // namespace kerr
