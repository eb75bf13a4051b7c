#include "kerr/wigner.hpp"

#include "kerr/errors.hpp"
#include "kerr/log.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace kerr {
namespace {

constexpr double kBoundaryWarn = 1e-4;
// Coherences scale like the square root of the dropped population, so the
// cut has to sit far below the target accuracy.
constexpr double kSupportTail = 1e-30;

// Smallest dimension that holds all but kSupportTail of the population.
int effective_dim(const QuantumState& state) {
  const RVector pop = state.populations();
  double tail = 0.0;
  int n = static_cast<int>(pop.size());
  while (n > 2 && tail + std::max(0.0, pop(n - 1)) < kSupportTail) {
    tail += std::max(0.0, pop(n - 1));
    --n;
  }
  return n;
}

// Levels needed to represent a displacement of magnitude a without
// touching the truncation edge.
int displacement_margin(double a) {
  return static_cast<int>(std::ceil(a * a + 8.0 * a + 16.0));
}

// Conjugation by exp(-i s A) for many s, from one eigendecomposition of the
// Hermitian A = V diag(l) V^dag:
//   exp(-i s A) M exp(i s A) = V (e^{-i s l} o M~ o e^{i s l}) V^dag,
// with M~ = V^dag M V computed once.
class Conjugator {
 public:
  Conjugator(const CMatrix& a, const CMatrix& m, int rows)
      : es_(a), rows_(rows) {
    const CMatrix& v = es_.eigenvectors();
    rotated_ = v.adjoint() * m * v;
    top_ = v.topRows(rows);
  }
  // Top-left rows x rows block of exp(-i s A) M exp(i s A).
  CMatrix block(double s) const {
    const Eigen::Index d = rotated_.rows();
    CVector ph(d);
    for (Eigen::Index k = 0; k < d; ++k) {
      ph(k) = std::polar(1.0, -s * es_.eigenvalues()(k));
    }
    const CMatrix inner = ph.asDiagonal() * rotated_ * ph.conjugate().asDiagonal();
    return top_ * inner * top_.adjoint();
  }

 private:
  Eigen::SelfAdjointEigenSolver<CMatrix> es_;
  int rows_;
  CMatrix rotated_;
  CMatrix top_;
};

}  // namespace

void PhaseGrid::validate() const {
  if (!(x_min < x_max) || !(p_min < p_max)) {
    throw Error("PhaseGrid: ranges need min < max");
  }
  if (nx < 8 || np < 8) throw Error("PhaseGrid: nx and np must be >= 8");
}

double WignerGrid::integral() const { return w.sum() * grid.dx() * grid.dp(); }

RVector WignerGrid::x_marginal() const { return w.rowwise().sum() * grid.dp(); }

WignerGrid wigner(const QuantumState& state, const PhaseGrid& grid) {
  grid.validate();
  const double ax = std::max(std::abs(grid.x_min), std::abs(grid.x_max));
  const double ap = std::max(std::abs(grid.p_min), std::abs(grid.p_max));
  const int n_eff = effective_dim(state);
  // Dx^dag rho Dx lives on the first `support` levels; Dp Pi Dp^dag is only
  // needed on that block, computed with room for the second displacement.
  const int support = n_eff + displacement_margin(ax / std::sqrt(2.0));
  const FockDim work(support + displacement_margin(ap / std::sqrt(2.0)));

  // Trim to the support, then pad to the working dimension.
  CMatrix rho = CMatrix::Zero(work.value(), work.value());
  rho.topLeftCorner(n_eff, n_eff) =
      state.density().topLeftCorner(n_eff, n_eff);

  // D(alpha) = D(x/sqrt2) D(i p/sqrt2) up to a phase, with
  // D(x/sqrt2) = exp(-i x P) and D(i p/sqrt2) = exp(i p X). Then
  //   Tr[D^dag rho D Pi] = Tr[(Dx^dag rho Dx) (Dp Pi Dp^dag)],
  // which for all grid points is one matrix product of flattened blocks.
  const CMatrix par = parity(work).matrix();
  // Dx^dag rho Dx = exp(i x P) rho exp(-i x P); Dp Pi Dp^dag with
  // Dp = exp(i p X).
  const Conjugator shift_x(p_quadrature(work).matrix(), rho, support);
  const Conjugator shift_p(x_quadrature(work).matrix(), par, support);
  const Eigen::Index block = Eigen::Index(support) * support;

  CMatrix shifted(grid.nx, block);
  for (int i = 0; i < grid.nx; ++i) {
    const CMatrix moved = shift_x.block(-grid.x(i));
    shifted.row(i) = Eigen::Map<const CVector>(moved.data(), block).transpose();
  }
  CMatrix parity_shifted(block, grid.np);
  for (int j = 0; j < grid.np; ++j) {
    // Transposed so the trace becomes a plain dot product.
    const CMatrix q = shift_p.block(-grid.p(j)).transpose();
    parity_shifted.col(j) = Eigen::Map<const CVector>(q.data(), block);
  }
  WignerGrid out{grid, (shifted * parity_shifted).real() / std::numbers::pi};

  double edge = 0.0;
  for (int i = 0; i < grid.nx; ++i) {
    edge = std::max({edge, std::abs(out.w(i, 0)),
                     std::abs(out.w(i, grid.np - 1))});
  }
  for (int j = 0; j < grid.np; ++j) {
    edge = std::max({edge, std::abs(out.w(0, j)),
                     std::abs(out.w(grid.nx - 1, j))});
  }
  if (edge > kBoundaryWarn) {
    std::ostringstream os;
    os << "wigner: |W| = " << edge
       << " on the grid boundary; the grid does not cover the state";
    warn(os.str());
  }
  return out;
}

double wigner_at(const QuantumState& state, double x, double p) {
  const double a = std::hypot(x, p) / std::sqrt(2.0);
  const FockDim work(state.dim().value() + 2 * displacement_margin(a));
  const QuantumState padded = embed(state, work);
  const cplx alpha(x / std::sqrt(2.0), p / std::sqrt(2.0));
  const CMatrix d = displacement(work, alpha).matrix();
  const CMatrix moved = d.adjoint() * padded.density() * d;
  const RVector par = parity(work).matrix().diagonal().real();
  return (moved.diagonal().real().cwiseProduct(par)).sum() / std::numbers::pi;
}

}  // namespace kerr
