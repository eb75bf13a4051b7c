#include "kerr/convergence.hpp"

#include "kerr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace kerr {

double max_relative_change(const std::vector<double>& a,
                           const std::vector<double>& b, double abs_floor) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("max_relative_change: lists differ in length");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool na = std::isnan(a[i]);
    const bool nb = std::isnan(b[i]);
    if (na || nb) {
      if (na != nb) return std::numeric_limits<double>::infinity();
      continue;
    }
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), abs_floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

Converged converge_dim(
    const std::function<std::vector<double>(FockDim)>& evaluate,
    const ConvergencePolicy& policy) {
  if (policy.start_dim < 2 || policy.max_dim < policy.start_dim) {
    throw Error("ConvergencePolicy: need 2 <= start_dim <= max_dim");
  }
  std::optional<std::vector<double>> previous;
  double last_change = std::numeric_limits<double>::infinity();
  for (int d = policy.start_dim; d <= policy.max_dim; d *= 2) {
    std::vector<double> current;
    try {
      current = evaluate(FockDim(d));
    } catch (const TruncationError&) {
      previous.reset();
      continue;
    }
    if (previous) {
      last_change = max_relative_change(*previous, current, policy.abs_floor);
      if (last_change < policy.rel_tol) {
        return {std::move(current), FockDim(d), last_change};
      }
    }
    previous = std::move(current);
  }
  std::ostringstream os;
  os << "converge_dim: no agreement within " << policy.rel_tol
     << " up to dim " << policy.max_dim << " (last change " << last_change
     << ")";
  throw Error(os.str());
}

}  // namespace kerr
