#pragma once

// Truncation policy: evaluate at a starting dimension, double it, and accept
// once every monitored value agrees between consecutive dimensions.

#include "kerr/fock.hpp"

#include <functional>
#include <vector>

namespace kerr {

struct ConvergencePolicy {
  int start_dim = 80;
  int max_dim = 640;
  double rel_tol = 1e-8;
  /// Values smaller than this in magnitude are compared absolutely.
  double abs_floor = 1e-12;
};

struct Converged {
  std::vector<double> values;  // at the accepted (larger) dimension
  FockDim dim;
  double max_rel_change;
};

/// Largest relative change between two equally long value lists; NaN
/// entries must coincide.
double max_relative_change(const std::vector<double>& a,
                           const std::vector<double>& b, double abs_floor);

/// Throws kerr::Error when max_dim is reached without agreement. Truncation
/// errors at small dimensions are treated as "not yet converged".
Converged converge_dim(
    const std::function<std::vector<double>(FockDim)>& evaluate,
    const ConvergencePolicy& policy = {});

}  // namespace kerr
