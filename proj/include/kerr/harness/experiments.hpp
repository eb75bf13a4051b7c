#pragma once

// Named experiments. Each returns tables and snapshots ready for emit();
// grid points are evaluated in parallel and collected in grid order, so the
// output does not depend on the thread count.

#include "kerr/convergence.hpp"
#include "kerr/dynamics.hpp"
#include "kerr/harness/config.hpp"
#include "kerr/harness/emit.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kerr::harness {

/// Column order of the sweep tables.
const std::vector<std::string>& sweep_columns();

struct RunOptions {
  int threads = 1;
  /// Policy of dim = auto; the tolerance applies to every reported figure.
  ConvergencePolicy auto_policy{80, 640, 1e-5, 1e-12};
};

/// Figures of merit at one grid point.
struct PointMetrics {
  double photon_number = 0.0;
  double v_min = 0.0;
  double chi2inv_1 = 0.0;
  double chi2inv_2 = 0.0;
  std::optional<double> chi2inv_3;
  double f_q = 0.0;
  double chi2inv_mai = 0.0;
  std::string status = "ok";
};

struct SweepRow {
  double delta, epsilon, kerr, gamma, kt, sigma2;
  int dim;
  PointMetrics m;
};

/// Evaluates one Hamiltonian/loss setting at several times and noise
/// levels (row order: kt outer, sigma2 inner) at a fixed dimension.
std::vector<PointMetrics> evaluate_series(FockDim dim, const HamiltonianParams& h,
                                          const LossParams& loss,
                                          const std::vector<double>& kts,
                                          const std::vector<double>& sigma2s,
                                          bool with_k3);

/// Cartesian sweep over all axes (delta outer ... sigma2 inner).
std::vector<SweepRow> run_sweep(const ExperimentConfig& c, const RunOptions& o);
/// Rows in the sweep_columns() layout, plus a trailing sigma2 column when
/// any row carries detection noise.
Table sweep_table(const std::vector<SweepRow>& rows);

struct ScalingFit {
  double epsilon_over_k = 0.0;
  double slope = 0.0;
  double fit_window = 0.2;
  double t_first_max = 0.0;
  std::vector<double> photon_numbers;
  std::vector<double> f_q;
  std::vector<double> times;
  int dim = 0;
};

/// F_Q(t) of e^{-iHt}|0> up to its first maximum inside (0, horizon],
/// sampled at `points` equally spaced times, with the least-squares slope
/// of F_Q = a N + 4 over the last `window` fraction of points.
ScalingFit scaling_fit(FockDim dim, const HamiltonianParams& h, double horizon,
                       int points = 200, double window = 0.2,
                       double scan_step = 1e-3);

struct LossMaxima {
  double gamma = 0.0;
  double max_chi2inv_1 = 0.0, kt_chi2inv_1 = 0.0;
  double max_f_q = 0.0, kt_f_q = 0.0;
  double max_chi2inv_mai = 0.0, kt_chi2inv_mai = 0.0;
  int dim = 0;
  std::string status = "ok";
};

/// Maxima over the kt grid (refined by a parabola through the best three
/// grid points) of chi2inv_1, F_Q and chi2inv_mai.
LossMaxima loss_maxima(FockDim dim, const HamiltonianParams& h, double gamma,
                       const std::vector<double>& kts);

ExperimentOutput run_fig1(const ExperimentConfig& c, const RunOptions& o);
ExperimentOutput run_fig2(const ExperimentConfig& c, const RunOptions& o);
ExperimentOutput run_fig3(const ExperimentConfig& c, const RunOptions& o);
ExperimentOutput run_scaling(const ExperimentConfig& c, const RunOptions& o);
ExperimentOutput run_loss_robustness(const ExperimentConfig& c,
                                     const RunOptions& o);
ExperimentOutput run_custom(const ExperimentConfig& c, const RunOptions& o);
ExperimentOutput run_wigner(const ExperimentConfig& c, const RunOptions& o);

ExperimentOutput run_experiment(const ExperimentConfig& c, const RunOptions& o);

}  // namespace kerr::harness
