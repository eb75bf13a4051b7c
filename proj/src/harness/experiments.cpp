#include "kerr/harness/experiments.hpp"

#include "kerr/errors.hpp"
#include "kerr/lindblad.hpp"
#include "kerr/metrology.hpp"
#include "kerr/wigner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numeric>
#include <thread>

namespace kerr::harness {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kCramerRaoSlack = 1e-6;
constexpr double kBoundaryThreshold = 0.05;
constexpr double kSnapshotKt = 0.4;
constexpr double kSnapshotGamma = 0.1;
constexpr double kSnapshotDisplacement = 0.5;
constexpr double kFig1KerrTable = 1.0;
constexpr double kFig1TimeLimit = 1.0;

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
// written by index; the first exception (by index) is rethrown.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(threads < 1 ? 1 : threads, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Evaluates at the configured dimension, or doubles it until every value
// returned by flatten agrees to the policy tolerance.
template <class T, class Eval, class Flatten>
std::pair<T, int> with_dim(const std::optional<int>& fixed,
                           const ConvergencePolicy& policy, Eval&& eval,
                           Flatten&& flatten) {
  if (fixed) return {eval(FockDim(*fixed)), *fixed};
  std::map<int, T> results;
  const Converged c = converge_dim(
      [&](FockDim d) {
        T r = eval(d);
        std::vector<double> flat = flatten(r);
        results.insert_or_assign(d.value(), std::move(r));
        return flat;
      },
      policy);
  return {std::move(results.at(c.dim.value())), c.dim.value()};
}

double or_nan(const std::optional<double>& v) { return v ? *v : kNaN; }

std::vector<double> flatten_metrics(const std::vector<PointMetrics>& ms) {
  std::vector<double> out;
  for (const PointMetrics& m : ms) {
    out.insert(out.end(), {m.photon_number, m.v_min, m.chi2inv_1, m.chi2inv_2,
                           or_nan(m.chi2inv_3), m.f_q, m.chi2inv_mai});
  }
  return out;
}

PointMetrics failed_metrics(std::string status, bool with_k3) {
  PointMetrics m{kNaN, kNaN, kNaN, kNaN, std::nullopt, kNaN, kNaN,
                 std::move(status)};
  if (with_k3) m.chi2inv_3 = kNaN;
  return m;
}

// Status for a failed evaluation; truncation is the common case.
std::string failure_status(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const TruncationError&) {
    return "truncated";
  } catch (const IntegratorError&) {
    return "integrator_failed";
  } catch (const Error& err) {
    const std::string what = err.what();
    if (what.rfind("converge_dim", 0) == 0) return "not_converged";
    return "failed";
  }
}

QuantumState hermitized_mixed(const CMatrix& rho) {
  return QuantumState::mixed((rho + rho.adjoint()) * 0.5);
}

double parabola_peak(const std::vector<double>& x, const std::vector<double>& y,
                     double& at) {
  std::size_t best = y.size();
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (std::isnan(y[i])) continue;
    if (best == y.size() || y[i] > y[best]) best = i;
  }
  if (best == y.size()) {
    at = kNaN;
    return kNaN;
  }
  at = x[best];
  if (best == 0 || best + 1 >= y.size() || std::isnan(y[best - 1]) ||
      std::isnan(y[best + 1])) {
    return y[best];
  }
  const double x0 = x[best - 1], x1 = x[best], x2 = x[best + 1];
  const double y0 = y[best - 1], y1 = y[best], y2 = y[best + 1];
  const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
  const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
  const double b =
      (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
  const double c = (x1 * x2 * (x1 - x2) * y0 + x2 * x0 * (x2 - x0) * y1 +
                    x0 * x1 * (x0 - x1) * y2) /
                   denom;
  if (!(a < 0)) return y[best];
  const double xv = -b / (2 * a);
  if (xv < x0 || xv > x2) return y[best];
  at = xv;
  return std::max(y[best], c - b * b / (4 * a));
}

}  // namespace

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = {
      "delta", "epsilon", "kerr", "gamma", "kt", "dim", "N",
      "v_min", "chi2inv_1", "chi2inv_2", "chi2inv_3", "f_q", "chi2inv_mai",
      "status"};
  return cols;
}

std::vector<PointMetrics> evaluate_series(FockDim dim, const HamiltonianParams& h,
                                          const LossParams& loss,
                                          const std::vector<double>& kts,
                                          const std::vector<double>& sigma2s,
                                          bool with_k3) {
  std::vector<std::size_t> order(kts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return kts[a] < kts[b]; });
  std::vector<double> sorted;
  for (std::size_t i : order) sorted.push_back(kts[i]);

  std::vector<QuantumState> states;
  states.reserve(kts.size());
  if (loss.gamma == 0.0) {
    const UnitaryPropagator prop(dim, h);
    const QuantumState vac = QuantumState::vacuum(dim);
    for (double t : sorted) states.push_back(prop.evolve(vac, t));
  } else {
    const LindbladPropagator prop(dim, h, loss, Direction::Forward);
    for (const CMatrix& rho :
         prop.trajectory(QuantumState::vacuum(dim).density(), sorted)) {
      QuantumState s = hermitized_mixed(rho);
      enforce_truncation(s, "evaluate_series");
      states.push_back(std::move(s));
    }
  }

  const MaiEvaluator mai(dim, h, loss);
  const std::vector<MaiMoments> mai_moments = mai.moments_series(states, sorted);
  std::vector<PointMetrics> out(kts.size() * sigma2s.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const QuantumState& state = states[k];
    const double n = mean_photon_number(state);
    const double v_min = min_variance(state).v_min;
    const double chi2 = moment_sensitivity(state, 2).value;
    std::optional<double> chi3;
    if (with_k3) chi3 = moment_sensitivity(state, 3).value;
    const double f_q = qfi_mixed(state).value;
    const MaiMoments& moments = mai_moments[k];
    for (std::size_t s = 0; s < sigma2s.size(); ++s) {
      const DetectionNoise noise{sigma2s[s]};
      PointMetrics m;
      m.photon_number = n;
      m.v_min = v_min;
      m.chi2inv_1 = noisy_linear_sensitivity(state, noise).value;
      m.chi2inv_2 = chi2;
      m.chi2inv_3 = chi3;
      m.f_q = f_q;
      const SensitivityReport r = mai_optimum(moments, noise);
      m.chi2inv_mai = r.value;
      if (!r.reliable) {
        m.status = "mai_unreliable";
      } else {
        const double top = std::max({m.chi2inv_1, m.chi2inv_2,
                                     chi3.value_or(0.0), m.chi2inv_mai});
        if (top > f_q + kCramerRaoSlack) m.status = "cramer_rao_violation";
      }
      out[order[k] * sigma2s.size() + s] = std::move(m);
    }
  }
  return out;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& c, const RunOptions& o) {
  struct Group {
    double delta, epsilon, kerr, gamma;
  };
  const auto deltas = c.delta.values();
  const auto epsilons = c.epsilon.values();
  const auto kerrs = c.kerr.values();
  const auto gammas = c.gamma.values();
  const auto kts = c.kt.values();
  const auto sigma2s = c.sigma2.values();

  std::vector<Group> groups;
  for (double d : deltas)
    for (double e : epsilons)
      for (double k : kerrs)
        for (double g : gammas) groups.push_back({d, e, k, g});

  const std::size_t per_group = kts.size() * sigma2s.size();
  std::vector<SweepRow> rows(groups.size() * per_group);
  parallel_for(groups.size(), o.threads, [&](std::size_t gi) {
    const Group& g = groups[gi];
    const HamiltonianParams h{g.delta, g.epsilon, g.kerr};
    const LossParams loss{g.gamma};
    std::vector<PointMetrics> metrics;
    int dim = c.dim.value_or(0);
    try {
      auto [m, d] = with_dim<std::vector<PointMetrics>>(
          c.dim, o.auto_policy,
          [&](FockDim fd) {
            return evaluate_series(fd, h, loss, kts, sigma2s, c.with_k3);
          },
          flatten_metrics);
      metrics = std::move(m);
      dim = d;
    } catch (const Error&) {
      metrics.assign(per_group,
                     failed_metrics(failure_status(std::current_exception()),
                                    c.with_k3));
    }
    for (std::size_t k = 0; k < kts.size(); ++k) {
      for (std::size_t s = 0; s < sigma2s.size(); ++s) {
        const std::size_t local = k * sigma2s.size() + s;
        rows[gi * per_group + local] = SweepRow{
            g.delta, g.epsilon, g.kerr, g.gamma, kts[k], sigma2s[s], dim,
            std::move(metrics[local])};
      }
    }
  });
  return rows;
}

Table sweep_table(const std::vector<SweepRow>& rows) {
  Table t{"", sweep_columns(), {}};
  // Rows with detection noise would be ambiguous under the fixed header, so
  // a trailing sigma2 column appears only when noise is part of the sweep.
  const bool noisy = std::any_of(rows.begin(), rows.end(),
                                 [](const SweepRow& r) { return r.sigma2 != 0.0; });
  if (noisy) t.columns.push_back("sigma2");
  for (const SweepRow& r : rows) {
    const Cell k3 = r.m.chi2inv_3 ? Cell(*r.m.chi2inv_3) : Cell();
    t.rows.push_back({r.delta, r.epsilon, r.kerr, r.gamma, r.kt, long(r.dim),
                      r.m.photon_number, r.m.v_min, r.m.chi2inv_1,
                      r.m.chi2inv_2, k3, r.m.f_q, r.m.chi2inv_mai, r.m.status});
    if (noisy) t.rows.back().push_back(r.sigma2);
  }
  return t;
}

// ---- scaling ----------------------------------------------------------------

ScalingFit scaling_fit(FockDim dim, const HamiltonianParams& h, double horizon,
                       int points, double window, double scan_step) {
  if (!(horizon > 0) || !(scan_step > 0) || points < 2 || !(window > 0) ||
      window > 1) {
    throw Error("scaling_fit: invalid horizon, step, point count or window");
  }
  const UnitaryPropagator prop(dim, h);
  const QuantumState vac = QuantumState::vacuum(dim);
  auto fq_at = [&](double t) { return qfi_mixed(prop.evolve(vac, t)).value; };

  // First local maximum on the scan grid, then golden-section refinement.
  double prev = fq_at(0.0);
  double cur = fq_at(scan_step);
  double t_peak = -1.0;
  const long steps = std::lround(horizon / scan_step);
  for (long k = 1; k < steps; ++k) {
    const double next = fq_at((k + 1) * scan_step);
    if (cur > prev && cur >= next) {
      t_peak = k * scan_step;
      break;
    }
    prev = cur;
    cur = next;
  }
  if (t_peak < 0) {
    throw NoInteriorMinimum("scaling_fit: F_Q has no maximum before the horizon");
  }
  constexpr double invphi = 0.6180339887498949;
  double lo = t_peak - scan_step, hi = t_peak + scan_step;
  double a = hi - invphi * (hi - lo), b = lo + invphi * (hi - lo);
  double fa = fq_at(a), fb = fq_at(b);
  while (hi - lo > 1e-9) {
    if (fa > fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - invphi * (hi - lo);
      fa = fq_at(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + invphi * (hi - lo);
      fb = fq_at(b);
    }
  }

  ScalingFit fit;
  fit.epsilon_over_k = h.kerr != 0.0 ? h.epsilon / h.kerr : kNaN;
  fit.fit_window = window;
  fit.t_first_max = 0.5 * (lo + hi);
  fit.dim = dim.value();
  for (int j = 1; j <= points; ++j) {
    const double t = fit.t_first_max * j / points;
    const QuantumState s = prop.evolve(vac, t);
    fit.times.push_back(t);
    fit.photon_numbers.push_back(mean_photon_number(s));
    fit.f_q.push_back(qfi_mixed(s).value);
  }
  const int in_window = static_cast<int>(std::ceil(window * points - 1e-9));
  if (in_window < 4) throw Error("scaling_fit: fewer than 4 points in the fit window");
  double num = 0.0, den = 0.0;
  for (int j = points - in_window; j < points; ++j) {
    num += fit.photon_numbers[j] * (fit.f_q[j] - 4.0);
    den += fit.photon_numbers[j] * fit.photon_numbers[j];
  }
  fit.slope = num / den;
  return fit;
}

// ---- loss robustness ----------------------------------------------------------------

LossMaxima loss_maxima(FockDim dim, const HamiltonianParams& h, double gamma,
                       const std::vector<double>& kts) {
  const auto series =
      evaluate_series(dim, h, LossParams{gamma}, kts, {0.0}, false);
  std::vector<double> chi, fq, mai;
  LossMaxima out;
  out.gamma = gamma;
  out.dim = dim.value();
  for (const PointMetrics& m : series) {
    chi.push_back(m.chi2inv_1);
    fq.push_back(m.f_q);
    mai.push_back(m.chi2inv_mai);
    if (m.status != "ok") out.status = m.status;
  }
  out.max_chi2inv_1 = parabola_peak(kts, chi, out.kt_chi2inv_1);
  out.max_f_q = parabola_peak(kts, fq, out.kt_f_q);
  out.max_chi2inv_mai = parabola_peak(kts, mai, out.kt_chi2inv_mai);
  return out;
}

// ---- experiments ----------------------------------------------------------------

ExperimentOutput run_custom(const ExperimentConfig& c, const RunOptions& o) {
  ExperimentOutput out;
  out.tables.push_back(sweep_table(run_sweep(c, o)));
  return out;
}

ExperimentOutput run_fig1(const ExperimentConfig& c, const RunOptions& o) {
  const auto kerrs = c.kerr.values();
  const auto kts = c.kt.values();
  const auto deltas = c.delta.values();
  const auto epsilons = c.epsilon.values();

  // V_min(t) traces at (delta, epsilon) = (0, 2) for each kerr value.
  struct Trace {
    std::vector<double> n, v_min;
  };
  std::vector<std::pair<Trace, int>> traces(kerrs.size());
  std::vector<std::string> trace_status(kerrs.size(), "ok");
  parallel_for(kerrs.size(), o.threads, [&](std::size_t i) {
    const HamiltonianParams h{0.0, 2.0, kerrs[i]};
    try {
      traces[i] = with_dim<Trace>(
          c.dim, o.auto_policy,
          [&](FockDim d) {
            const UnitaryPropagator prop(d, h);
            const QuantumState vac = QuantumState::vacuum(d);
            Trace tr;
            for (double t : kts) {
              const QuantumState s = prop.evolve(vac, t);
              tr.n.push_back(mean_photon_number(s));
              tr.v_min.push_back(min_variance(s).v_min);
            }
            return tr;
          },
          [](const Trace& tr) {
            std::vector<double> f = tr.n;
            f.insert(f.end(), tr.v_min.begin(), tr.v_min.end());
            return f;
          });
    } catch (const Error&) {
      trace_status[i] = failure_status(std::current_exception());
      traces[i] = {Trace{std::vector<double>(kts.size(), kNaN),
                         std::vector<double>(kts.size(), kNaN)},
                   c.dim.value_or(0)};
    }
  });
  Table main{"", sweep_columns(), {}};
  for (std::size_t i = 0; i < kerrs.size(); ++i) {
    for (std::size_t k = 0; k < kts.size(); ++k) {
      main.rows.push_back({0.0, 2.0, kerrs[i], 0.0, kts[k],
                           long(traces[i].second), traces[i].first.n[k],
                           traces[i].first.v_min[k], Cell(), Cell(), Cell(),
                           Cell(), Cell(), trace_status[i]});
    }
  }

  // Optimal squeezing over (delta, epsilon) at K = 1 with Kt <= 1.
  struct Opt {
    OptimalSqueezing s;
    int dim;
    std::string status;
  };
  std::vector<Opt> opts(deltas.size() * epsilons.size());
  parallel_for(opts.size(), o.threads, [&](std::size_t i) {
    const HamiltonianParams h{deltas[i / epsilons.size()],
                              epsilons[i % epsilons.size()], kFig1KerrTable};
    try {
      auto [s, d] = with_dim<OptimalSqueezing>(
          c.dim, o.auto_policy,
          [&](FockDim fd) { return optimal_squeezing(fd, h, kFig1TimeLimit); },
          [](const OptimalSqueezing& s) {
            return std::vector<double>{s.chi2inv_opt, s.t_opt};
          });
      opts[i] = {s, d, "ok"};
    } catch (const NoInteriorMinimum&) {
      opts[i] = {{kNaN, kNaN, kNaN}, c.dim.value_or(0), "no_interior_minimum"};
    } catch (const Error&) {
      opts[i] = {{kNaN, kNaN, kNaN}, c.dim.value_or(0),
                 failure_status(std::current_exception())};
    }
  });
  Table table{"_optimal",
              {"delta", "epsilon", "kerr", "chi2inv_opt", "t_opt", "v_min",
               "dim", "status"},
              {}};
  for (std::size_t i = 0; i < opts.size(); ++i) {
    table.rows.push_back({deltas[i / epsilons.size()],
                          epsilons[i % epsilons.size()], kFig1KerrTable,
                          opts[i].s.chi2inv_opt, opts[i].s.t_opt,
                          opts[i].s.v_min, long(opts[i].dim), opts[i].status});
  }

  ExperimentOutput out;
  out.tables.push_back(std::move(main));
  out.tables.push_back(std::move(table));
  return out;
}

ExperimentOutput run_fig2(const ExperimentConfig& c, const RunOptions& o) {
  const auto rows = run_sweep(c, o);
  ExperimentOutput out;
  out.tables.push_back(sweep_table(rows));
  Table boundary{"_boundary",
                 {"delta", "epsilon", "kerr", "kt", "fq_gap", "above_threshold",
                  "classical_epsilon"},
                 {}};
  for (const SweepRow& r : rows) {
    const double gap = (r.m.f_q - r.m.chi2inv_1) / r.m.f_q;
    const Cell flag = std::isnan(gap) ? Cell() : Cell(long(gap > kBoundaryThreshold));
    boundary.rows.push_back({r.delta, r.epsilon, r.kerr, r.kt, gap, flag,
                             std::abs(r.delta) / 2});
  }
  out.tables.push_back(std::move(boundary));
  return out;
}

namespace {

WignerSnapshot snapshot(const QuantumState& s, std::string suffix,
                        std::string label, const SensitivityReport& r) {
  return WignerSnapshot{std::move(suffix), std::move(label),
                        wigner(s, PhaseGrid{}), r.phi_opt,
                        r.theta_opt.value_or(kNaN)};
}

QuantumState prepared_state(FockDim dim, const HamiltonianParams& h,
                            double gamma, double t) {
  return prepare_state(MaiPreparation{h, t, LossParams{gamma}, dim, {}});
}

}  // namespace

ExperimentOutput run_fig3(const ExperimentConfig& c, const RunOptions& o) {
  ExperimentOutput out = run_custom(c, o);

  // MAI pipeline snapshots: prepared, displaced along the optimal generator,
  // and after the reversed evolution.
  const HamiltonianParams h{c.delta.values().front(), c.epsilon.values().front(),
                            c.kerr.values().front()};
  const FockDim dim(c.dim.value_or(o.auto_policy.start_dim));
  const LossParams loss{kSnapshotGamma};
  const QuantumState prepared = prepared_state(dim, h, kSnapshotGamma, kSnapshotKt);
  const SensitivityReport r =
      MaiEvaluator(dim, h, loss).evaluate(prepared, kSnapshotKt);
  const Operator gen =
      x_quadrature(dim) * cplx(std::cos(r.phi_opt)) +
      p_quadrature(dim) * cplx(std::sin(r.phi_opt));
  const QuantumState displaced = hermitized_mixed(
      transform(prepared, expm(cplx(0, -kSnapshotDisplacement) * gen.matrix()))
          .density());
  const QuantumState reversed =
      evolve_lindblad(displaced, h, loss, kSnapshotKt, Direction::Reversed);
  out.snapshots.push_back(snapshot(prepared, "_wigner_prepared", "prepared", r));
  out.snapshots.push_back(snapshot(displaced, "_wigner_displaced", "displaced", r));
  out.snapshots.push_back(snapshot(reversed, "_wigner_reversed", "reversed", r));
  return out;
}

ExperimentOutput run_scaling(const ExperimentConfig& c, const RunOptions& o) {
  const auto epsilons = c.epsilon.values();
  const double delta = c.delta.values().front();
  const double kerr = c.kerr.values().front();
  const double horizon = c.kt.values().back();
  std::vector<ScalingFit> fits(epsilons.size());
  std::vector<std::string> status(epsilons.size(), "ok");
  parallel_for(epsilons.size(), o.threads, [&](std::size_t i) {
    const HamiltonianParams h{delta, epsilons[i], kerr};
    try {
      fits[i] = with_dim<ScalingFit>(
                    c.dim, o.auto_policy,
                    [&](FockDim d) { return scaling_fit(d, h, horizon); },
                    [](const ScalingFit& f) {
                      return std::vector<double>{f.slope, f.t_first_max};
                    })
                    .first;
    } catch (const NoInteriorMinimum&) {
      status[i] = "no_maximum";
    } catch (const Error&) {
      status[i] = failure_status(std::current_exception());
    }
    if (status[i] != "ok") {
      fits[i].epsilon_over_k = epsilons[i] / kerr;
      fits[i].slope = kNaN;
      fits[i].t_first_max = kNaN;
    }
  });

  Table main{"",
             {"delta", "epsilon", "kerr", "a", "fit_window", "points",
              "t_first_max", "f_q_first_max", "N_first_max", "dim", "status"},
             {}};
  Table points{"_points", {"epsilon", "kt", "N", "f_q", "f_q_ideal"}, {}};
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const ScalingFit& f = fits[i];
    const bool ok = status[i] == "ok";
    main.rows.push_back({delta, epsilons[i], kerr, f.slope, f.fit_window,
                         long(f.times.size()), f.t_first_max,
                         ok ? Cell(f.f_q.back()) : Cell(),
                         ok ? Cell(f.photon_numbers.back()) : Cell(),
                         long(f.dim), status[i]});
    for (std::size_t j = 0; j < f.times.size(); ++j) {
      const double n = f.photon_numbers[j];
      points.rows.push_back({epsilons[i], f.times[j], n, f.f_q[j],
                             2.0 * (1.0 + 2.0 * n + 2.0 * std::sqrt(n * (n + 1.0)))});
    }
  }
  ExperimentOutput out;
  out.tables.push_back(std::move(main));
  out.tables.push_back(std::move(points));
  return out;
}

ExperimentOutput run_loss_robustness(const ExperimentConfig& c,
                                     const RunOptions& o) {
  const auto gammas = c.gamma.values();
  const auto kts = c.kt.values();
  const HamiltonianParams h{c.delta.values().front(), c.epsilon.values().front(),
                            c.kerr.values().front()};
  std::vector<LossMaxima> maxima(gammas.size());
  parallel_for(gammas.size(), o.threads, [&](std::size_t i) {
    try {
      maxima[i] = with_dim<LossMaxima>(
                      c.dim, o.auto_policy,
                      [&](FockDim d) { return loss_maxima(d, h, gammas[i], kts); },
                      [](const LossMaxima& m) {
                        return std::vector<double>{m.max_chi2inv_1, m.max_f_q,
                                                   m.max_chi2inv_mai};
                      })
                      .first;
    } catch (const Error&) {
      maxima[i] = LossMaxima{gammas[i], kNaN, kNaN, kNaN, kNaN, kNaN, kNaN,
                             c.dim.value_or(0),
                             failure_status(std::current_exception())};
    }
  });
  Table main{"",
             {"delta", "epsilon", "kerr", "gamma", "max_chi2inv_1", "kt_chi2inv_1",
              "max_f_q", "kt_f_q", "max_chi2inv_mai", "kt_chi2inv_mai", "sql",
              "dim", "status"},
             {}};
  for (const LossMaxima& m : maxima) {
    main.rows.push_back({h.delta, h.epsilon, h.kerr, m.gamma, m.max_chi2inv_1,
                         m.kt_chi2inv_1, m.max_f_q, m.kt_f_q, m.max_chi2inv_mai,
                         m.kt_chi2inv_mai, 2.0, long(m.dim), m.status});
  }
  ExperimentOutput out;
  out.tables.push_back(std::move(main));
  return out;
}

ExperimentOutput run_wigner(const ExperimentConfig& c, const RunOptions& o) {
  const HamiltonianParams h{c.delta.values().front(), c.epsilon.values().front(),
                            c.kerr.values().front()};
  const double gamma = c.gamma.values().front();
  const double t = c.kt.values().front();
  const FockDim dim(c.dim.value_or(o.auto_policy.start_dim));
  const QuantumState s = prepared_state(dim, h, gamma, t);
  const SensitivityReport r =
      MaiEvaluator(dim, h, LossParams{gamma}).evaluate(s, t);
  ExperimentOutput out;
  out.snapshots.push_back(snapshot(s, "", "prepared", r));
  return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& c, const RunOptions& o) {
  switch (c.experiment) {
    case Experiment::Fig1:
      return run_fig1(c, o);
    case Experiment::Fig2:
      return run_fig2(c, o);
    case Experiment::Fig3:
      return run_fig3(c, o);
    case Experiment::Scaling:
      return run_scaling(c, o);
    case Experiment::LossRobustness:
      return run_loss_robustness(c, o);
    case Experiment::Custom:
      return run_custom(c, o);
    case Experiment::Wigner:
      return run_wigner(c, o);
  }
  throw Error("unknown experiment");
}

}  // namespace kerr::harness
