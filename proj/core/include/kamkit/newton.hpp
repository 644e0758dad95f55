// kamkit :: quadratically convergent iteration drivers.
//
// The finite-dimensional model is matrix diagonalization by repeated
// exponential conjugation; the generic drivers run a caller-supplied
// Newton update x -> j(Bf(x)) down a declining scale schedule and
// certify the super-exponential error envelope.
#ifndef KAMKIT_NEWTON_HPP
#define KAMKIT_NEWTON_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include <kamkit/errors.hpp>
#include <kamkit/scale.hpp>

namespace kamkit {

/// Declining scale schedule with steps proportional to 2^{-n/l},
/// normalised to start at t and accumulate to the positive floor:
///     s_n = floor + (t - floor) 2^{-n/l}.
struct ScaleSchedule {
  double t;
  double l;
  double floor;

  ScaleSchedule(double t_, double l_, double floor_)
      : t(t_), l(l_), floor(floor_) {
    require_scale(t, "ScaleSchedule");
    if (!(l > 0.0)) throw DomainError("ScaleSchedule: l must be positive");
    if (!(floor > 0.0 && floor < t)) {
      throw DomainError("ScaleSchedule: floor must lie in (0, t)");
    }
  }

  double at(int n) const {
    return floor + (t - floor) * std::pow(2.0, -static_cast<double>(n) / l);
  }

  /// Two-scale pair consumed by step n: produce at s_{n+1} from s_n.
  ScalePair pair(int n) const { return ScalePair(at(n + 1), at(n)); }
};

struct IterationRecord {
  int n = 0;
  double scale = 0.0;
  double error = 0.0;
  double alpha_norm = 0.0;  // transversal shift, when applicable
  double envelope = 0.0;    // rho^{q^n}
};

/// Everything measured about one iteration run.  Verdicts are computed,
/// never enforced: a run that keeps contracting but misses the declared
/// envelope still returns normally with envelope_pass == false.
struct ConvergenceReport {
  std::vector<IterationRecord> iterations;
  double rho = 0.0;
  double q = 2.0;
  double fitted_order = std::numeric_limits<double>::quiet_NaN();
  double quadratic_constant = std::numeric_limits<double>::quiet_NaN();
  bool envelope_pass = false;
  bool sufficient_condition_ok = false;
  bool basin_ok = true;
  bool budget_ok = true;
  bool converged = false;
};

/// Least-squares slope of log e_{n+1} against log e_n over the
/// pre-saturation window [lo, hi]; NaN when fewer than two usable pairs.
double fit_quadratic_order(const std::vector<IterationRecord>& records,
                           double lo = 5e-14, double hi = 0.5);

/// max e_{n+1} / e_n^2 over the same window; NaN when no usable pair.
double fit_quadratic_constant(const std::vector<IterationRecord>& records,
                              double lo = 5e-14, double hi = 0.5);

/// Fills envelope values and the pass flags of a report whose
/// iteration list is already populated.
void finalize_report(ConvergenceReport& report, double rho, double q,
                     int order_k, double l);

// --- matrix model -------------------------------------------------------

struct MatrixKolmogorovResult {
  Eigen::MatrixXcd g;            // accumulated conjugation, g^{-1} A g = final
  Eigen::MatrixXcd final;        // diagonal up to `tol`
  Eigen::VectorXcd eigenvalues;  // diagonal of `final`
  double cond_g = 0.0;
  ConvergenceReport report;
};

/// Diagonalize A = D + X by the exponential-conjugation iteration:
/// solve [xi, D] = X entrywise (xi_ij = X_ij / (d_j - d_i)), replace
/// A by e^{-xi} A e^{xi}, repeat.  Quadratic convergence while the
/// eigenvalue gaps stay above gap_floor.
///
/// Throws ResonanceError when a diagonal gap collapses and
/// NonConvergenceError when maxiter is exhausted; the exception message
/// carries the iteration ledger.
MatrixKolmogorovResult diagonalize_kolmogorov(const Eigen::MatrixXcd& A,
                                              double tol = 1e-12,
                                              int maxiter = 30,
                                              double gap_floor = 1e-10);

/// One conjugation step of the matrix model, exposed so generic drivers
/// can reproduce the exact update: returns e^{-xi} A e^{xi} with xi the
/// entrywise homological solve against diag(A).
Eigen::MatrixXcd matrix_kolmogorov_step(const Eigen::MatrixXcd& A,
                                        double gap_floor = 1e-10);

// --- generic drivers ------------------------------------------------------

template <class State>
using NewtonStep = std::function<State(const State&, const ScalePair&)>;
template <class State>
using NormAt = std::function<double(const State&, double)>;

/// Homogeneous fixed point: x_{n+1} = step(x_n) between the scheduled
/// scales, stopping at stop_tol.  `step` realizes the update
/// x -> j(Bf(x)) for a k-bounded right inverse j and a second-order
/// remainder series f; k enters only the reported sufficient condition
/// 2^{k(n+1)/l} rho^{(2-q) q^n} <= 1.
///
/// Basin violation (|x_0|_{s_0}^2 > rho) is a diagnostic, not a failure.
template <class State>
ConvergenceReport iterate_homogeneous(const NewtonStep<State>& step,
                                      const NormAt<State>& norm_at,
                                      State x0, const ScaleSchedule& sched,
                                      double q, double rho, int k,
                                      double stop_tol, int maxiter) {
  if (!(q > 1.0 && q < 2.0) && q != 2.0) {
    throw DomainError("iterate_homogeneous: q must lie in (1, 2]");
  }
  if (!(rho > 0.0 && rho < 1.0)) {
    throw DomainError("iterate_homogeneous: rho must lie in (0, 1)");
  }
  ConvergenceReport report;
  report.rho = rho;
  report.q = q;
  State x = std::move(x0);
  double e0 = norm_at(x, sched.at(0));
  report.basin_ok = e0 * e0 <= rho;
  for (int n = 0; n <= maxiter; ++n) {
    const double s = sched.at(n);
    const double e = norm_at(x, s);
    report.iterations.push_back({n, s, e, 0.0, 0.0});
    if (e <= stop_tol) {
      report.converged = true;
      break;
    }
    if (n == maxiter) break;
    x = step(x, sched.pair(n));
  }
  finalize_report(report, rho, q, k, sched.l);
  return report;
}

/// Parametric fixed point: (a, x) -> step(a, x) tracking the error
/// |x_n| and the transversal drift sum ||a_{n+1} - a_n||.  The budget
/// |a_n| <= |a_0| + R sum_i rho^{2^i} < R is recorded in budget_ok.
template <class TransversalState, class State>
ConvergenceReport iterate_parametric(
    const std::function<std::pair<TransversalState, State>(
        const TransversalState&, const State&, const ScalePair&)>& step,
    const NormAt<TransversalState>& norm_a, const NormAt<State>& norm_x,
    const std::function<double(const TransversalState&,
                               const TransversalState&, double)>& dist_a,
    TransversalState a0, State x0, const ScaleSchedule& sched, double rho,
    double q, double R, double stop_tol, int maxiter) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw DomainError("iterate_parametric: rho must lie in (0, 1)");
  }
  if (!(R > 0.0)) throw DomainError("iterate_parametric: R must be positive");
  ConvergenceReport report;
  report.rho = rho;
  report.q = q;
  TransversalState a = std::move(a0);
  State x = std::move(x0);
  report.basin_ok = norm_x(x, sched.at(0)) <= rho &&
                    norm_a(a, sched.at(0)) <= R / 2.0;
  double drift_budget = 0.0;
  {
    double rp = rho;
    for (int i = 0; i < 64 && rp > 1e-300; ++i) {
      drift_budget += rp;
      rp *= rp;
    }
    drift_budget *= R;
  }
  double drift = 0.0;
  for (int n = 0; n <= maxiter; ++n) {
    const double s = sched.at(n);
    const double e = norm_x(x, s);
    report.iterations.push_back({n, s, e, 0.0, 0.0});
    const double an = norm_a(a, s);
    if (an > R / 2.0 + drift_budget || drift > drift_budget) {
      report.budget_ok = false;
    }
    if (e <= stop_tol) {
      report.converged = true;
      break;
    }
    if (n == maxiter) break;
    auto [a_next, x_next] = step(a, x, sched.pair(n));
    const double alpha = dist_a(a_next, a, sched.at(n + 1));
    report.iterations.back().alpha_norm = alpha;
    drift += alpha;
    a = std::move(a_next);
    x = std::move(x_next);
  }
  finalize_report(report, rho, q, /*order_k=*/1, sched.l);
  return report;
}

}  // namespace kamkit

#endif  // KAMKIT_NEWTON_HPP
