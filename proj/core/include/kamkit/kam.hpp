// kamkit :: invariant-torus iteration and singular normal forms.
//
// Torus problem: H(t,q,p) = sum alpha_i p_i + p.beta p + R(t,q,p) with
// R divisible by t.  Each Newton step classifies the deviation from the
// normal form alpha.p mod (I^2 + C{t}), kills the oscillating part by a
// Hamiltonian generator obtained from the small-divisor solve, kills
// the averaged p-linear part by a t-dependent momentum translation
// obtained from the Hessian (the non-degeneracy hypothesis), and
// conjugates the full Hamiltonian by the Lie exponential of the
// combined generator.
//
// Singular problem: H = sum omega_i q_i p_i + R with R of order >= 3 at
// the origin; the bracket acts diagonally on monomials with eigenvalue
// (omega, I - J) and the same Newton loop drives the error into C + I^2.
#ifndef KAMKIT_KAM_HPP
#define KAMKIT_KAM_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include <kamkit/newton.hpp>
#include <kamkit/operators.hpp>
#include <kamkit/series.hpp>

namespace kamkit {

struct TorusHamiltonian {
  Eigen::VectorXd alpha;   // frequency vector
  Eigen::MatrixXd beta;    // symmetric quadratic form; Hessian/2 at p=0, t=0
  ScaledSeries remainder;  // R(t,q,p), every term divisible by t

  /// alpha.p + p.beta p + R as one series.
  ScaledSeries assemble() const;
};

struct SingularHamiltonian {
  Eigen::VectorXd omega;
  ScaledSeries remainder;  // order >= 3 at the origin

  /// sum omega_i q_i p_i + R.
  ScaledSeries assemble() const;
};

/// Exact partition of a torus-mode series by ideal class and Fourier
/// mean; the five parts sum back to the input coefficientwise.
struct ErrorDecomposition {
  ScaledSeries pure_t;                    // I = 0, J = 0
  std::vector<ScaledSeries> mean_linear;  // per i: t-series coefficient of p_i at I = 0
  ScaledSeries osc_const;                 // I != 0, J = 0
  ScaledSeries osc_linear;                // I != 0, |J| = 1
  ScaledSeries higher;                    // |J| >= 2

  ScaledSeries reassemble(int dim, PhaseMode mode, Truncation trunc) const;
};

ErrorDecomposition decompose_error(const ScaledSeries& x);

/// Solve {sum alpha_i p_i, h} = P on the truncated lattice:
/// h coefficients are b(I,J,k) = a(I,J,k) / (i (alpha, I)).
/// Requires zero q-mean; throws ResonanceError (naming the index) when
/// some |(alpha, I)| < divisor_floor.
ScaledSeries solve_homological_torus(const ScaledSeries& P,
                                     const Eigen::VectorXd& alpha,
                                     double divisor_floor);

/// Hessian of a torus Hamiltonian in the p variables at p = 0, averaged
/// over q, order by order in t.
struct HessianTSeries {
  int dim = 0;
  std::vector<Eigen::MatrixXcd> by_tdeg;  // index = power of t

  const Eigen::MatrixXcd& order0() const { return by_tdeg.at(0); }
};

HessianTSeries extract_hessian(const ScaledSeries& h_full, int max_tdeg);

/// Solve Hess(t) shift(t) = mean(t) order by order in t up to max_tdeg.
/// Throws NonDegeneracyError when the t = 0 Hessian is singular (or its
/// condition number exceeds cond_cap).
std::vector<ScaledSeries> frequency_correction(
    const std::vector<ScaledSeries>& mean_linear, const HessianTSeries& hess,
    double cond_cap = 1e12);

/// Everything one torus Newton step produces.
struct KamStepResult {
  ScaledSeries new_h;               // conjugated Hamiltonian
  ScaledSeries generator_h;         // Hamiltonian part of the generator
  std::vector<ScaledSeries> shift;  // momentum translation part
  double error_before = 0.0;        // |error|_t before the step
  double error_after = 0.0;         // |error|_s after the step
  double lie_tail = 0.0;            // Lie series tail budget
  double truncation_tail = 0.0;     // majorant mass lost to the box
};

/// The part of H obstructing the normal form: oscillating terms with
/// |J| <= 1 plus the averaged p-linear deviation from alpha.
ScaledSeries torus_error_part(const ScaledSeries& H,
                              const Eigen::VectorXd& alpha);

KamStepResult kam_step(const ScaledSeries& H, const Eigen::VectorXd& alpha,
                       double divisor_floor, const ScalePair& pair);

/// Transcript of a completed normal-form run.
struct NormalFormResult {
  std::vector<std::pair<ScaledSeries, std::vector<ScaledSeries>>> transform_log;
  ScaledSeries final_h;
  ScaledSeries residual_error;      // obstruction part of final_h
  double residual_norm = 0.0;       // its majorant norm at the final scale
  std::vector<double> frequency_drift;  // singular runs: generated q_i p_i drift
  ConvergenceReport report;
  std::vector<std::string> warnings;
};

struct KamRunOptions {
  double tol = 1e-10;
  int maxiter = 12;
  double rho = 0.5;          // envelope base for the report
  double q = 2.0;            // envelope exponent
  double safety = 0.5;       // divisor floor = safety * C / ||I||_max^{n+nu}
  double nu = 1.0;           // Diophantine exponent used for the certificate
  long long ncut = 200;      // certificate search radius
  double cond_cap = 1e12;    // Hessian condition cap
  double t_value_scale = 1.0;  // rescales the parameter weight (t -> tau t)
};

/// Run the torus iteration on the schedule until the obstruction norm
/// drops below tol.  Throws NonDegeneracyError up front when the t=0
/// Hessian is degenerate, ResonanceError from the homological solve,
/// and NonConvergenceError when maxiter is exhausted.
NormalFormResult kam_run(const TorusHamiltonian& H, const ScaleSchedule& sched,
                         const KamRunOptions& options = {});

/// Singular homological solve: divides by (omega, I - J) off the
/// diagonal; diagonal monomials (I == J) are returned separately as the
/// resonant part, so that {H0, h} = P - resonant_reject exactly.
struct SingularSolveResult {
  ScaledSeries h;
  ScaledSeries resonant_reject;
};
SingularSolveResult solve_homological_singular(const ScaledSeries& P,
                                               const Eigen::VectorXd& omega,
                                               double divisor_floor);

/// The singular obstruction: everything outside C + I^2 + {q_i p_i}.
ScaledSeries singular_error_part(const ScaledSeries& H);

/// Generated bare q_i p_i coefficients minus omega (frequency drift).
std::vector<double> singular_frequency_drift(const ScaledSeries& H,
                                             const Eigen::VectorXd& omega);

NormalFormResult kam_singular_run(const SingularHamiltonian& H,
                                  const ScaleSchedule& sched,
                                  const KamRunOptions& options = {});

}  // namespace kamkit

#endif  // KAMKIT_KAM_HPP
