#include <kamkit/kam.hpp>

#include <cmath>
#include <sstream>

#include <kamkit/arithmetic.hpp>

namespace kamkit {

namespace {

using Coeff = ScaledSeries::Coeff;

MultiIndex zero_index(int dim) {
  return MultiIndex(std::vector<int>(dim, 0), std::vector<int>(dim, 0), 0);
}

ScaledSeries scale_parameter(const ScaledSeries& f, double tau) {
  if (tau == 1.0) return f;
  ScaledSeries out(f.dim(), f.mode(), f.trunc(), f.real_flag());
  for (const auto& [idx, a] : f.terms()) {
    out.set(idx, a * std::pow(tau, idx.tdeg));
  }
  return out;
}

std::string iteration_ledger(const ConvergenceReport& report) {
  std::ostringstream os;
  os << " [ledger:";
  for (const auto& r : report.iterations) {
    os << " e" << r.n << "=" << r.error << "@s=" << r.scale;
  }
  os << "]";
  return os.str();
}

}  // namespace

// --- hamiltonians -------------------------------------------------------

ScaledSeries TorusHamiltonian::assemble() const {
  const int n = static_cast<int>(alpha.size());
  if (remainder.dim() != n || remainder.mode() != PhaseMode::torus) {
    throw ShapeError("TorusHamiltonian: remainder must be a torus series of matching dimension");
  }
  if (beta.rows() != n || beta.cols() != n) {
    throw ShapeError("TorusHamiltonian: beta must be n x n");
  }
  if ((beta - beta.transpose()).norm() > 1e-14 * (1.0 + beta.norm())) {
    throw DomainError("TorusHamiltonian: beta must be symmetric");
  }
  for (const auto& [idx, a] : remainder.terms()) {
    if (idx.tdeg < 1) {
      throw DomainError("TorusHamiltonian: remainder must vanish at t = 0");
    }
  }
  ScaledSeries h = remainder;
  for (int i = 0; i < n; ++i) {
    MultiIndex lin = zero_index(n);
    lin.momentum[i] = 1;
    if (alpha(i) != 0.0) h.add_term(lin, alpha(i));
    for (int j = 0; j < n; ++j) {
      if (beta(i, j) == 0.0) continue;
      MultiIndex quad = zero_index(n);
      quad.momentum[i] += 1;
      quad.momentum[j] += 1;
      h.add_term(quad, beta(i, j));
    }
  }
  return h;
}

ScaledSeries SingularHamiltonian::assemble() const {
  const int n = static_cast<int>(omega.size());
  if (remainder.dim() != n || remainder.mode() != PhaseMode::singular) {
    throw ShapeError("SingularHamiltonian: remainder must be a singular series of matching dimension");
  }
  for (const auto& [idx, a] : remainder.terms()) {
    if (idx.fourier_abs() + idx.momentum_deg() < 3) {
      throw DomainError("SingularHamiltonian: remainder must have order >= 3");
    }
  }
  ScaledSeries h = remainder;
  for (int i = 0; i < n; ++i) {
    if (omega(i) == 0.0) continue;
    MultiIndex qp = zero_index(n);
    qp.fourier[i] = 1;
    qp.momentum[i] = 1;
    h.add_term(qp, omega(i));
  }
  return h;
}

// --- decomposition --------------------------------------------------------

ErrorDecomposition decompose_error(const ScaledSeries& x) {
  if (x.mode() != PhaseMode::torus) {
    throw ShapeError("decompose_error: torus mode only");
  }
  const int n = x.dim();
  ErrorDecomposition dec{
      ScaledSeries(n, x.mode(), x.trunc(), x.real_flag()),
      {},
      ScaledSeries(n, x.mode(), x.trunc(), x.real_flag()),
      ScaledSeries(n, x.mode(), x.trunc(), x.real_flag()),
      ScaledSeries(n, x.mode(), x.trunc(), x.real_flag())};
  dec.mean_linear.assign(
      static_cast<std::size_t>(n),
      ScaledSeries(n, x.mode(), x.trunc(), x.real_flag()));

  for (const auto& [idx, a] : x.terms()) {
    const int jdeg = idx.momentum_deg();
    if (jdeg >= 2) {
      dec.higher.set(idx, a);
    } else if (jdeg == 1) {
      if (idx.fourier_abs() == 0) {
        // coefficient series of p_i, stored as a pure parameter series
        int i = 0;
        while (idx.momentum[i] == 0) ++i;
        MultiIndex t_only = zero_index(n);
        t_only.tdeg = idx.tdeg;
        dec.mean_linear[static_cast<std::size_t>(i)].set(t_only, a);
      } else {
        dec.osc_linear.set(idx, a);
      }
    } else {  // jdeg == 0
      if (idx.fourier_abs() == 0) {
        dec.pure_t.set(idx, a);
      } else {
        dec.osc_const.set(idx, a);
      }
    }
  }
  return dec;
}

ScaledSeries ErrorDecomposition::reassemble(int dim, PhaseMode mode,
                                            Truncation trunc) const {
  ScaledSeries out(dim, mode, trunc);
  auto pour = [&out](const ScaledSeries& part) {
    for (const auto& [idx, a] : part.terms()) out.add_term(idx, a);
  };
  pour(pure_t);
  pour(osc_const);
  pour(osc_linear);
  pour(higher);
  for (int i = 0; i < dim; ++i) {
    for (const auto& [idx, a] : mean_linear[static_cast<std::size_t>(i)].terms()) {
      MultiIndex lifted = idx;
      lifted.momentum[i] = 1;
      out.add_term(lifted, a);
    }
  }
  return out;
}

// --- homological solves -----------------------------------------------------

ScaledSeries solve_homological_torus(const ScaledSeries& P,
                                     const Eigen::VectorXd& alpha,
                                     double divisor_floor) {
  if (P.mode() != PhaseMode::torus) {
    throw ShapeError("solve_homological_torus: torus mode only");
  }
  if (alpha.size() != P.dim()) {
    throw ShapeError("solve_homological_torus: frequency dimension mismatch");
  }
  if (divisor_floor < 0.0) {
    throw DomainError("solve_homological_torus: negative divisor floor");
  }
  ScaledSeries h(P.dim(), P.mode(), P.trunc(), P.real_flag());
  for (const auto& [idx, a] : P.terms()) {
    if (idx.fourier_abs() == 0) {
      throw ShapeError("solve_homological_torus: input has a nonzero q-mean at " +
                       idx.str());
    }
    double d = 0.0;
    for (int i = 0; i < P.dim(); ++i) d += alpha(i) * idx.fourier[i];
    if (std::abs(d) < divisor_floor || d == 0.0) {
      throw ResonanceError("solve_homological_torus: small divisor |("
                           "alpha,I)| = " + std::to_string(std::abs(d)) +
                               " at " + idx.str(),
                           idx.str());
    }
    // b = a / (i d): exact componentwise division plus swap
    h.set(idx, Coeff(a.imag() / d, -a.real() / d));
  }
  return h;
}

SingularSolveResult solve_homological_singular(const ScaledSeries& P,
                                               const Eigen::VectorXd& omega,
                                               double divisor_floor) {
  if (P.mode() != PhaseMode::singular) {
    throw ShapeError("solve_homological_singular: singular mode only");
  }
  if (omega.size() != P.dim()) {
    throw ShapeError("solve_homological_singular: frequency dimension mismatch");
  }
  SingularSolveResult out{ScaledSeries(P.dim(), P.mode(), P.trunc(), P.real_flag()),
                          ScaledSeries(P.dim(), P.mode(), P.trunc(), P.real_flag())};
  for (const auto& [idx, a] : P.terms()) {
    bool resonant = true;
    for (int i = 0; i < P.dim(); ++i) {
      resonant = resonant && idx.fourier[i] == idx.momentum[i];
    }
    if (resonant) {
      out.resonant_reject.set(idx, a);
      continue;
    }
    double d = 0.0;
    for (int i = 0; i < P.dim(); ++i) {
      d += omega(i) * (idx.fourier[i] - idx.momentum[i]);
    }
    if (std::abs(d) < divisor_floor || d == 0.0) {
      throw ResonanceError("solve_homological_singular: small divisor |("
                           "omega,I-J)| = " + std::to_string(std::abs(d)) +
                               " at " + idx.str(),
                           idx.str());
    }
    out.h.set(idx, a / d);
  }
  return out;
}

// --- frequency correction ---------------------------------------------------

HessianTSeries extract_hessian(const ScaledSeries& h_full, int max_tdeg) {
  if (h_full.mode() != PhaseMode::torus) {
    throw ShapeError("extract_hessian: torus mode only");
  }
  const int n = h_full.dim();
  HessianTSeries hess;
  hess.dim = n;
  hess.by_tdeg.assign(static_cast<std::size_t>(max_tdeg) + 1,
                      Eigen::MatrixXcd::Zero(n, n));
  for (const auto& [idx, a] : h_full.terms()) {
    if (idx.fourier_abs() != 0 || idx.momentum_deg() != 2 ||
        idx.tdeg > max_tdeg) {
      continue;
    }
    int i = -1, j = -1;
    for (int v = 0; v < n; ++v) {
      if (idx.momentum[v] == 2) {
        i = j = v;
      } else if (idx.momentum[v] == 1) {
        if (i < 0) {
          i = v;
        } else {
          j = v;
        }
      }
    }
    auto& m = hess.by_tdeg[static_cast<std::size_t>(idx.tdeg)];
    if (i == j) {
      m(i, i) += 2.0 * a;
    } else {
      m(i, j) += a;
      m(j, i) += a;
    }
  }
  return hess;
}

std::vector<ScaledSeries> frequency_correction(
    const std::vector<ScaledSeries>& mean_linear, const HessianTSeries& hess,
    double cond_cap) {
  const int n = hess.dim;
  if (static_cast<int>(mean_linear.size()) != n) {
    throw ShapeError("frequency_correction: mean vector has wrong length");
  }
  const auto& proto = mean_linear.front();
  const int max_tdeg = proto.trunc().max_tdeg;

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      hess.order0(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || sv(0) / smin > cond_cap) {
    throw NonDegeneracyError(
        "frequency_correction: Hessian at t = 0 is degenerate "
        "(condition number above cap)");
  }

  // order-by-order triangular solve in the t filtration
  std::vector<Eigen::VectorXcd> shift_by_k(
      static_cast<std::size_t>(max_tdeg) + 1, Eigen::VectorXcd::Zero(n));
  for (int k = 0; k <= max_tdeg; ++k) {
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < n; ++i) {
      MultiIndex t_only = zero_index(n);
      t_only.tdeg = k;
      rhs(i) = mean_linear[static_cast<std::size_t>(i)].at(t_only);
    }
    for (int j = 1; j <= k; ++j) {
      if (j >= static_cast<int>(hess.by_tdeg.size())) break;
      rhs -= hess.by_tdeg[static_cast<std::size_t>(j)] *
             shift_by_k[static_cast<std::size_t>(k - j)];
    }
    shift_by_k[static_cast<std::size_t>(k)] = svd.solve(rhs);
  }

  std::vector<ScaledSeries> shift(
      static_cast<std::size_t>(n),
      ScaledSeries(n, PhaseMode::torus, proto.trunc(), proto.real_flag()));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k <= max_tdeg; ++k) {
      const Coeff v = shift_by_k[static_cast<std::size_t>(k)](i);
      if (v == Coeff(0.0)) continue;
      MultiIndex t_only = zero_index(n);
      t_only.tdeg = k;
      shift[static_cast<std::size_t>(i)].set(t_only, v);
    }
  }
  return shift;
}

// --- torus Newton step ------------------------------------------------------

ScaledSeries torus_error_part(const ScaledSeries& H,
                              const Eigen::VectorXd& alpha) {
  const ErrorDecomposition dec = decompose_error(H);
  ScaledSeries err = add(dec.osc_const, dec.osc_linear);
  const int n = H.dim();
  for (int i = 0; i < n; ++i) {
    ScaledSeries dev = dec.mean_linear[static_cast<std::size_t>(i)];
    MultiIndex t0 = zero_index(n);
    dev.add_term(t0, -alpha(i));
    for (const auto& [idx, a] : dev.terms()) {
      MultiIndex lifted = idx;
      lifted.momentum[i] = 1;
      err.add_term(lifted, a);
    }
  }
  return err;
}

KamStepResult kam_step(const ScaledSeries& H, const Eigen::VectorXd& alpha,
                       double divisor_floor, const ScalePair& pair) {
  if (H.mode() != PhaseMode::torus) {
    throw ShapeError("kam_step: torus mode only");
  }
  const int n = H.dim();
  const ErrorDecomposition dec = decompose_error(H);

  ScaledSeries osc = add(dec.osc_const, dec.osc_linear);
  std::vector<ScaledSeries> mean_dev = dec.mean_linear;
  bool mean_zero = true;
  for (int i = 0; i < n; ++i) {
    MultiIndex t0 = zero_index(n);
    mean_dev[static_cast<std::size_t>(i)].add_term(t0, -alpha(i));
    mean_zero = mean_zero && mean_dev[static_cast<std::size_t>(i)].empty();
  }

  KamStepResult out{H,
                    ScaledSeries(n, PhaseMode::torus, H.trunc(), H.real_flag()),
                    {},
                    0.0,
                    0.0,
                    0.0,
                    0.0};
  out.shift.assign(static_cast<std::size_t>(n),
                   ScaledSeries(n, PhaseMode::torus, H.trunc(), H.real_flag()));
  out.error_before = norm_majorant(torus_error_part(H, alpha), pair.t);

  if (osc.empty() && mean_zero) {
    out.error_after = out.error_before;
    return out;  // nothing to do
  }

  if (!osc.empty()) {
    out.generator_h = solve_homological_torus(osc, alpha, divisor_floor);
  }
  if (!mean_zero) {
    const HessianTSeries hess = extract_hessian(H, H.trunc().max_tdeg);
    out.shift = frequency_correction(mean_dev, hess);
  }

  const LieGenerator xi =
      LieGenerator::with_shift(out.generator_h, out.shift).negated();
  LieExpResult flow = lie_exp(xi, H, pair);
  out.new_h = std::move(flow.y);
  out.lie_tail = flow.tail_bound;
  out.truncation_tail = flow.truncation_tail;
  out.error_after = norm_majorant(torus_error_part(out.new_h, alpha), pair.s);
  return out;
}

// --- torus run ---------------------------------------------------------------

NormalFormResult kam_run(const TorusHamiltonian& H, const ScaleSchedule& sched,
                         const KamRunOptions& options) {
  ScaledSeries current = H.assemble();
  if (options.t_value_scale != 1.0) {
    current = scale_parameter(current, options.t_value_scale);
  }
  const int n = current.dim();

  NormalFormResult out{{}, current, current, 0.0, {}, {}, {}};

  // Arithmetic certificate for the frequency vector (warn, don't block)
  // and the divisor floor it implies: every Fourier index in the box
  // satisfies |(alpha,I)| >= C ||I||^{-(n+nu)}, so the weakest such
  // bound over the truncation box, times a safety factor, is a valid
  // scalar floor for the homological solves.
  double divisor_floor = 0.0;
  {
    std::vector<double> av(H.alpha.data(), H.alpha.data() + H.alpha.size());
    try {
      const DiophantineCertificate cert =
          best_constant(av, options.nu, options.ncut);
      if (cert.C <= 0.0) {
        out.warnings.push_back(
            "frequency vector is resonant inside the certificate box");
      } else if (cert.C < 1e-6) {
        out.warnings.push_back(
            "frequency vector has a small Diophantine constant: C = " +
            std::to_string(cert.C));
      }
      const double imax =
          std::sqrt(static_cast<double>(n)) * current.trunc().max_fourier;
      divisor_floor = options.safety * cert.C /
                      std::pow(imax, static_cast<double>(n) + options.nu);
    } catch (const ResourceError&) {
      out.warnings.push_back("certificate box too large; skipped");
    }
  }

  // Non-degeneracy is a hard precondition.
  const HessianTSeries hess0 = extract_hessian(current, 0);
  {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(hess0.order0());
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || sv(0) / smin > options.cond_cap) {
      throw NonDegeneracyError("kam_run: momentum Hessian at t = 0 is degenerate");
    }
  }

  bool converged = false;
  for (int iter = 0; iter <= options.maxiter; ++iter) {
    const double s = sched.at(iter);
    const ScaledSeries err = torus_error_part(current, H.alpha);
    const double e = norm_majorant(err, s);
    out.report.iterations.push_back({iter, s, e, 0.0, 0.0});
    if (e <= options.tol) {
      converged = true;
      break;
    }
    if (iter == options.maxiter) break;

    ScaledSeries before_normal = sub(current, err);
    KamStepResult step = kam_step(current, H.alpha, divisor_floor, sched.pair(iter));
    current = step.new_h;
    out.transform_log.emplace_back(step.generator_h, step.shift);

    // transversal absorption this step
    const ScaledSeries after_err = torus_error_part(current, H.alpha);
    const ScaledSeries after_normal = sub(current, after_err);
    out.report.iterations.back().alpha_norm =
        norm_majorant(sub(after_normal, before_normal), sched.at(iter + 1));
  }

  out.report.converged = converged;
  finalize_report(out.report, options.rho, options.q, /*order_k=*/1, sched.l);
  out.final_h = current;
  out.residual_error = torus_error_part(current, H.alpha);
  out.residual_norm = norm_majorant(out.residual_error, sched.at(
      static_cast<int>(out.report.iterations.size()) - 1));

  if (!converged) {
    throw NonConvergenceError("kam_run: residual above tolerance after " +
                              std::to_string(options.maxiter) + " iterations" +
                              iteration_ledger(out.report));
  }
  return out;
}

// --- singular run --------------------------------------------------------------

ScaledSeries singular_error_part(const ScaledSeries& H) {
  if (H.mode() != PhaseMode::singular) {
    throw ShapeError("singular_error_part: singular mode only");
  }
  ScaledSeries err(H.dim(), H.mode(), H.trunc(), H.real_flag());
  for (const auto& [idx, a] : H.terms()) {
    if (in_transversal(idx, PhaseMode::singular)) continue;  // C + I^2
    bool diagonal = true;
    for (int i = 0; i < H.dim(); ++i) {
      diagonal = diagonal && idx.fourier[i] == idx.momentum[i];
    }
    if (diagonal) continue;  // bare q_i p_i: frequency drift, not killable
    err.set(idx, a);
  }
  return err;
}

std::vector<double> singular_frequency_drift(const ScaledSeries& H,
                                             const Eigen::VectorXd& omega) {
  std::vector<double> drift(static_cast<std::size_t>(H.dim()), 0.0);
  for (int i = 0; i < H.dim(); ++i) {
    MultiIndex qp = zero_index(H.dim());
    qp.fourier[i] = 1;
    qp.momentum[i] = 1;
    drift[static_cast<std::size_t>(i)] = (H.at(qp) - Coeff(omega(i))).real();
  }
  return drift;
}

NormalFormResult kam_singular_run(const SingularHamiltonian& H,
                                  const ScaleSchedule& sched,
                                  const KamRunOptions& options) {
  ScaledSeries current = H.assemble();
  const int n = current.dim();

  NormalFormResult out{{}, current, current, 0.0, {}, {}, {}};

  double divisor_floor = 0.0;
  {
    std::vector<double> ov(H.omega.data(), H.omega.data() + H.omega.size());
    try {
      const DiophantineCertificate cert =
          best_constant(ov, options.nu, options.ncut);
      if (cert.C <= 0.0) {
        out.warnings.push_back(
            "frequency vector is resonant inside the certificate box");
      }
      // eigenvalues involve I - J, whose norm can reach twice the box radius
      const double imax = 2.0 * std::sqrt(static_cast<double>(n)) *
                          std::max(current.trunc().max_fourier,
                                   current.trunc().max_momentum_deg);
      divisor_floor = options.safety * cert.C /
                      std::pow(imax, static_cast<double>(n) + options.nu);
    } catch (const ResourceError&) {
      out.warnings.push_back("certificate box too large; skipped");
    }
  }

  bool converged = false;
  for (int iter = 0; iter <= options.maxiter; ++iter) {
    const double s = sched.at(iter);
    const ScaledSeries err = singular_error_part(current);
    const double e = norm_majorant(err, s);
    out.report.iterations.push_back({iter, s, e, 0.0, 0.0});
    if (e <= options.tol) {
      converged = true;
      break;
    }
    if (iter == options.maxiter) break;

    const SingularSolveResult solved =
        solve_homological_singular(err, H.omega, divisor_floor);
    const LieGenerator xi = LieGenerator::hamiltonian(scaled(solved.h, -1.0));
    LieExpResult flow = lie_exp(xi, current, sched.pair(iter));
    current = std::move(flow.y);
    out.transform_log.emplace_back(solved.h, std::vector<ScaledSeries>{});
  }

  out.report.converged = converged;
  finalize_report(out.report, options.rho, options.q, /*order_k=*/1, sched.l);
  out.final_h = current;
  out.residual_error = singular_error_part(current);
  out.residual_norm = norm_majorant(out.residual_error, sched.at(
      static_cast<int>(out.report.iterations.size()) - 1));
  out.frequency_drift = singular_frequency_drift(current, H.omega);
  for (double d : out.frequency_drift) {
    if (std::abs(d) > options.tol) {
      out.warnings.push_back("frequency drift above tolerance: " +
                             std::to_string(d));
    }
  }

  if (!converged) {
    throw NonConvergenceError("kam_singular_run: residual above tolerance after " +
                              std::to_string(options.maxiter) + " iterations" +
                              iteration_ledger(out.report));
  }
  return out;
}

}  // namespace kamkit
