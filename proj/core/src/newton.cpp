#include <kamkit/newton.hpp>

#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace kamkit {

namespace {

std::vector<std::pair<double, double>> usable_pairs(
    const std::vector<IterationRecord>& records, double lo, double hi) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const double a = records[i].error;
    const double b = records[i + 1].error;
    if (a > lo && a < hi && b > lo && b < hi) out.emplace_back(a, b);
  }
  return out;
}

}  // namespace

double fit_quadratic_order(const std::vector<IterationRecord>& records,
                           double lo, double hi) {
  const auto pairs = usable_pairs(records, lo, hi);
  if (pairs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [a, b] : pairs) {
    const double x = std::log(a);
    const double y = std::log(b);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pairs.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double fit_quadratic_constant(const std::vector<IterationRecord>& records,
                              double lo, double hi) {
  const auto pairs = usable_pairs(records, lo, hi);
  if (pairs.empty()) return std::numeric_limits<double>::quiet_NaN();
  double k = 0.0;
  for (const auto& [a, b] : pairs) k = std::max(k, b / (a * a));
  return k;
}

void finalize_report(ConvergenceReport& report, double rho, double q,
                     int order_k, double l) {
  report.rho = rho;
  report.q = q;
  report.fitted_order = fit_quadratic_order(report.iterations);
  report.quadratic_constant = fit_quadratic_constant(report.iterations);
  report.envelope_pass = !report.iterations.empty();
  report.sufficient_condition_ok = true;
  double qn = 1.0;  // q^n
  for (auto& rec : report.iterations) {
    rec.envelope = std::pow(rho, qn);
    if (rec.error > rec.envelope) report.envelope_pass = false;
    const double cond =
        std::pow(2.0, order_k * (rec.n + 1) / l) * std::pow(rho, (2.0 - q) * qn);
    if (cond > 1.0) report.sufficient_condition_ok = false;
    qn *= q;
  }
}

// --- matrix model -------------------------------------------------------

namespace {

// Entrywise homological solve against the current diagonal; throws when
// a gap collapses.
Eigen::MatrixXcd solve_against_diagonal(const Eigen::MatrixXcd& A,
                                        double gap_floor) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXcd xi = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::complex<double> gap = A(j, j) - A(i, i);
      if (std::abs(gap) < gap_floor) {
        std::ostringstream os;
        os << "matrix diagonalization: eigenvalue gap between entries " << i
           << " and " << j << " collapsed (|gap| = " << std::abs(gap) << ")";
        throw ResonanceError(os.str(),
                             "(" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      xi(i, j) = A(i, j) / gap;
    }
  }
  return xi;
}

double offdiag_norm(const Eigen::MatrixXcd& A) {
  Eigen::MatrixXcd X = A;
  X.diagonal().setZero();
  return X.operatorNorm();
}

std::string ledger(const ConvergenceReport& report) {
  std::ostringstream os;
  os << " [ledger:";
  for (const auto& r : report.iterations) os << " e" << r.n << "=" << r.error;
  os << "]";
  return os.str();
}

}  // namespace

Eigen::MatrixXcd matrix_kolmogorov_step(const Eigen::MatrixXcd& A,
                                        double gap_floor) {
  const Eigen::MatrixXcd xi = solve_against_diagonal(A, gap_floor);
  const Eigen::MatrixXcd e_minus = (-xi).exp();
  const Eigen::MatrixXcd e_plus = xi.exp();
  return e_minus * A * e_plus;
}

MatrixKolmogorovResult diagonalize_kolmogorov(const Eigen::MatrixXcd& A,
                                              double tol, int maxiter,
                                              double gap_floor) {
  if (A.rows() != A.cols() || A.rows() < 1) {
    throw DomainError("diagonalize_kolmogorov: need a square matrix");
  }
  if (!(tol > 0.0)) throw DomainError("diagonalize_kolmogorov: tol must be positive");

  MatrixKolmogorovResult out;
  const Eigen::Index n = A.rows();
  out.g = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd current = A;

  bool converged = false;
  for (int iter = 0; iter <= maxiter; ++iter) {
    const double e = offdiag_norm(current);
    out.report.iterations.push_back({iter, 0.0, e, 0.0, 0.0});
    if (e <= tol) {
      converged = true;
      break;
    }
    if (iter == maxiter) break;
    const Eigen::MatrixXcd xi = solve_against_diagonal(current, gap_floor);
    const Eigen::MatrixXcd e_minus = (-xi).exp();
    const Eigen::MatrixXcd e_plus = xi.exp();
    current = e_minus * current * e_plus;
    out.g = out.g * e_plus;
  }
  out.report.converged = converged;

  // Envelope with the measured quadratic constant: when e_{n+1} <= K e_n^2
  // the closed form e_n <= rho^{2^n} holds for rho = max(K, 1) e_0.
  const double e0 = out.report.iterations.front().error;
  const double k = fit_quadratic_constant(out.report.iterations);
  const double rho =
      std::min(0.99, std::isnan(k) ? e0 : e0 * std::max(1.0, k));
  finalize_report(out.report, std::max(rho, 1e-300), 2.0, /*order_k=*/1,
                  /*l=*/4.0);

  if (!converged) {
    throw NonConvergenceError(
        "matrix diagonalization did not reach tol within " +
        std::to_string(maxiter) + " iterations" + ledger(out.report));
  }

  out.final = current;
  out.eigenvalues = current.diagonal();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.g);
  out.cond_g = svd.singularValues()(0) /
               svd.singularValues()(svd.singularValues().size() - 1);
  return out;
}

}  // namespace kamkit
