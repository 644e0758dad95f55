// kamkit :: truncated Fourier-Taylor series with scale-indexed norms.
//
// A ScaledSeries is a sparse coefficient map over monomials q^I p^J t^k.
// It stands in for an analytic germ on the two supported phase spaces:
//
//   torus mode    -- I in Z^n; the s-domain is the product of geometric
//                    annuli e^{-s} <= |q_i| <= e^{s}, the momentum
//                    polydisk |p_i| <= s and the parameter disk
//                    |t| <= s^2.
//   singular mode -- I in N^n, no parameter; the s-domain is the
//                    polydisk |q_i| <= s, |p_i| <= s.
//
// Norms are weighted-l1 majorants: |f|_s = sum |a| w_s(index) with
//   torus:    w_s(I,J,k) = e^{s|I|_1} s^{|J|_1} s^{2k}
//   singular: w_s(I,J)   = s^{|I|_1+|J|_1}.
// The majorant dominates the sup norm on the s-domain, is
// submultiplicative, non-decreasing in s, and satisfies the two-scale
// Cauchy inequalities |q_i d/dq_i f|_s <= |f|_t / (e(t-s)) and
// |d/dp_i f|_s <= |f|_t / (t-s).
#ifndef KAMKIT_SERIES_HPP
#define KAMKIT_SERIES_HPP

#include <complex>
#include <map>
#include <span>

#include <kamkit/multi_index.hpp>
#include <kamkit/scale.hpp>

namespace kamkit {

class ScaledSeries {
 public:
  using Coeff = std::complex<double>;
  using Map = std::map<MultiIndex, Coeff>;

  ScaledSeries(int dim, PhaseMode mode, Truncation trunc, bool real = false);

  static ScaledSeries monomial(int dim, PhaseMode mode, Truncation trunc,
                               const MultiIndex& idx, Coeff value,
                               bool real = false);
  static ScaledSeries constant(int dim, PhaseMode mode, Truncation trunc,
                               Coeff value, bool real = false);

  int dim() const { return dim_; }
  PhaseMode mode() const { return mode_; }
  const Truncation& trunc() const { return trunc_; }

  /// The reality flag asserts conjugate symmetry of the coefficients
  /// (torus) or real coefficients (singular); see is_real_symmetric().
  bool real_flag() const { return real_; }
  void set_real_flag(bool r) { real_ = r; }

  bool empty() const { return coeffs_.empty(); }
  std::size_t size() const { return coeffs_.size(); }
  const Map& terms() const { return coeffs_; }

  /// Coefficient at idx, zero if absent.
  Coeff at(const MultiIndex& idx) const;

  /// Assign a coefficient.  Exact zeros are pruned (canonical sparse
  /// form).  Throws DomainError if idx violates the truncation or the
  /// mode invariants.
  void set(const MultiIndex& idx, Coeff value);

  /// Add into a coefficient, with the same checks as set().
  void add_term(const MultiIndex& idx, Coeff value);

  /// True if the coefficients satisfy the reality involution: in torus
  /// mode a(-I,J,k) == conj(a(I,J,k)), in singular mode Im a == 0.
  bool is_real_symmetric(double tol = 0.0) const;

  /// Copy re-truncated to `target`; dropped mass (majorant weight at
  /// the global scale cap) is added to *tail if given.
  ScaledSeries truncated_to(const Truncation& target,
                            double* tail = nullptr) const;

  /// Evaluate at a point of the complexified domain.
  Coeff evaluate(std::span<const Coeff> q, std::span<const Coeff> p,
                 Coeff t = 0.0) const;

  // Internal accumulation used by the arithmetic layer: drops
  // out-of-truncation terms, charging their weight at the global cap
  // to *tail instead of throwing.
  void accumulate(const MultiIndex& idx, Coeff value, double* tail);

 private:
  void check_index(const MultiIndex& idx) const;

  int dim_;
  PhaseMode mode_;
  Truncation trunc_;
  bool real_;
  Map coeffs_;
};

// --- norms ------------------------------------------------------------

/// Majorant weight of a single monomial at scale s.
double majorant_weight(const MultiIndex& idx, PhaseMode mode, double s);

/// Weighted-l1 majorant norm |f|_s.  Throws DomainError unless
/// 0 < s <= kScaleCap.
double norm_majorant(const ScaledSeries& f, double s);

/// L2 norm on the annulus 1-s <= |z| <= 1+s for a one-variable pure
/// Fourier series (torus mode, no p or t dependence), computed from the
/// exact monomial inner products
///   <z^n|z^n> = ((1+s)^{2n+2} - (1-s)^{2n+2}) / (2n+2),  n != -1,
///   <z^-1|z^-1> = log((1+s)/(1-s)).
/// Throws ShapeError for any other series shape.
double norm_l2_annulus(const ScaledSeries& f, double s);

/// sigma^{-1} |f|_{L2, s+sigma}; dominates sup |f| on the s-annulus.
double pointwise_bound_from_l2(const ScaledSeries& f, double s, double sigma);

/// Least-squares slope of log |f|_s against log s over a geometric grid
/// in [s_lo, s_hi]; estimates the order of vanishing of f (its level in
/// the filtration by powers of the scale).
double estimate_vanishing_order(const ScaledSeries& f, double s_lo,
                                double s_hi, int npts = 9);

// --- algebra ----------------------------------------------------------
//
// Binary operations require equal dim and mode and truncate the result
// to the tighter of the two operands' truncations.  When `tail` is
// non-null it receives the majorant norm (at the global scale cap) of
// every discarded term, so callers can certify results.

ScaledSeries add(const ScaledSeries& a, const ScaledSeries& b,
                 double* tail = nullptr);
ScaledSeries sub(const ScaledSeries& a, const ScaledSeries& b,
                 double* tail = nullptr);
ScaledSeries scaled(const ScaledSeries& a, ScaledSeries::Coeff factor);
ScaledSeries mul(const ScaledSeries& a, const ScaledSeries& b,
                 double* tail = nullptr);

/// Poisson bracket.
///
/// torus:    {f,g} = i sum_k [ (d/dp_k f)(q_k d/dq_k g)
///                           - (q_k d/dq_k f)(d/dp_k g) ]
///           (the C{t}-linear bracket of the fibered symplectic form;
///           on monomials {sum alpha_i p_i, q^I} = i (alpha, I) q^I).
/// singular: {f,g} = sum_k [ (d/dp_k f)(d/dq_k g) - (d/dq_k f)(d/dp_k g) ],
///           so {sum omega_i q_i p_i, q^I p^J} = (omega, I-J) q^I p^J.
ScaledSeries poisson_bracket(const ScaledSeries& f, const ScaledSeries& g,
                             double* tail = nullptr);

/// Coefficientwise product (absent coefficients count as zero).
ScaledSeries hadamard_product(const ScaledSeries& f, const ScaledSeries& g);

enum class DeriveKind {
  fourier_log,  // q_i d/dq_i : multiplies a coefficient by I_i
  momentum,     // d/dp_i
  tparam,       // d/dt
};

/// Exact coefficientwise derivative.
ScaledSeries derive(const ScaledSeries& f, DeriveKind kind, int i = 0);

/// Projection onto Fourier index 0 (torus mode only).  Idempotent and
/// norm non-increasing at every scale.
ScaledSeries mean_over_q(const ScaledSeries& f);

inline ScaledSeries operator+(const ScaledSeries& a, const ScaledSeries& b) {
  return add(a, b);
}
inline ScaledSeries operator-(const ScaledSeries& a, const ScaledSeries& b) {
  return sub(a, b);
}
inline ScaledSeries operator*(ScaledSeries::Coeff c, const ScaledSeries& a) {
  return scaled(a, c);
}
inline ScaledSeries operator*(const ScaledSeries& a, const ScaledSeries& b) {
  return mul(a, b);
}

}  // namespace kamkit

#endif  // KAMKIT_SERIES_HPP
