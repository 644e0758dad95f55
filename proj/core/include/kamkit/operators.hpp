// kamkit :: bounded operators between scaled series spaces.
//
// A linear operator u is k-bounded with constant C when
//
//     |u(x)|_s <= C e^2 / (t-s)^k * |x|_t   for all 0 < s < t <= S.
//
// (For k = 0 the inequality is read at s = t without the e^2 factor,
// i.e. the usual operator norm.)  The constant stored on a
// ScaledOperator is a declared bound of this form; certify_bound
// samples random series and scale pairs and reports the smallest
// constant consistent with the evidence.
//
// For the functional calculus each operator additionally carries a
// provable exponentiation amplitude: a bound of the form
// |u^m x|_s <= m! nu^m |x|_t with nu = amplitude(t) / (t-s) for
// derivation-like kinds and nu = amplitude (scale free) for
// coefficientwise multipliers.  Composites of unknown structure carry
// an infinite amplitude and refuse functional calculus.
#ifndef KAMKIT_OPERATORS_HPP
#define KAMKIT_OPERATORS_HPP

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <kamkit/power_series.hpp>
#include <kamkit/series.hpp>

namespace kamkit {

class ScaledOperator {
 public:
  enum class Kind { derivation, hadamard, poisson_adjoint, p_shift, composite };

  using Action = std::function<ScaledSeries(const ScaledSeries&)>;
  using Amplitude = std::function<double(double /*t*/)>;

  ScaledOperator(std::string label, Kind kind, int order, double constant,
                 int dim, PhaseMode mode, Truncation trunc, Action action,
                 Amplitude amplitude_at_t = nullptr, bool scale_free = false);

  ScaledSeries operator()(const ScaledSeries& x) const { return action_(x); }

  const std::string& label() const { return label_; }
  Kind kind() const { return kind_; }
  int order() const { return order_; }
  double constant() const { return constant_; }
  int dim() const { return dim_; }
  PhaseMode mode() const { return mode_; }
  const Truncation& trunc() const { return trunc_; }

  /// Norm-reading factor introduced by rescale(); certification reads
  /// norms at lambda * s.
  double scale_factor() const { return scale_factor_; }

  /// Geometric ratio nu controlling the functional calculus between the
  /// scales of `pair`; +infinity when the operator is not exponentiable.
  double nu(const ScalePair& pair) const;

  friend ScaledOperator compose(const ScaledOperator& u, const ScaledOperator& v);
  friend ScaledOperator rescale(const ScaledOperator& u, double lambda);

 private:
  std::string label_;
  Kind kind_;
  int order_;
  double constant_;
  int dim_;
  PhaseMode mode_;
  Truncation trunc_;
  Action action_;
  Amplitude amplitude_at_t_;
  bool scale_free_ = false;
  double scale_factor_ = 1.0;
};

// Built-in operator families.  The derivation constants are the
// generous unit bounds (the sharp Cauchy constants are e^{-3} and
// e^{-2} times smaller), which is what makes the composition bound
// 2^{k+k'} C_u C_v certifiable.
ScaledOperator identity_op(int dim, PhaseMode mode, const Truncation& trunc);
ScaledOperator derive_op(DeriveKind kind, int i,
                         ScaledSeries::Coeff coefficient, int dim,
                         PhaseMode mode, const Truncation& trunc);
/// Coefficientwise multiplier by the coefficients of `pattern`
/// (declared order/constant supplied by the caller).
ScaledOperator hadamard_op(const ScaledSeries& pattern, int declared_order,
                           double declared_constant);

/// One sampled two-scale ratio.
struct BoundSample {
  double s;
  double t;
  double ratio;
};

/// Empirical evidence for a k-bounded estimate.  c_emp is the largest
/// sampled value of |u(x)|_s (t-s)^k / (e^2 |x|_t)  (of |u(x)|_s / |x|_s
/// at s = t when k = 0); pass compares it against the declared constant.
struct BoundCertificate {
  int order = 0;
  double declared_constant = 0.0;
  double c_emp = 0.0;
  bool pass = false;
  std::vector<BoundSample> samples;
};

/// Sample `trials` random series and scale pairs; deterministic given
/// the seed.  `declared_constant` defaults to u.constant().
BoundCertificate certify_bound(const ScaledOperator& u, int k, int trials,
                               std::uint64_t seed,
                               std::optional<double> declared_constant = {});

/// Composition u after v: (k+k')-bounded with declared constant
/// 2^{k+k'} C_u C_v.
ScaledOperator compose(const ScaledOperator& u, const ScaledOperator& v);

/// Rescaling by lambda in (0, 1]: same action, order preserved,
/// declared constant multiplied by lambda^{-k}; certification reads
/// norms at lambda * s.
ScaledOperator rescale(const ScaledOperator& u, double lambda);

/// Norms of a rescaled series are read at lambda * s.
struct RescaledSeries {
  ScaledSeries f;
  double lambda;
};
RescaledSeries rescale(const ScaledSeries& f, double lambda);
double norm_majorant(const RescaledSeries& f, double s);

/// Borel functional calculus: y = sum_m (a_m / m!) u^m(x) for
/// f = sum_m a_m z^m, with the certified estimate |y|_s <= f(nu) |x|_t.
struct BorelApplyResult {
  ScaledSeries y;
  double bound;
  double nu;
};
BorelApplyResult borel_apply(const PowerSeries& f, const ScaledOperator& u,
                             const ScaledSeries& x, const ScalePair& pair);

/// Derivation xi = {-, h} + sum_i a_i(t) d/dp_i of the scaled Poisson
/// algebra; shift components are pure parameter series.
struct LieGenerator {
  ScaledSeries h;
  std::vector<ScaledSeries> shift;  // may be empty (no translation part)

  static LieGenerator hamiltonian(ScaledSeries h);
  static LieGenerator with_shift(ScaledSeries h, std::vector<ScaledSeries> shift);

  LieGenerator negated() const;

  /// xi applied once.
  ScaledSeries apply(const ScaledSeries& x, double* tail = nullptr) const;

  /// Scale-free amplitude A(t) with |xi(x)|_s <= A(t)/(t-s) |x|_t.
  double amplitude(double t) const;

  /// Wrap as a ScaledOperator (kind poisson_adjoint).
  ScaledOperator as_operator(const Truncation& trunc) const;
};

/// Truncated Lie series exp(xi) x = sum_{m<=D} xi^m(x)/m!.  D is chosen
/// adaptively so the tail bound nu^{D+1}/(1-nu) |x|_t drops below
/// tail_tol (relative to |x|_t), unless `terms` forces a fixed depth.
/// Throws ExponentiabilityError when nu >= 1.
struct LieExpResult {
  ScaledSeries y;
  double nu;
  int terms_used;
  double tail_bound;       // absolute bound on the dropped part of the series
  double truncation_tail;  // majorant mass lost to the truncation box
};
LieExpResult lie_exp(const LieGenerator& xi, const ScaledSeries& x,
                     const ScalePair& pair, double tail_tol = 1e-14,
                     int terms = -1);

}  // namespace kamkit

#endif  // KAMKIT_OPERATORS_HPP
