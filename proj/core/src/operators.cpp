#include <kamkit/operators.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include <kamkit/errors.hpp>

namespace kamkit {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kE2 = kE * kE;

}  // namespace

ScaledOperator::ScaledOperator(std::string label, Kind kind, int order,
                               double constant, int dim, PhaseMode mode,
                               Truncation trunc, Action action,
                               Amplitude amplitude_at_t, bool scale_free)
    : label_(std::move(label)),
      kind_(kind),
      order_(order),
      constant_(constant),
      dim_(dim),
      mode_(mode),
      trunc_(trunc),
      action_(std::move(action)),
      amplitude_at_t_(std::move(amplitude_at_t)),
      scale_free_(scale_free) {
  if (order_ < 0) throw DomainError("ScaledOperator: negative order");
  if (constant_ < 0.0) throw DomainError("ScaledOperator: negative constant");
}

double ScaledOperator::nu(const ScalePair& pair) const {
  if (!amplitude_at_t_) return std::numeric_limits<double>::infinity();
  const double amp = amplitude_at_t_(pair.t * scale_factor_);
  return scale_free_ ? amp : amp / (pair.gap() * scale_factor_);
}

ScaledOperator identity_op(int dim, PhaseMode mode, const Truncation& trunc) {
  return ScaledOperator(
      "identity", ScaledOperator::Kind::hadamard, 0, 1.0, dim, mode, trunc,
      [](const ScaledSeries& x) { return x; },
      [](double) { return 1.0; }, /*scale_free=*/true);
}

ScaledOperator derive_op(DeriveKind kind, int i, ScaledSeries::Coeff coefficient,
                         int dim, PhaseMode mode, const Truncation& trunc) {
  const double c = std::abs(coefficient);
  const char* name = kind == DeriveKind::fourier_log ? "q*d/dq"
                     : kind == DeriveKind::momentum  ? "d/dp"
                                                     : "d/dt";
  // m-fold two-scale bounds: |D^m x|_s <= (c m/(e(t-s)))^m |x|_t for the
  // logarithmic derivative (amplitude c, since m^m <= m! e^m) and
  // (c m/(t-s))^m for d/dp, d/dt (amplitude c e).
  const double amp = (kind == DeriveKind::fourier_log) ? c : c * kE;
  return ScaledOperator(
      std::string(name) + "[" + std::to_string(i) + "]",
      ScaledOperator::Kind::derivation, 1, std::max(c, 0.0), dim, mode, trunc,
      [kind, i, coefficient](const ScaledSeries& x) {
        return scaled(derive(x, kind, i), coefficient);
      },
      [amp](double) { return amp; });
}

ScaledOperator hadamard_op(const ScaledSeries& pattern, int declared_order,
                           double declared_constant) {
  // A coefficientwise multiplier is 0-bounded by its largest multiplier
  // over the truncation box, which is the exponentiation amplitude.
  double sup = 0.0;
  for (const auto& [idx, a] : pattern.terms()) sup = std::max(sup, std::abs(a));
  ScaledSeries p = pattern;
  return ScaledOperator(
      "hadamard", ScaledOperator::Kind::hadamard, declared_order,
      declared_constant, pattern.dim(), pattern.mode(), pattern.trunc(),
      [p](const ScaledSeries& x) { return hadamard_product(p, x); },
      [sup](double) { return sup; }, /*scale_free=*/true);
}

// --- certification ----------------------------------------------------

namespace {

ScaledSeries random_series(std::mt19937_64& rng, int dim, PhaseMode mode,
                           const Truncation& trunc, int nterms) {
  std::uniform_int_distribution<int> fdist(
      mode == PhaseMode::torus ? -trunc.max_fourier : 0, trunc.max_fourier);
  std::uniform_int_distribution<int> mdist(0, trunc.max_momentum_deg);
  std::uniform_int_distribution<int> tdist(
      0, mode == PhaseMode::torus ? trunc.max_tdeg : 0);
  std::uniform_real_distribution<double> cdist(-1.0, 1.0);
  ScaledSeries f(dim, mode, trunc);
  for (int k = 0; k < nterms; ++k) {
    MultiIndex idx(std::vector<int>(dim, 0), std::vector<int>(dim, 0), 0);
    for (int i = 0; i < dim; ++i) idx.fourier[i] = fdist(rng);
    // spread |J|_1 uniformly rather than per-coordinate
    int budget = mdist(rng);
    for (int i = 0; i < dim && budget > 0; ++i) {
      std::uniform_int_distribution<int> part(0, budget);
      const int v = (i + 1 == dim) ? budget : part(rng);
      idx.momentum[i] = v;
      budget -= v;
    }
    idx.tdeg = tdist(rng);
    f.add_term(idx, ScaledSeries::Coeff(cdist(rng), cdist(rng)));
  }
  return f;
}

}  // namespace

BoundCertificate certify_bound(const ScaledOperator& u, int k, int trials,
                               std::uint64_t seed,
                               std::optional<double> declared_constant) {
  if (trials < 1) throw DomainError("certify_bound: trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> sdist(0.05, 0.30);
  std::uniform_real_distribution<double> gapdist(0.05, 0.20);

  BoundCertificate cert;
  cert.order = k;
  cert.declared_constant = declared_constant.value_or(u.constant());
  cert.samples.reserve(static_cast<std::size_t>(trials));

  const double lambda = u.scale_factor();
  for (int trial = 0; trial < trials; ++trial) {
    const ScaledSeries x =
        random_series(rng, u.dim(), u.mode(), u.trunc(), 12);
    const double s = sdist(rng);
    const double t = std::min(kScaleCap, s + gapdist(rng));
    const ScaledSeries ux = u(x);
    double ratio = 0.0;
    if (k == 0) {
      const double denom = norm_majorant(x, t * lambda);
      if (denom > 0.0) ratio = norm_majorant(ux, t * lambda) / denom;
    } else {
      const double denom = kE2 * norm_majorant(x, t * lambda);
      if (denom > 0.0) {
        ratio = norm_majorant(ux, s * lambda) *
                std::pow(lambda * (t - s), k) / denom;
      }
    }
    cert.samples.push_back({s, t, ratio});
    cert.c_emp = std::max(cert.c_emp, ratio);
  }
  cert.pass = cert.c_emp <=
              cert.declared_constant * (1.0 + 1e-12) + 1e-300;
  return cert;
}

ScaledOperator compose(const ScaledOperator& u, const ScaledOperator& v) {
  if (u.dim() != v.dim() || u.mode() != v.mode()) {
    throw ShapeError("compose: incompatible operator domains");
  }
  auto au = u.action_;
  auto av = v.action_;
  ScaledOperator::Amplitude amp = nullptr;
  bool scale_free = false;
  if (u.scale_free_ && v.scale_free_ && u.amplitude_at_t_ && v.amplitude_at_t_) {
    auto fu = u.amplitude_at_t_;
    auto fv = v.amplitude_at_t_;
    amp = [fu, fv](double t) { return fu(t) * fv(t); };
    scale_free = true;
  }
  return ScaledOperator(
      u.label() + " . " + v.label(), ScaledOperator::Kind::composite,
      u.order() + v.order(),
      std::pow(2.0, u.order() + v.order()) * u.constant() * v.constant(),
      u.dim(), u.mode(), Truncation::tighter(u.trunc(), v.trunc()),
      [au, av](const ScaledSeries& x) { return au(av(x)); }, amp, scale_free);
}

ScaledOperator rescale(const ScaledOperator& u, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw DomainError("rescale: lambda must lie in (0, 1]");
  }
  ScaledOperator r = u;
  r.constant_ = u.constant_ * std::pow(lambda, -u.order_);
  r.scale_factor_ = u.scale_factor_ * lambda;
  return r;
}

RescaledSeries rescale(const ScaledSeries& f, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw DomainError("rescale: lambda must lie in (0, 1]");
  }
  return {f, lambda};
}

double norm_majorant(const RescaledSeries& f, double s) {
  return norm_majorant(f.f, f.lambda * s);
}

BorelApplyResult borel_apply(const PowerSeries& f, const ScaledOperator& u,
                             const ScaledSeries& x, const ScalePair& pair) {
  if (!f.nonnegative()) {
    throw DomainError("borel_apply: estimate series must have non-negative coefficients");
  }
  const double nu = u.nu(pair);
  if (!(nu < f.radius())) {
    throw DivergenceError("borel_apply: nu = " + std::to_string(nu) +
                          " reaches the radius of convergence");
  }
  ScaledSeries power = x;  // u^m(x)
  ScaledSeries acc = scaled(x, f.coeff(0));
  double mfact = 1.0;
  for (int m = 1; m <= f.degree(); ++m) {
    power = u(power);
    mfact *= m;
    if (f.coeff(m) != 0.0) {
      acc = add(acc, scaled(power, f.coeff(m) / mfact));
    }
  }
  BorelApplyResult out;
  out.nu = nu;
  out.y = std::move(acc);
  out.bound = f.eval(nu) * norm_majorant(x, pair.t);
  return out;
}

// --- Lie series -------------------------------------------------------

LieGenerator LieGenerator::hamiltonian(ScaledSeries h) {
  return LieGenerator{std::move(h), {}};
}

LieGenerator LieGenerator::with_shift(ScaledSeries h,
                                      std::vector<ScaledSeries> shift) {
  return LieGenerator{std::move(h), std::move(shift)};
}

LieGenerator LieGenerator::negated() const {
  LieGenerator out;
  out.h = scaled(h, -1.0);
  out.shift.reserve(shift.size());
  for (const auto& a : shift) out.shift.push_back(scaled(a, -1.0));
  return out;
}

ScaledSeries LieGenerator::apply(const ScaledSeries& x, double* tail) const {
  ScaledSeries acc = poisson_bracket(x, h, tail);
  for (std::size_t i = 0; i < shift.size(); ++i) {
    if (shift[i].empty()) continue;
    acc = add(acc, mul(shift[i], derive(x, DeriveKind::momentum,
                                        static_cast<int>(i)),
                       tail),
              tail);
  }
  return acc;
}

double LieGenerator::amplitude(double t) const {
  // |xi(x)|_s <= A(t)/(t-s) |x|_t with
  //   A(t) = sum_i |q_i d/dq_i h|_t + (1/e)(|d/dp_i h|_t + |a_i|_t)  (torus)
  //   A(t) = sum_i |d/dq_i h|_t + |d/dp_i h|_t + |a_i|_t             (singular)
  // and the m-fold bound m^m <= m! e^m gives nu = e A(t)/(t-s).
  double a = 0.0;
  const bool torus = h.mode() == PhaseMode::torus;
  for (int i = 0; i < h.dim(); ++i) {
    if (torus) {
      a += norm_majorant(derive(h, DeriveKind::fourier_log, i), t);
      a += norm_majorant(derive(h, DeriveKind::momentum, i), t) / kE;
    } else {
      // plain d/dq via the bracket definition: |d/dq_i h|:
      ScaledSeries dq(h.dim(), h.mode(), h.trunc());
      for (const auto& [idx, c] : h.terms()) {
        if (idx.fourier[i] == 0) continue;
        MultiIndex d = idx;
        d.fourier[i] -= 1;
        dq.accumulate(d, c * static_cast<double>(idx.fourier[i]), nullptr);
      }
      a += norm_majorant(dq, t);
      a += norm_majorant(derive(h, DeriveKind::momentum, i), t);
    }
    if (i < static_cast<int>(shift.size()) && !shift[i].empty()) {
      const double sn = norm_majorant(shift[i], t);
      a += torus ? sn / kE : sn;
    }
  }
  return a * kE;
}

ScaledOperator LieGenerator::as_operator(const Truncation& trunc) const {
  LieGenerator xi = *this;
  return ScaledOperator(
      "lie-derivation", ScaledOperator::Kind::poisson_adjoint, 1,
      xi.amplitude(kScaleCap), h.dim(), h.mode(), trunc,
      [xi](const ScaledSeries& x) { return xi.apply(x); },
      [xi](double t) { return xi.amplitude(t); });
}

namespace {

// Guaranteed filtration gain per application of the generator: the
// minimal t-degree of the generator parts on the torus, the minimal
// total degree minus two at the singular point.  A positive gain makes
// the Lie series nilpotent on the truncated algebra (every term beyond
// the box's filtration depth vanishes identically), so exponentiation
// is exact and needs no smallness of nu.
int filtration_gain(const LieGenerator& xi) {
  int gain = std::numeric_limits<int>::max();
  if (xi.h.mode() == PhaseMode::torus) {
    for (const auto& [idx, a] : xi.h.terms()) gain = std::min(gain, idx.tdeg);
    for (const auto& s : xi.shift) {
      for (const auto& [idx, a] : s.terms()) gain = std::min(gain, idx.tdeg);
    }
  } else {
    for (const auto& [idx, a] : xi.h.terms()) {
      gain = std::min(gain, idx.fourier_abs() + idx.momentum_deg() - 2);
    }
  }
  return gain;  // max() when the generator vanishes
}

int filtration_capacity(const ScaledSeries& x) {
  if (x.mode() == PhaseMode::torus) return x.trunc().max_tdeg;
  return x.dim() * x.trunc().max_fourier + x.trunc().max_momentum_deg;
}

}  // namespace

LieExpResult lie_exp(const LieGenerator& xi, const ScaledSeries& x,
                     const ScalePair& pair, double tail_tol, int terms) {
  // amplitude() already carries the m^m <= m! e^m factor.
  const double nu_exp = xi.amplitude(pair.t) / pair.gap();
  const double norm_x = norm_majorant(x, pair.t);

  const int gain = filtration_gain(xi);
  const bool nilpotent = gain >= 1;

  if (!nilpotent && !(nu_exp < 1.0)) {
    throw ExponentiabilityError(
        "lie_exp: generator too large between scales (nu = " +
            std::to_string(nu_exp) + ")",
        pair.t, nu_exp);
  }

  int depth = terms;
  if (depth < 0) {
    if (nilpotent) {
      depth = (gain == std::numeric_limits<int>::max())
                  ? 0
                  : filtration_capacity(x) / gain + 1;
    } else {
      depth = 0;
      double tail = nu_exp / (1.0 - nu_exp);
      while (tail > tail_tol && depth < 400) {
        tail *= nu_exp;
        ++depth;
      }
    }
  }

  double trunc_tail = 0.0;
  ScaledSeries term = x;
  ScaledSeries acc = x;
  double mfact = 1.0;
  for (int m = 1; m <= depth; ++m) {
    term = xi.apply(term, &trunc_tail);
    mfact *= m;
    if (term.empty()) break;
    acc = add(acc, scaled(term, 1.0 / mfact));
  }

  LieExpResult out;
  out.y = std::move(acc);
  out.nu = nu_exp;
  out.terms_used = depth;
  out.tail_bound = nilpotent ? 0.0
                             : std::pow(nu_exp, depth + 1) /
                                   (1.0 - nu_exp) * norm_x;
  out.truncation_tail = trunc_tail;
  return out;
}

}  // namespace kamkit
