#include <kamkit/series.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace kamkit {

std::string MultiIndex::str() const {
  std::ostringstream os;
  os << "(I=[";
  for (std::size_t i = 0; i < fourier.size(); ++i) {
    os << (i ? "," : "") << fourier[i];
  }
  os << "], J=[";
  for (std::size_t i = 0; i < momentum.size(); ++i) {
    os << (i ? "," : "") << momentum[i];
  }
  os << "], k=" << tdeg << ")";
  return os.str();
}

ScaledSeries::ScaledSeries(int dim, PhaseMode mode, Truncation trunc, bool real)
    : dim_(dim), mode_(mode), trunc_(trunc), real_(real) {
  if (dim < 1) throw DomainError("ScaledSeries: dim must be >= 1");
  if (trunc.max_fourier < 0 || trunc.max_momentum_deg < 0 || trunc.max_tdeg < 0) {
    throw DomainError("ScaledSeries: negative truncation");
  }
}

ScaledSeries ScaledSeries::monomial(int dim, PhaseMode mode, Truncation trunc,
                                    const MultiIndex& idx, Coeff value,
                                    bool real) {
  ScaledSeries f(dim, mode, trunc, real);
  f.set(idx, value);
  return f;
}

ScaledSeries ScaledSeries::constant(int dim, PhaseMode mode, Truncation trunc,
                                    Coeff value, bool real) {
  return monomial(dim, mode, trunc,
                  MultiIndex(std::vector<int>(dim, 0), std::vector<int>(dim, 0), 0),
                  value, real);
}

void ScaledSeries::check_index(const MultiIndex& idx) const {
  if (idx.dim() != dim_ || static_cast<int>(idx.momentum.size()) != dim_) {
    throw ShapeError("ScaledSeries: index dimension mismatch");
  }
  for (int v : idx.momentum) {
    if (v < 0) throw DomainError("ScaledSeries: negative momentum exponent");
  }
  if (idx.tdeg < 0) throw DomainError("ScaledSeries: negative parameter exponent");
  if (mode_ == PhaseMode::singular) {
    for (int v : idx.fourier) {
      if (v < 0) throw DomainError("ScaledSeries: negative exponent in singular mode");
    }
    if (idx.tdeg != 0) {
      throw DomainError("ScaledSeries: no parameter in singular mode");
    }
  }
  if (!trunc_.admits(idx)) {
    throw DomainError("ScaledSeries: index " + idx.str() + " outside truncation");
  }
}

ScaledSeries::Coeff ScaledSeries::at(const MultiIndex& idx) const {
  auto it = coeffs_.find(idx);
  return it == coeffs_.end() ? Coeff(0.0) : it->second;
}

void ScaledSeries::set(const MultiIndex& idx, Coeff value) {
  check_index(idx);
  if (value == Coeff(0.0)) {
    coeffs_.erase(idx);
  } else {
    coeffs_[idx] = value;
  }
}

void ScaledSeries::add_term(const MultiIndex& idx, Coeff value) {
  check_index(idx);
  auto [it, inserted] = coeffs_.try_emplace(idx, value);
  if (!inserted) {
    it->second += value;
    if (it->second == Coeff(0.0)) coeffs_.erase(it);
  } else if (value == Coeff(0.0)) {
    coeffs_.erase(it);
  }
}

void ScaledSeries::accumulate(const MultiIndex& idx, Coeff value, double* tail) {
  if (value == Coeff(0.0)) return;
  if (!trunc_.admits(idx)) {
    if (tail) *tail += std::abs(value) * majorant_weight(idx, mode_, kScaleCap);
    return;
  }
  auto [it, inserted] = coeffs_.try_emplace(idx, value);
  if (!inserted) {
    it->second += value;
    if (it->second == Coeff(0.0)) coeffs_.erase(it);
  }
}

bool ScaledSeries::is_real_symmetric(double tol) const {
  for (const auto& [idx, a] : coeffs_) {
    if (mode_ == PhaseMode::singular) {
      if (std::abs(a.imag()) > tol) return false;
      continue;
    }
    MultiIndex conj_idx = idx;
    for (int& v : conj_idx.fourier) v = -v;
    Coeff b = at(conj_idx);
    if (std::abs(b - std::conj(a)) > tol * std::max(1.0, std::abs(a))) {
      return false;
    }
  }
  return true;
}

ScaledSeries ScaledSeries::truncated_to(const Truncation& target,
                                        double* tail) const {
  ScaledSeries out(dim_, mode_, target, real_);
  for (const auto& [idx, a] : coeffs_) out.accumulate(idx, a, tail);
  return out;
}

ScaledSeries::Coeff ScaledSeries::evaluate(std::span<const Coeff> q,
                                           std::span<const Coeff> p,
                                           Coeff t) const {
  if (static_cast<int>(q.size()) != dim_ || static_cast<int>(p.size()) != dim_) {
    throw ShapeError("ScaledSeries::evaluate: point dimension mismatch");
  }
  auto ipow = [](Coeff z, int e) {
    if (e < 0) return std::pow(Coeff(1.0) / z, -e);
    return std::pow(z, e);
  };
  Coeff acc = 0.0;
  for (const auto& [idx, a] : coeffs_) {
    Coeff term = a;
    for (int i = 0; i < dim_; ++i) {
      if (idx.fourier[i] != 0) term *= ipow(q[i], idx.fourier[i]);
      if (idx.momentum[i] != 0) term *= ipow(p[i], idx.momentum[i]);
    }
    if (idx.tdeg != 0) term *= ipow(t, idx.tdeg);
    acc += term;
  }
  return acc;
}

// --- norms ------------------------------------------------------------

double majorant_weight(const MultiIndex& idx, PhaseMode mode, double s) {
  if (mode == PhaseMode::torus) {
    return std::exp(s * idx.fourier_abs()) *
           std::pow(s, idx.momentum_deg() + 2 * idx.tdeg);
  }
  return std::pow(s, idx.fourier_abs() + idx.momentum_deg());
}

double norm_majorant(const ScaledSeries& f, double s) {
  require_scale(s, "norm_majorant");
  double acc = 0.0;
  for (const auto& [idx, a] : f.terms()) {
    acc += std::abs(a) * majorant_weight(idx, f.mode(), s);
  }
  return acc;
}

namespace {

// <z^n|z^n> on the annulus 1-s <= |z| <= 1+s with the rotation
// invariant volume normalised so that the n = 0 weight at s = 1/2 is 1.
double annulus_monomial_weight(int n, double s) {
  if (n == -1) return std::log((1.0 + s) / (1.0 - s));
  const double e = 2.0 * n + 2.0;
  return (std::pow(1.0 + s, e) - std::pow(1.0 - s, e)) / e;
}

}  // namespace

double norm_l2_annulus(const ScaledSeries& f, double s) {
  require_scale(s, "norm_l2_annulus");
  if (f.mode() != PhaseMode::torus || f.dim() != 1) {
    throw ShapeError("norm_l2_annulus: need a one-variable torus series");
  }
  double acc = 0.0;
  for (const auto& [idx, a] : f.terms()) {
    if (idx.momentum_deg() != 0 || idx.tdeg != 0) {
      throw ShapeError("norm_l2_annulus: series must be a pure Fourier series");
    }
    const double w = annulus_monomial_weight(idx.fourier[0], s);
    acc += std::norm(a) * w;
  }
  return std::sqrt(acc);
}

double pointwise_bound_from_l2(const ScaledSeries& f, double s, double sigma) {
  require_scale(s, "pointwise_bound_from_l2");
  if (!(sigma > 0.0)) throw DomainError("pointwise_bound_from_l2: sigma <= 0");
  if (!valid_scale(s + sigma)) {
    throw DomainError("pointwise_bound_from_l2: s + sigma exceeds the cap");
  }
  return norm_l2_annulus(f, s + sigma) / sigma;
}

double estimate_vanishing_order(const ScaledSeries& f, double s_lo, double s_hi,
                                int npts) {
  require_scale(s_lo, "estimate_vanishing_order");
  require_scale(s_hi, "estimate_vanishing_order");
  if (!(s_lo < s_hi) || npts < 2) {
    throw DomainError("estimate_vanishing_order: bad grid");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double ratio = std::pow(s_hi / s_lo, 1.0 / (npts - 1));
  double s = s_lo;
  for (int i = 0; i < npts; ++i, s *= ratio) {
    const double x = std::log(s);
    const double y = std::log(norm_majorant(f, s));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = npts;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// --- algebra ----------------------------------------------------------

namespace {

void require_compatible(const ScaledSeries& a, const ScaledSeries& b,
                        const char* where) {
  if (a.dim() != b.dim()) {
    throw ShapeError(std::string(where) + ": dimension mismatch");
  }
  if (a.mode() != b.mode()) {
    throw ShapeError(std::string(where) + ": mode mismatch");
  }
}

}  // namespace

ScaledSeries add(const ScaledSeries& a, const ScaledSeries& b, double* tail) {
  require_compatible(a, b, "add");
  ScaledSeries out(a.dim(), a.mode(), Truncation::tighter(a.trunc(), b.trunc()),
                   a.real_flag() && b.real_flag());
  for (const auto& [idx, v] : a.terms()) out.accumulate(idx, v, tail);
  for (const auto& [idx, v] : b.terms()) out.accumulate(idx, v, tail);
  return out;
}

ScaledSeries sub(const ScaledSeries& a, const ScaledSeries& b, double* tail) {
  require_compatible(a, b, "sub");
  ScaledSeries out(a.dim(), a.mode(), Truncation::tighter(a.trunc(), b.trunc()),
                   a.real_flag() && b.real_flag());
  for (const auto& [idx, v] : a.terms()) out.accumulate(idx, v, tail);
  for (const auto& [idx, v] : b.terms()) out.accumulate(idx, -v, tail);
  return out;
}

ScaledSeries scaled(const ScaledSeries& a, ScaledSeries::Coeff factor) {
  ScaledSeries out(a.dim(), a.mode(), a.trunc(),
                   a.real_flag() && factor.imag() == 0.0);
  if (factor == ScaledSeries::Coeff(0.0)) return out;
  for (const auto& [idx, v] : a.terms()) out.accumulate(idx, factor * v, nullptr);
  return out;
}

ScaledSeries mul(const ScaledSeries& a, const ScaledSeries& b, double* tail) {
  require_compatible(a, b, "mul");
  ScaledSeries out(a.dim(), a.mode(), Truncation::tighter(a.trunc(), b.trunc()),
                   a.real_flag() && b.real_flag());
  const int n = a.dim();
  for (const auto& [ia, va] : a.terms()) {
    for (const auto& [ib, vb] : b.terms()) {
      MultiIndex idx = ia;
      for (int i = 0; i < n; ++i) {
        idx.fourier[i] += ib.fourier[i];
        idx.momentum[i] += ib.momentum[i];
      }
      idx.tdeg += ib.tdeg;
      out.accumulate(idx, va * vb, tail);
    }
  }
  return out;
}

ScaledSeries derive(const ScaledSeries& f, DeriveKind kind, int i) {
  if (kind != DeriveKind::tparam && (i < 0 || i >= f.dim())) {
    throw DomainError("derive: variable index out of range");
  }
  bool real = f.real_flag();
  if (kind == DeriveKind::fourier_log && f.mode() == PhaseMode::torus) {
    // q_i d/dq_i maps conjugate-symmetric series to anti-symmetric ones.
    real = false;
  }
  ScaledSeries out(f.dim(), f.mode(), f.trunc(), real);
  for (const auto& [idx, a] : f.terms()) {
    switch (kind) {
      case DeriveKind::fourier_log: {
        if (idx.fourier[i] == 0) break;
        out.accumulate(idx, a * static_cast<double>(idx.fourier[i]), nullptr);
        break;
      }
      case DeriveKind::momentum: {
        if (idx.momentum[i] == 0) break;
        MultiIndex d = idx;
        d.momentum[i] -= 1;
        out.accumulate(d, a * static_cast<double>(idx.momentum[i]), nullptr);
        break;
      }
      case DeriveKind::tparam: {
        if (idx.tdeg == 0) break;
        MultiIndex d = idx;
        d.tdeg -= 1;
        out.accumulate(d, a * static_cast<double>(idx.tdeg), nullptr);
        break;
      }
    }
  }
  return out;
}

ScaledSeries poisson_bracket(const ScaledSeries& f, const ScaledSeries& g,
                             double* tail) {
  require_compatible(f, g, "poisson_bracket");
  const Truncation tr = Truncation::tighter(f.trunc(), g.trunc());
  ScaledSeries out(f.dim(), f.mode(), tr, f.real_flag() && g.real_flag());
  const bool torus = f.mode() == PhaseMode::torus;
  for (int k = 0; k < f.dim(); ++k) {
    ScaledSeries df_p = derive(f, DeriveKind::momentum, k);
    ScaledSeries dg_p = derive(g, DeriveKind::momentum, k);
    ScaledSeries df_q, dg_q;
    if (torus) {
      df_q = derive(f, DeriveKind::fourier_log, k);
      dg_q = derive(g, DeriveKind::fourier_log, k);
    } else {
      // plain d/dq_k in singular mode
      auto dq = [k](const ScaledSeries& h) {
        ScaledSeries r(h.dim(), h.mode(), h.trunc(), h.real_flag());
        for (const auto& [idx, a] : h.terms()) {
          if (idx.fourier[k] == 0) continue;
          MultiIndex d = idx;
          d.fourier[k] -= 1;
          r.accumulate(d, a * static_cast<double>(idx.fourier[k]), nullptr);
        }
        return r;
      };
      df_q = dq(f);
      dg_q = dq(g);
    }
    // Operand order matters for the antisymmetry identity {f,f} == 0 to
    // cancel exactly in floating point: for f == g both products below
    // are the same call on equal values, hence bitwise equal.
    ScaledSeries t1 = mul(df_p, dg_q, tail);
    ScaledSeries t2 = mul(dg_p, df_q, tail);
    const ScaledSeries::Coeff unit =
        torus ? ScaledSeries::Coeff(0.0, 1.0) : ScaledSeries::Coeff(1.0);
    for (const auto& [idx, a] : t1.terms()) out.accumulate(idx, unit * a, tail);
    for (const auto& [idx, a] : t2.terms()) out.accumulate(idx, -unit * a, tail);
  }
  return out;
}

ScaledSeries hadamard_product(const ScaledSeries& f, const ScaledSeries& g) {
  require_compatible(f, g, "hadamard_product");
  ScaledSeries out(f.dim(), f.mode(), Truncation::tighter(f.trunc(), g.trunc()),
                   f.real_flag() && g.real_flag());
  for (const auto& [idx, a] : f.terms()) {
    const auto b = g.at(idx);
    if (b != ScaledSeries::Coeff(0.0)) out.accumulate(idx, a * b, nullptr);
  }
  return out;
}

ScaledSeries mean_over_q(const ScaledSeries& f) {
  if (f.mode() != PhaseMode::torus) {
    throw ShapeError("mean_over_q: only defined in torus mode");
  }
  ScaledSeries out(f.dim(), f.mode(), f.trunc(), f.real_flag());
  for (const auto& [idx, a] : f.terms()) {
    if (idx.fourier_abs() == 0) out.accumulate(idx, a, nullptr);
  }
  return out;
}

}  // namespace kamkit
