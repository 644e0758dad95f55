// kamkit :: lattice exponents indexing Fourier-Taylor monomials.
#ifndef KAMKIT_MULTI_INDEX_HPP
#define KAMKIT_MULTI_INDEX_HPP

#include <compare>
#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

namespace kamkit {

/// Which phase space a series lives on.
///
/// torus    -- germs along the real torus: q ranges over a complex
///             annulus (Fourier exponents in Z^n), p over a polydisk,
///             plus one deformation parameter t.
/// singular -- germs at the origin of C^{2n}: both q and p exponents
///             are non-negative and there is no parameter.
enum class PhaseMode { torus, singular };

/// Exponent of one monomial q^I p^J t^k.
struct MultiIndex {
  std::vector<int> fourier;   // I, one entry per q variable
  std::vector<int> momentum;  // J, one entry per p variable (>= 0)
  int tdeg = 0;               // k, exponent of the parameter (>= 0)

  MultiIndex() = default;
  MultiIndex(std::vector<int> f, std::vector<int> m, int k = 0)
      : fourier(std::move(f)), momentum(std::move(m)), tdeg(k) {}

  int dim() const { return static_cast<int>(fourier.size()); }

  /// |I|_1 with Fourier entries counted in absolute value.
  int fourier_abs() const {
    int a = 0;
    for (int v : fourier) a += std::abs(v);
    return a;
  }

  /// Largest |I_i|.
  int fourier_sup() const {
    int a = 0;
    for (int v : fourier) a = std::max(a, std::abs(v));
    return a;
  }

  /// |J|_1.
  int momentum_deg() const {
    return std::accumulate(momentum.begin(), momentum.end(), 0);
  }

  bool is_zero() const { return fourier_abs() == 0 && momentum_deg() == 0 && tdeg == 0; }

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

  std::string str() const;
};

/// Per-series caps: |I_i| <= max_fourier for every i, |J|_1 <=
/// max_momentum_deg, tdeg <= max_tdeg.
struct Truncation {
  int max_fourier = 0;
  int max_momentum_deg = 0;
  int max_tdeg = 0;

  bool admits(const MultiIndex& idx) const {
    return idx.fourier_sup() <= max_fourier &&
           idx.momentum_deg() <= max_momentum_deg && idx.tdeg <= max_tdeg;
  }

  /// Componentwise minimum; binary operations truncate to this.
  static Truncation tighter(const Truncation& a, const Truncation& b) {
    return {std::min(a.max_fourier, b.max_fourier),
            std::min(a.max_momentum_deg, b.max_momentum_deg),
            std::min(a.max_tdeg, b.max_tdeg)};
  }

  friend bool operator==(const Truncation&, const Truncation&) = default;
};

// --- ideal classification -------------------------------------------------
//
// The invariant ideal is generated by the p_i on the torus and by the
// products q_i p_i at the singular point.  "Units" counts how many
// generator factors a monomial provably contains: a monomial lies in the
// ideal iff units >= 1 and in its square iff units >= 2.

inline int ideal_units(const MultiIndex& idx, PhaseMode mode) {
  if (mode == PhaseMode::torus) return idx.momentum_deg();
  int u = 0;
  for (std::size_t i = 0; i < idx.momentum.size(); ++i) {
    u += std::min(idx.fourier[i], idx.momentum[i]);
  }
  return u;
}

inline bool in_ideal(const MultiIndex& idx, PhaseMode mode) {
  return ideal_units(idx, mode) >= 1;
}

inline bool in_ideal_square(const MultiIndex& idx, PhaseMode mode) {
  return ideal_units(idx, mode) >= 2;
}

/// Torus: depends on t only (I = 0, J = 0).  Singular: a constant.
inline bool is_pure_parameter(const MultiIndex& idx, PhaseMode mode) {
  if (mode == PhaseMode::torus) {
    return idx.fourier_abs() == 0 && idx.momentum_deg() == 0;
  }
  return idx.is_zero();
}

/// Member of the transversal F: pure parameter part plus the square of
/// the invariant ideal.
inline bool in_transversal(const MultiIndex& idx, PhaseMode mode) {
  return is_pure_parameter(idx, mode) || in_ideal_square(idx, mode);
}

}  // namespace kamkit

#endif  // KAMKIT_MULTI_INDEX_HPP
