// kamkit :: Diophantine certificates, a Liouville-type witness, and the
// measure estimate for the set of badly approximable frequency vectors.
#ifndef KAMKIT_ARITHMETIC_HPP
#define KAMKIT_ARITHMETIC_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace kamkit {

/// Result of an exhaustive scan of |(j, alpha)| * ||j||^{n+nu} over the
/// integer box 0 < ||j||_inf <= ncut.  C is the exact minimum found
/// (the best constant valid at this search radius); C == 0 signals an
/// exact resonance inside the box.  ||j|| is Euclidean; changing the
/// norm only rescales C.
struct DiophantineCertificate {
  std::vector<double> alpha;
  double nu = 0.0;
  long long ncut = 0;
  double C = 0.0;
  std::vector<long long> worst_j;
};

/// Exhaustive scan.  Throws DomainError on bad arguments and
/// ResourceError when the box exceeds `budget` lattice points (the scan
/// is performed up to the largest affordable radius first, which is
/// reported in the exception message).
DiophantineCertificate best_constant(const std::vector<double>& alpha,
                                     double nu, long long ncut,
                                     long long budget = 2'000'000'000LL);

/// Exact-arithmetic witness that alpha = (1, sum_n 10^{-n!}) admits
/// integer vectors beta_N with |(alpha, beta_N)| <= 2 ||beta_N||^{-N}:
/// no Diophantine condition of exponent N-2 or better can hold.
///
/// beta_N = (-sum_{n=0..N} 10^{N!-n!}, 10^{N!}); the truncation depth M
/// used for the second component of alpha is chosen so the tail of the
/// series is dominated.  All certified quantities are exact big
/// rationals, serialised as decimal strings.
struct LiouvilleWitness {
  int N = 0;
  int truncation_depth = 0;      // M: alpha is truncated to l_M
  std::string beta0;             // first component of beta_N (exact)
  std::string beta1;             // second component, 10^{N!} (exact)
  std::string inner_product;     // (alpha_trunc, beta_N), exact rational
  std::string tail_bound;        // bound on |l - l_M| * |beta1|, exact
  std::string norm_beta_squared; // ||beta_N||^2, exact integer
  bool certified = false;        // (|inner| + tail)^2 ||beta||^{2N} <= 4
  bool norm_lower_bound_ok = false;  // ||beta_N|| >= 10^{N!}
};

/// Supported range 2 <= N <= 4 (the exponents grow factorially).
LiouvilleWitness liouville_witness(int N);

/// Monte Carlo check of the planar measure bound: sample points
/// uniformly in [-N, N]^2 and count violations of
/// |(j, a)| >= C / ||j||^{2+nu} for some 0 < ||j||_inf <= ncut.
/// paper_bound is the area estimate 4 K_nu C N normalised by the square
/// area, with K_nu = sum_{j != 0} ||j||^{-2-nu} evaluated by partial
/// summation plus an integral tail bound (an upper bound, so the
/// reported bound stays valid).
struct MeasureEstimate {
  double empirical_fraction = 0.0;
  double paper_bound = 0.0;
  double k_nu = 0.0;
  long long violations = 0;
  long long samples = 0;
};

MeasureEstimate measure_estimate(double nu, double C, double N,
                                 long long samples, long long ncut,
                                 std::uint64_t seed);

}  // namespace kamkit

#endif  // KAMKIT_ARITHMETIC_HPP
