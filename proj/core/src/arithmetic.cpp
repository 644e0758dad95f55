#include <kamkit/arithmetic.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include <kamkit/errors.hpp>

namespace kamkit {

namespace mp = boost::multiprecision;
using BigInt = mp::cpp_int;
using BigRat = mp::cpp_rational;

// --- best_constant ------------------------------------------------------

DiophantineCertificate best_constant(const std::vector<double>& alpha,
                                     double nu, long long ncut,
                                     long long budget) {
  const int n = static_cast<int>(alpha.size());
  if (n < 1) throw DomainError("best_constant: empty vector");
  bool nonzero = false;
  for (double a : alpha) nonzero = nonzero || a != 0.0;
  if (!nonzero) throw DomainError("best_constant: alpha must be nonzero");
  if (!(nu > 0.0)) throw DomainError("best_constant: nu must be positive");
  if (ncut < 1) throw DomainError("best_constant: ncut must be >= 1");

  // side^n lattice points, scanning only half the box by symmetry
  double points = 1.0;
  for (int i = 0; i < n; ++i) points *= 2.0 * static_cast<double>(ncut) + 1.0;
  if (points / 2.0 > static_cast<double>(budget)) {
    // largest radius that fits the budget
    long long r = ncut;
    while (r > 1) {
      double p = 1.0;
      for (int i = 0; i < n; ++i) p *= 2.0 * static_cast<double>(r) + 1.0;
      if (p / 2.0 <= static_cast<double>(budget)) break;
      --r;
    }
    throw ResourceError("best_constant: box with ncut=" + std::to_string(ncut) +
                        " exceeds the lattice budget; affordable radius is " +
                        std::to_string(r));
  }

  const double exponent = (static_cast<double>(n) + nu) / 2.0;
  DiophantineCertificate cert;
  cert.alpha = alpha;
  cert.nu = nu;
  cert.ncut = ncut;
  cert.C = std::numeric_limits<double>::infinity();
  cert.worst_j.assign(n, 0);

  // Odometer over the box, with the leading coordinate restricted to
  // j_0 >= 0 (j and -j give the same value).  For each prefix the inner
  // loop goes over the last coordinate with an incremental dot product.
  std::vector<long long> j(n, 0);
  j[0] = 0;
  for (int i = 1; i < n; ++i) j[i] = -ncut;

  auto product_at = [&](double dot, double norm_sq) {
    return std::abs(dot) * std::pow(norm_sq, exponent);
  };

  bool done = false;
  while (!done) {
    // prefix = j[0..n-2]; scan j[n-1]
    double dot_prefix = 0.0;
    double norm_prefix = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      dot_prefix += static_cast<double>(j[i]) * alpha[i];
      norm_prefix += static_cast<double>(j[i]) * static_cast<double>(j[i]);
    }
    bool prefix_zero = true;
    for (int i = 0; i + 1 < n; ++i) prefix_zero = prefix_zero && j[i] == 0;

    if (n == 1) {
      for (long long v = 1; v <= ncut; ++v) {
        const double dot = static_cast<double>(v) * alpha[0];
        // ||j|| >= 1, so |dot| >= C cannot improve the minimum
        if (std::abs(dot) < cert.C) {
          const double val = product_at(dot, static_cast<double>(v * v));
          if (val < cert.C) {
            cert.C = val;
            cert.worst_j[0] = v;
          }
        }
      }
      break;
    }

    const double an = alpha[n - 1];
    for (long long v = -ncut; v <= ncut; ++v) {
      if (prefix_zero && v <= 0) continue;  // skip 0 and the -j half
      const double dot = dot_prefix + static_cast<double>(v) * an;
      // ||j|| >= 1, so |dot| >= C cannot improve the minimum
      if (std::abs(dot) >= cert.C) continue;
      const double norm_sq =
          norm_prefix + static_cast<double>(v) * static_cast<double>(v);
      const double val = product_at(dot, norm_sq);
      if (val < cert.C) {
        cert.C = val;
        for (int i = 0; i + 1 < n; ++i) cert.worst_j[i] = j[i];
        cert.worst_j[n - 1] = v;
      }
    }

    // advance the prefix odometer (coordinate 0 stays >= 0)
    int pos = n - 2;
    while (true) {
      if (pos < 0) {
        done = true;
        break;
      }
      ++j[pos];
      if (j[pos] <= ncut) break;
      j[pos] = (pos == 0) ? 0 : -ncut;
      --pos;
    }
  }

  if (!std::isfinite(cert.C)) {
    throw DomainError("best_constant: empty scan");
  }
  return cert;
}

// --- liouville_witness ----------------------------------------------------

namespace {

BigInt pow10(const BigInt& e) {
  BigInt r = 1;
  BigInt base = 10;
  BigInt k = e;
  while (k > 0) {
    r *= base;
    --k;
  }
  return r;
}

BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::string to_string_exact(const BigRat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

}  // namespace

LiouvilleWitness liouville_witness(int N) {
  if (N < 2 || N > 4) {
    throw DomainError("liouville_witness: supported range is 2 <= N <= 4");
  }
  const int M = N + 2;  // truncation depth; tail exponent (M+1)! dwarfs N * N!

  // l_M = sum_{n=0..M} 10^{-n!}
  BigRat l_m = 0;
  for (int n = 0; n <= M; ++n) {
    l_m += BigRat(1, pow10(factorial(n)));
  }

  const BigInt b1 = pow10(factorial(N));  // 10^{N!}
  // b0 = -sum_{n=0..N} 10^{N!-n!} makes (1, l_N) . (b0, b1) vanish
  BigInt b0 = 0;
  for (int n = 0; n <= N; ++n) {
    b0 += pow10(factorial(N) - factorial(n));
  }
  b0 = -b0;

  // (alpha_trunc, beta) = b0 + l_M * b1 = 10^{N!} (l_M - l_N) > 0
  const BigRat inner = BigRat(b0) + l_m * BigRat(b1);

  // |l - l_M| <= 2 * 10^{-(M+1)!}
  const BigRat tail = BigRat(2, pow10(factorial(M + 1))) * BigRat(b1);

  const BigInt norm_sq = b0 * b0 + b1 * b1;

  // certify (|inner| + tail)^2 * (||beta||^2)^N <= 4 exactly
  BigRat lhs = mp::abs(inner) + tail;
  lhs *= lhs;
  BigRat pow_norm = 1;
  for (int i = 0; i < N; ++i) pow_norm *= BigRat(norm_sq);
  const bool certified = lhs * pow_norm <= 4;

  // ||beta|| >= 10^{N!}  <=>  ||beta||^2 >= 10^{2 N!}
  const bool norm_ok = norm_sq >= b1 * b1;

  LiouvilleWitness w;
  w.N = N;
  w.truncation_depth = M;
  w.beta0 = b0.str();
  w.beta1 = b1.str();
  w.inner_product = to_string_exact(inner);
  w.tail_bound = to_string_exact(tail);
  w.norm_beta_squared = norm_sq.str();
  w.certified = certified;
  w.norm_lower_bound_ok = norm_ok;
  return w;
}

// --- measure_estimate -----------------------------------------------------

namespace {

// Per-sample substream: outcomes are independent of evaluation order.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97f4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

MeasureEstimate measure_estimate(double nu, double C, double N,
                                 long long samples, long long ncut,
                                 std::uint64_t seed) {
  if (!(nu > 0.0)) throw DomainError("measure_estimate: nu must be positive");
  if (C < 0.0) throw DomainError("measure_estimate: C must be >= 0");
  if (!(N > 0.0)) throw DomainError("measure_estimate: N must be positive");
  if (samples < 1) throw DomainError("measure_estimate: samples must be >= 1");
  if (ncut < 1) throw DomainError("measure_estimate: ncut must be >= 1");

  // K_nu = sum_{j in Z^2 \ 0} ||j||^{-2-nu}: partial sum over
  // ||j||_inf <= m0 plus the shell tail bound 8 sum_{m>m0} m^{-1-nu}
  // <= 8 m0^{-nu} / nu.
  const long long m0 = std::max<long long>(ncut, 512);
  double knu = 0.0;
  for (long long x = -m0; x <= m0; ++x) {
    for (long long y = -m0; y <= m0; ++y) {
      if (x == 0 && y == 0) continue;
      const double norm_sq = static_cast<double>(x * x + y * y);
      knu += std::pow(norm_sq, -(2.0 + nu) / 2.0);
    }
  }
  knu += 8.0 * std::pow(static_cast<double>(m0), -nu) / nu;

  MeasureEstimate out;
  out.k_nu = knu;
  out.samples = samples;
  // area bound 4 K_nu C N over the square of area (2N)^2
  out.paper_bound = std::min(1.0, 4.0 * knu * C * N / (4.0 * N * N));

  // thresholds C / ||j||^{2+nu} for the half box (j and -j agree)
  struct Strip {
    double a0, a1, thr;
  };
  std::vector<Strip> strips;
  strips.reserve(static_cast<std::size_t>((2 * ncut + 1) * ncut));
  for (long long x = 0; x <= ncut; ++x) {
    for (long long y = -ncut; y <= ncut; ++y) {
      if (x == 0 && y <= 0) continue;
      const double norm_sq = static_cast<double>(x * x + y * y);
      strips.push_back({static_cast<double>(x), static_cast<double>(y),
                        C * std::pow(norm_sq, -(2.0 + nu) / 2.0)});
    }
  }

  long long violations = 0;
  for (long long i = 0; i < samples; ++i) {
    std::mt19937_64 rng(splitmix64(seed ^ static_cast<std::uint64_t>(i)));
    std::uniform_real_distribution<double> unif(-N, N);
    const double a0 = unif(rng);
    const double a1 = unif(rng);
    for (const Strip& st : strips) {
      if (std::abs(st.a0 * a0 + st.a1 * a1) < st.thr) {
        ++violations;
        break;
      }
    }
  }
  out.violations = violations;
  out.empirical_fraction =
      static_cast<double>(violations) / static_cast<double>(samples);
  return out;
}

}  // namespace kamkit
