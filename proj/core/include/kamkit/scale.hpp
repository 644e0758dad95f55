// kamkit :: scale parameters for the directed family of analytic domains.
#ifndef KAMKIT_SCALE_HPP
#define KAMKIT_SCALE_HPP

#include <kamkit/errors.hpp>

namespace kamkit {

/// Global cap on every scale parameter.  All domains are indexed by
/// s in (0, kScaleCap]; the rescaling lemmas assume the cap is <= 1 and
/// the torus/polydisk weights are calibrated for 1/2.
inline constexpr double kScaleCap = 0.5;

inline bool valid_scale(double s) { return s > 0.0 && s <= kScaleCap; }

inline void require_scale(double s, const char* where) {
  if (!valid_scale(s)) {
    throw DomainError(std::string(where) + ": scale " + std::to_string(s) +
                      " outside (0, " + std::to_string(kScaleCap) + "]");
  }
}

/// An ordered pair of scales 0 < s < t <= S used by every two-scale
/// estimate: quantities are measured at the large scale t and produced
/// at the small scale s, losing powers of (t - s).
struct ScalePair {
  double s;
  double t;
  double S;

  ScalePair(double s_, double t_, double S_ = kScaleCap) : s(s_), t(t_), S(S_) {
    if (!(S > 0.0 && S <= kScaleCap)) {
      throw DomainError("ScalePair: cap S outside (0, 1/2]");
    }
    if (!(0.0 < s && s < t && t <= S)) {
      throw DomainError("ScalePair: need 0 < s < t <= S");
    }
  }

  double gap() const { return t - s; }
};

}  // namespace kamkit

#endif  // KAMKIT_SCALE_HPP
