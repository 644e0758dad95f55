// kamkit :: truncated scalar power series driving the functional calculus.
#ifndef KAMKIT_POWER_SERIES_HPP
#define KAMKIT_POWER_SERIES_HPP

#include <limits>
#include <map>
#include <utility>
#include <vector>

namespace kamkit {

/// One-variable truncated power series with real coefficients.
/// `radius` records the radius of convergence of the untruncated model
/// function (infinite by default); the Borel calculus refuses to
/// evaluate bounds at or beyond it.
class PowerSeries {
 public:
  PowerSeries() = default;
  explicit PowerSeries(std::vector<double> coeffs,
                       double radius = std::numeric_limits<double>::infinity())
      : c_(std::move(coeffs)), radius_(radius) {}

  /// 1/(1-z) truncated at `degree`; radius 1.
  static PowerSeries geometric(int degree);
  /// e^z truncated at `degree`.
  static PowerSeries exponential(int degree);
  /// e^{-z}(1+z) - 1 truncated at `degree`; vanishes to second order.
  static PowerSeries newton_remainder(int degree);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  double radius() const { return radius_; }
  double coeff(int n) const {
    return (n >= 0 && n < static_cast<int>(c_.size())) ? c_[n] : 0.0;
  }
  const std::vector<double>& coeffs() const { return c_; }

  bool nonnegative() const;

  /// Multiply by z^k (shift coefficients up, keeping the stored length).
  PowerSeries shifted(int k) const;

  double eval(double z) const;

 private:
  std::vector<double> c_;
  double radius_ = std::numeric_limits<double>::infinity();
};

/// Coefficientwise division by n!.
PowerSeries borel_transform(const PowerSeries& f);

/// Two-variable truncated series, used by the parametric fixed-point
/// driver.  Keys are (degree in z, degree in w).
struct PowerSeries2 {
  std::map<std::pair<int, int>, double> c;

  double eval(double z, double w) const;
};

}  // namespace kamkit

#endif  // KAMKIT_POWER_SERIES_HPP
