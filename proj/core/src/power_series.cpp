#include <kamkit/power_series.hpp>

#include <cmath>

namespace kamkit {

PowerSeries PowerSeries::geometric(int degree) {
  return PowerSeries(std::vector<double>(degree + 1, 1.0), 1.0);
}

PowerSeries PowerSeries::exponential(int degree) {
  std::vector<double> c(degree + 1);
  double f = 1.0;
  for (int n = 0; n <= degree; ++n) {
    c[n] = 1.0 / f;
    f *= n + 1;
  }
  return PowerSeries(std::move(c));
}

PowerSeries PowerSeries::newton_remainder(int degree) {
  // e^{-z}(1+z) - 1 = sum_{n>=2} (-1)^n (1-n)/n! z^n
  std::vector<double> c(degree + 1, 0.0);
  double f = 1.0;  // n!
  for (int n = 0; n <= degree; ++n) {
    if (n >= 2) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      c[n] = sign * (1.0 - n) / f;
    }
    f *= n + 1;
  }
  return PowerSeries(std::move(c));
}

bool PowerSeries::nonnegative() const {
  for (double v : c_) {
    if (v < 0.0) return false;
  }
  return true;
}

PowerSeries PowerSeries::shifted(int k) const {
  std::vector<double> c(c_.size() + k, 0.0);
  for (std::size_t n = 0; n < c_.size(); ++n) c[n + k] = c_[n];
  return PowerSeries(std::move(c), radius_);
}

double PowerSeries::eval(double z) const {
  double acc = 0.0;
  for (std::size_t n = c_.size(); n-- > 0;) acc = acc * z + c_[n];
  return acc;
}

PowerSeries borel_transform(const PowerSeries& f) {
  std::vector<double> c(f.coeffs());
  double fact = 1.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    c[n] /= fact;
    fact *= static_cast<double>(n + 1);
  }
  // dividing by n! can only grow the disk of convergence
  return PowerSeries(std::move(c), f.radius());
}

double PowerSeries2::eval(double z, double w) const {
  double acc = 0.0;
  for (const auto& [deg, v] : c) {
    acc += v * std::pow(z, deg.first) * std::pow(w, deg.second);
  }
  return acc;
}

}  // namespace kamkit
