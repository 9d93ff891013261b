#pragma once

// Reference computations that do not go through the library under test.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline double phi_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double phi_quantile(double p) {
  return bisect([&](double z) { return phi_cdf(z) - p; }, -40.0, 40.0);
}

/// P{X <= k}, X ~ Poisson(theta), by direct summation of the pmf.
inline double poisson_cdf_sum(long k, double theta) {
  double term = std::exp(-theta);
  double total = term;
  for (long j = 1; j <= k; ++j) {
    term *= theta / static_cast<double>(j);
    total += term;
  }
  return total;
}

/// Central Student-t cdf from the finite trigonometric series
/// (odd and even degrees of freedom handled separately).
inline double student_t_cdf(double t, int df) {
  const double theta = std::atan(t / std::sqrt(static_cast<double>(df)));
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  double a;  // P{|T| < t} for t >= 0, signed
  if (df % 2 == 1) {
    double sum = 0.0;
    if (df > 1) {
      double term = c;
      sum = term;
      for (int k = 3; k <= df - 2; k += 2) {
        term *= c * c * (k - 1) / static_cast<double>(k);
        sum += term;
      }
    }
    a = 2.0 / std::numbers::pi * (theta + s * sum);
  } else {
    double term = 1.0;
    double sum = term;
    for (int k = 2; k <= df - 2; k += 2) {
      term *= c * c * (k - 1) / static_cast<double>(k);
      sum += term;
    }
    a = s * sum;
  }
  return 0.5 + 0.5 * a;
}

}  // namespace oracle
