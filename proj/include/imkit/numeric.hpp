#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace imkit {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to meet its contract (no convergence,
/// no sign change, empty focal set, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericError {
 public:
  using NumericError::NumericError;
};

class BracketError : public NumericError {
 public:
  using NumericError::NumericError;
};

struct QuadratureSpec {
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  int max_subdivisions = 500;

  void validate() const;
};

/// Tolerances used for CDF evaluations that go through quadrature.
inline constexpr QuadratureSpec kCdfQuadrature{1e-10, 1e-10, 500};

// Standard normal.
double norm_pdf(double z);
double norm_cdf(double z);
/// Inverse of norm_cdf on (0,1); Wichura's AS241 with a Newton polish.
double norm_quantile(double p);

/// Regularized lower incomplete gamma P(shape, x), i.e. the Gamma(shape,1)
/// distribution function at x.
double gamma_cdf(double x, double shape);
/// Regularized upper incomplete gamma Q(shape, x) = 1 - P(shape, x), computed
/// without cancellation.
double gamma_sf(double x, double shape);
double gamma_pdf(double x, double shape);
double gamma_quantile(double p, double shape);

double poisson_pmf(long k, double theta);
/// P{X <= k} for X ~ Poisson(theta), via the gamma duality.
double poisson_cdf(long k, double theta);

/// P{(ncp + Z) / W <= z} with Z ~ N(0,1) independent of
/// W = sqrt(ChiSq(df) / df). Evaluated as E_W[Phi(z W - ncp)] by quadrature
/// over the chi variate.
double noncentral_t_cdf(double z, int df, double ncp,
                        const QuadratureSpec& spec = kCdfQuadrature);

/// Adaptive Gauss-Kronrod (G10/K21) quadrature. Either limit may be infinite;
/// infinite ranges are mapped onto a finite interval first. Throws
/// QuadratureError when the tolerance is not met within max_subdivisions.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec = {});

/// Brent's method on a sign-changing bracket. Returns a point whose bracket
/// width is <= tol, or where f vanishes. Throws BracketError when
/// f(lo) * f(hi) > 0.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double tol, int max_iter = 200);

}  // namespace imkit
