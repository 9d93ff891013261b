#include "imkit/association.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "imkit/numeric.hpp"

namespace imkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gamma(shape,1) cdf extended to theta <= 0 and theta = inf, with the
// x = 0 convention G_0 := point mass at 0.
double gamma_cdf_ext(double theta, double shape) {
  if (shape == 0.0) return theta < 0.0 ? 0.0 : 1.0;
  if (theta <= 0.0) return 0.0;
  return gamma_cdf(theta, shape);
}

double gamma_quantile_ext(double u, double shape) {
  if (shape == 0.0) return 0.0;
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return kInf;
  return gamma_quantile(u, shape);
}

void check_u_open(double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("focal_interval: u must lie in (0,1)");
}

void check_u_closed(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("focal_hull: u must lie in [0,1]");
}

}  // namespace

std::string_view Association::name() const {
  switch (model_) {
    case Model::Gaussian: return "gaussian";
    case Model::Poisson: return "poisson";
    case Model::Exponential: return "exponential";
  }
  return "unknown";
}

std::pair<double, double> Association::param_space() const {
  if (model_ == Model::Gaussian) return {-kInf, kInf};
  return {0.0, kInf};
}

EndpointTrend Association::trend() const {
  return model_ == Model::Poisson ? EndpointTrend::Increasing : EndpointTrend::Decreasing;
}

void Association::check_observation(double x) const {
  if (!std::isfinite(x)) throw DomainError("observation must be finite");
  switch (model_) {
    case Model::Gaussian: return;
    case Model::Poisson:
      if (x < 0.0 || x != std::floor(x)) {
        throw DomainError("poisson observation must be a non-negative integer");
      }
      return;
    case Model::Exponential:
      if (!(x > 0.0)) throw DomainError("exponential observation must be positive");
      return;
  }
}

double Association::focal_lower_limit(double x, double u) const {
  switch (model_) {
    case Model::Gaussian:
      if (u <= 0.0) return kInf;
      if (u >= 1.0) return -kInf;
      return x - norm_quantile(u);
    case Model::Poisson: return gamma_quantile_ext(u, x);
    case Model::Exponential:
      if (u <= 0.0) return kInf;
      if (u >= 1.0) return 0.0;
      return x / -std::log1p(-u);
  }
  return 0.0;
}

double Association::focal_upper_limit(double x, double u) const {
  if (model_ == Model::Poisson) return gamma_quantile_ext(u, x + 1.0);
  return focal_lower_limit(x, u);
}

FocalInterval Association::focal_interval(double x, double u) const {
  check_observation(x);
  check_u_open(u);
  return {focal_lower_limit(x, u), focal_upper_limit(x, u)};
}

FocalInterval Association::focal_hull(double x, double u_lo, double u_hi) const {
  check_u_closed(u_lo);
  check_u_closed(u_hi);
  if (u_lo > u_hi) throw DomainError("focal_hull: u_lo > u_hi");
  if (trend() == EndpointTrend::Increasing) {
    return {focal_lower_limit(x, u_lo), focal_upper_limit(x, u_hi)};
  }
  return {focal_lower_limit(x, u_hi), focal_upper_limit(x, u_lo)};
}

UInterval Association::a_event(double x, double a, double b) const {
  if (!(a < b)) return {0.0, 0.0};
  switch (model_) {
    case Model::Gaussian:
      // x - Phi^{-1}(u) in (a, b)
      return {norm_cdf(x - b), norm_cdf(x - a)};
    case Model::Poisson:
      // G_x^{-1}(u) > a and G_{x+1}^{-1}(u) < b
      return {gamma_cdf_ext(a, x), std::isinf(b) ? 1.0 : gamma_cdf_ext(b, x + 1.0)};
    case Model::Exponential: {
      // x / -log(1-u) in (a, b)
      const double lo = b <= 0.0 ? 1.0 : (std::isinf(b) ? 0.0 : -std::expm1(-x / b));
      const double hi = a <= 0.0 ? 1.0 : -std::expm1(-x / a);
      return {lo, hi};
    }
  }
  return {0.0, 0.0};
}

double Association::simulate(double theta, RandomStream& stream) const {
  const double u = stream.uniform();
  switch (model_) {
    case Model::Gaussian: return theta + norm_quantile(u);
    case Model::Poisson: {
      if (!(theta > 0.0)) throw DomainError("poisson simulate: theta must be positive");
      // smallest k with F_theta(k) > 1 - u
      const double target = 1.0 - u;
      long k = 0;
      double p = std::exp(-theta);
      double cum = p;
      while (cum <= target) {
        ++k;
        p *= theta / static_cast<double>(k);
        cum += p;
        if (p == 0.0 && static_cast<double>(k) > theta) break;
      }
      return static_cast<double>(k);
    }
    case Model::Exponential:
      if (!(theta > 0.0)) throw DomainError("exponential simulate: theta must be positive");
      return -theta * std::log1p(-u);
  }
  return 0.0;
}

double Association::sampling_cdf(double x, double theta) const {
  switch (model_) {
    case Model::Gaussian: return norm_cdf(x - theta);
    case Model::Poisson: return x < 0.0 ? 0.0 : poisson_cdf(static_cast<long>(std::floor(x)), theta);
    case Model::Exponential: return x <= 0.0 ? 0.0 : -std::expm1(-x / theta);
  }
  return 0.0;
}

std::pair<double, double> Association::theta_bracket(double x) const {
  check_observation(x);
  constexpr double tail = 1e-12;
  switch (model_) {
    case Model::Gaussian: return {x - 9.0, x + 9.0};
    case Model::Poisson:
      return {x == 0.0 ? tail : gamma_quantile(tail, x), gamma_quantile(1.0 - tail, x + 1.0)};
    case Model::Exponential: return {x / -std::log(tail), x / -std::log1p(-tail)};
  }
  return {0.0, 0.0};
}

Association gaussian_mean_assoc() { return Association(Association::Model::Gaussian); }
Association poisson_mean_assoc() { return Association(Association::Model::Poisson); }
Association exponential_mean_assoc() { return Association(Association::Model::Exponential); }

Association association_by_name(std::string_view name) {
  if (name == "gaussian") return gaussian_mean_assoc();
  if (name == "poisson") return poisson_mean_assoc();
  if (name == "exponential") return exponential_mean_assoc();
  throw DomainError("unknown model '" + std::string(name) + "'");
}

}  // namespace imkit
