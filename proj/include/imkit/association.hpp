#pragma once

#include <string_view>
#include <utility>

#include "imkit/assertion.hpp"
#include "imkit/random_stream.hpp"

namespace imkit {

/// Interval [lo, hi] of the auxiliary space (0,1). Empty when !(lo < hi).
struct UInterval {
  double lo;
  double hi;

  bool empty() const { return !(lo < hi); }
  double length() const { return empty() ? 0.0 : hi - lo; }
};

/// How the focal endpoints of Theta_x(u) move with u.
enum class EndpointTrend { Increasing, Decreasing };

/// Scalar association x = a(theta, u) with u ~ Unif(0,1), represented by the
/// endpoint maps of its solution sets Theta_x(u) = [focal_lower, focal_upper].
///
/// Every built-in model has non-empty solution sets for all (x, u) and both
/// endpoints monotone in u in the same direction, so the union of
/// Theta_x(u) over an interval of u values is again an interval whose ends
/// are endpoint values at the ends of the u interval.
class Association {
 public:
  enum class Model { Gaussian, Poisson, Exponential };

  explicit Association(Model model) : model_(model) {}

  Model model() const { return model_; }
  std::string_view name() const;
  /// Parameter space as an open interval (lo, hi).
  std::pair<double, double> param_space() const;
  EndpointTrend trend() const;
  /// Whether plausibility curves are best scanned on a log scale.
  bool positive_parameter() const { return model_ != Model::Gaussian; }

  /// Throws DomainError if x is not a possible observation.
  void check_observation(double x) const;

  /// Theta_x(u) for u in the open interval (0,1).
  FocalInterval focal_interval(double x, double u) const;
  /// Union of Theta_x(u) over u in [u_lo, u_hi] subset of [0,1]; ends at 0
  /// or 1 are taken as limits and may be infinite.
  FocalInterval focal_hull(double x, double u_lo, double u_hi) const;

  /// {u : Theta_x(u) subset of (a, b)}, for a < b with either end possibly
  /// infinite. Boundary points are ignored (P_U-null).
  UInterval a_event(double x, double a, double b) const;

  double simulate(double theta, RandomStream& stream) const;
  /// Distribution function of X given theta.
  double sampling_cdf(double x, double theta) const;

  /// Range of theta values worth scanning for a plausibility region given x.
  std::pair<double, double> theta_bracket(double x) const;

 private:
  double focal_lower_limit(double x, double u) const;
  double focal_upper_limit(double x, double u) const;

  Model model_;
};

/// X ~ N(theta, 1), X = theta + Phi^{-1}(U); Theta_x(u) = {x - Phi^{-1}(u)}.
Association gaussian_mean_assoc();
/// X ~ Poisson(theta) via F_theta(X-1) <= 1-U < F_theta(X);
/// Theta_x(u) = (G_x^{-1}(u), G_{x+1}^{-1}(u)] with G_0^{-1} := 0.
Association poisson_mean_assoc();
/// X ~ Exp(mean theta), X = -theta log(1-U); Theta_x(u) = {x / -log(1-u)}.
Association exponential_mean_assoc();

/// Look up a model by its CLI identifier ("gaussian", "poisson",
/// "exponential").
Association association_by_name(std::string_view name);

}  // namespace imkit
