#pragma once

#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include "imkit/numeric.hpp"

namespace imkit {

/// One-parameter continuous model with score T_theta(x) = d/dtheta log f and
/// curvature V_theta(x) = T^2 + dT/dtheta.
///
/// The balance machinery assumes T_theta is strictly increasing in x, so
/// that events on the score scale are events on the data scale; both
/// built-in models satisfy this.
class ScoreModel {
 public:
  virtual ~ScoreModel() = default;

  virtual std::string_view name() const = 0;
  virtual double density(double x, double theta) const = 0;
  virtual double cdf(double x, double theta) const = 0;
  virtual double quantile(double p, double theta) const = 0;
  virtual double score(double x, double theta) const = 0;
  virtual double curvature(double x, double theta) const = 0;
  virtual std::pair<double, double> support(double theta) const = 0;
  /// T_theta(support) as an open interval.
  virtual std::pair<double, double> score_range(double theta) const = 0;
  /// The x with T_theta(x) = s. Ends of score_range map to ends of support.
  virtual double score_inverse(double s, double theta) const = 0;
  /// d score_inverse / ds.
  virtual double score_inverse_slope(double s, double theta) const = 0;
  virtual void check_theta(double theta) const;

  /// E_theta[T 1{a < T < b}], by quadrature over x.
  double partial_score_expectation(double a, double b, double theta) const;
  /// Density of T_theta(X) at s, by change of variables.
  double score_density(double s, double theta) const;
  /// P_theta{a < T < b}.
  double score_prob(double a, double b, double theta) const;
};

/// X ~ N(theta, 1): T = x - theta, V = T^2 - 1.
std::unique_ptr<ScoreModel> gaussian_score_model();
/// X ~ Exp(mean theta): T = (x - theta) / theta^2,
/// V = T^2 + (theta - 2x) / theta^3.
std::unique_ptr<ScoreModel> exponential_score_model();
std::unique_ptr<ScoreModel> score_model_by_name(std::string_view name);

/// xi_-(t) for t >= 0: the xi <= 0 with E[T 1{xi < T < t}] = 0. Throws
/// BracketError if no balancing point exists.
double solve_xi_minus(const ScoreModel& model, double theta0, double t, double tol = 1e-12);
/// xi_+(t) for t < 0: the xi >= 0 with E[T 1{t < T < xi}] = 0.
double solve_xi_plus(const ScoreModel& model, double theta0, double t, double tol = 1e-12);

/// Balanced interval (l, r) on the score scale whose boundary passes
/// through t, solved directly.
std::pair<double, double> balanced_interval(const ScoreModel& model, double theta0, double t);

struct BalancedPair {
  double lower;  // xi <= 0
  double upper;  // xi >= 0
};

/// Score-balanced interval family B_t = (xi_-(t), xi_+(t)) at theta0.
///
/// Balanced pairs are solved on 64 geometric |t| values per side, spanning
/// the central 99.99% of the score distribution, and joined into a single
/// decreasing curve l = L(r) through (0,0). Differentiating the balance
/// equation gives L'(r) = r f_T(r) / (l f_T(l)), so lookups use cubic
/// Hermite interpolation with exact slopes, in log(-l) against log(r)
/// (each offset by the log distance to a finite end of the score range),
/// in either direction. Arguments outside the table are solved directly.
class BalancedFamily {
 public:
  BalancedFamily(const ScoreModel& model, double theta0);

  double theta0() const { return theta0_; }
  double xi_minus(double t) const;
  double xi_plus(double t) const;
  /// Balanced pair whose boundary passes through t.
  std::pair<double, double> interval(double t) const;
  /// D(t) = xi_+(t) - xi_-(t).
  double width(double t) const;

  /// Tabulated pairs in increasing order of `upper`, starting at (0,0).
  const std::vector<BalancedPair>& table() const { return table_; }
  /// Absolute t values at which pairs were solved, per side.
  const std::vector<double>& positive_nodes() const { return pos_nodes_; }
  const std::vector<double>& negative_nodes() const { return neg_nodes_; }

 private:
  struct Curves;

  const ScoreModel* model_;
  double theta0_;
  double lo_end_ = 0.0;  // score range of theta0
  double hi_end_ = 0.0;
  std::vector<BalancedPair> table_;
  std::vector<double> pos_nodes_;
  std::vector<double> neg_nodes_;
  std::shared_ptr<const Curves> curves_;
};

BalancedFamily build_balanced_family(const ScoreModel& model, double theta0);

/// bel_x({theta0}^c) = P_theta0{D(T) < D(T_theta0(x))} = P_theta0{l < T < r}
/// for the balanced pair through T_theta0(x).
double two_sided_belief(const ScoreModel& model, const BalancedFamily& family, double x);

struct UnimodalReport {
  bool holds = false;
  bool argmin_defined = true;  // false when V is flat on the scanned range
  double argmin = 0.0;
  double v_at_zero = 0.0;
  double v_min = 0.0;
  double scan_lo = 0.0;
  double scan_hi = 0.0;
};

/// Whether V(t) = V_theta0(x(t)) is uniquely minimised at t = 0 with
/// V(0) < 0, on a grid over the central 99.99% score range refined by
/// golden-section search.
UnimodalReport check_unimodal_condition(const ScoreModel& model, double theta0, int grid = 2001);

/// pl_x(theta) = 1 - bel_x({theta}^c) under the score-balanced family at
/// theta, solved directly at t = T_theta(x).
double score_balanced_pl(const ScoreModel& model, double x, double theta);
std::vector<double> score_balanced_pl_curve(const ScoreModel& model, const std::vector<double>& theta_grid,
                                            double x);

}  // namespace imkit
