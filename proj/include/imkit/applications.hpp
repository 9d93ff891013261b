#pragma once

#include <string>
#include <utility>
#include <vector>

#include "imkit/belief.hpp"
#include "imkit/random_stream.hpp"

namespace imkit {

// ---- standardized normal mean psi = mu / sigma ----

struct NormalSample {
  int n = 0;
  double xbar = 0.0;
  double s = 0.0;

  static NormalSample from_data(const std::vector<double>& data);
  void validate() const;
  /// sqrt(n) * xbar / s.
  double z() const;
};

/// F_psi(z): noncentral t cdf with n-1 degrees of freedom and
/// noncentrality sqrt(n) * psi. Decreasing in psi.
double psi_cdf(const NormalSample& sample, double psi);
/// pl_x(psi) = 1 - |2 F_psi(z) - 1|.
double psi_plausibility(const NormalSample& sample, double psi);
/// {psi : alpha/2 < F_psi(z) < 1 - alpha/2}; the root bracket is widened
/// until it changes sign.
std::pair<double, double> psi_interval(const NormalSample& sample, double alpha);
/// Monte Carlo evaluation of the same plausibility through the rectangle
/// random set {v1 : |v1 - 0.5| < |V1 - 0.5|} x [0,1]; psi is plausible
/// for a draw when |F_psi(z) - 0.5| < |V1 - 0.5|.
BeliefResult psi_plausibility_mc(const NormalSample& sample, double psi, long n_rep, const RandomStream& stream);

// ---- equality of many exponential rates ----

/// h(v) = -sum_{i<n} [a_i log t_i + b_i log(1 - t_i)] with t_i the partial
/// sums of v, a_i = 1/(n-i-0.3) and b_i = 1/(i-0.3). Throws DomainError
/// unless every t_i lies in (0,1).
double rates_h(const std::vector<double>& v);

/// Sorted draws of h(V) for V ~ Dirichlet(1,...,1) of dimension n, shared
/// across datasets of the same size.
class RatesReference {
 public:
  RatesReference(int n, long n_draws, const RandomStream& stream);

  int dimension() const { return n_; }
  long size() const { return static_cast<long>(h_.size()); }
  /// Fraction of reference draws with h(V) > h_obs.
  double exceedance(double h_obs) const;

 private:
  int n_;
  std::vector<double> h_;
};

/// v(x, 1) = x / sum(x).
std::vector<double> rates_simplex_point(const std::vector<double>& x);

/// pl_x(theta_1 = ... = theta_n) = P{h(V) > h(v(x,1))}. The belief of the
/// equality assertion is 0. Requires n_rep >= 1000.
BeliefResult rates_plausibility(const std::vector<double>& x, long n_rep, const RandomStream& stream);
BeliefResult rates_plausibility(const std::vector<double>& x, const RatesReference& reference);

/// (geometric mean / arithmetic mean)^n, in (0,1].
double lr_statistic(const std::vector<double>& x);

struct PowerConfig {
  int n1 = 50;
  int n2 = 50;
  std::vector<double> theta_ratios{1.0, 1.5, 2.0, 3.0};
  double alpha = 0.05;
  long n_datasets = 2000;
  long n_mc = 10000;    // reference draws of h(V)
  long n_null = 10000;  // null datasets calibrating the LR test
};

struct PowerRow {
  double theta_ratio;
  std::string method;  // "IM" or "LR"
  double power;
  double mc_se;
  long n_datasets;
  double alpha;
  int n1;
  int n2;
};

/// Datasets have n1 observations with rate 1 followed by n2 with rate
/// theta. The IM test rejects when rates_plausibility <= alpha; the LR test
/// rejects when the fraction of null LR statistics at or below the observed
/// one is <= alpha.
std::vector<PowerRow> power_study(const PowerConfig& config, const RandomStream& stream);

}  // namespace imkit
