#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "imkit/assertion.hpp"
#include "imkit/association.hpp"
#include "imkit/prs.hpp"
#include "imkit/random_stream.hpp"

namespace imkit {

enum class CalibrationTarget { PrsValidity, ImValidity, Coverage };
std::string_view target_name(CalibrationTarget target);

/// For PRS and IM validity, `empirical` holds exceedance probabilities and
/// a level passes when empirical <= alpha + 3 mc_se. For coverage it holds
/// the hit frequency and passes when empirical >= 1 - alpha - 3 mc_se.
struct CalibrationReport {
  CalibrationTarget target = CalibrationTarget::PrsValidity;
  std::vector<double> alpha_grid;
  std::vector<double> empirical;
  std::vector<double> mc_se;
  std::vector<bool> pass;
  /// IM validity: theta values scanned, and per alpha the one attaining the
  /// maximum exceedance. Coverage: the single true theta.
  std::vector<double> theta_grid;
  std::vector<double> worst_theta;
  long n_rep = 0;
  std::optional<double> ks_distance;  // PRS validity only
  double ks_critical = 0.0;           // 1% level, 1.63 / sqrt(n_rep)

  bool all_pass() const;
  bool ks_pass() const { return ks_distance && *ks_distance < ks_critical; }
};

/// sup_x |F_n(x) - F(x)| for a continuous reference distribution.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);
/// Asymptotic 1% critical value of the one-sample KS statistic.
double ks_critical_1pct(long n);

/// Estimates P{Q_S(U) >= 1 - alpha} from n_rep uniform draws and reports the
/// KS distance of Q_S(U) from Unif(0,1).
CalibrationReport check_prs_validity(const PredictiveRandomSet& prs, long n_rep, const std::vector<double>& alpha_grid,
                                     const RandomStream& stream);

enum class ValidityForm {
  Plausibility,  // theta in A; exceedance P{pl_X(A) <= alpha}
  Belief,        // theta outside A; exceedance P{bel_X(A) >= 1 - alpha}
};

/// Simulates X ~ P_theta for each theta on the grid, evaluates the IM in
/// closed form and reports, per alpha, the largest exceedance over the grid.
/// Grid point g uses stream.child(g).
CalibrationReport check_im_validity(const Association& assoc, const PredictiveRandomSet& prs, const Assertion& a,
                                    const std::vector<double>& theta_grid, const std::vector<double>& alpha_grid,
                                    long n_rep, const RandomStream& stream,
                                    ValidityForm form = ValidityForm::Plausibility);

/// Frequency with which plausibility_region(X, alpha) covers theta_true.
CalibrationReport check_coverage(const Association& assoc, const PredictiveRandomSet& prs, double theta_true,
                                 double alpha, long n_rep, const RandomStream& stream);

}  // namespace imkit
