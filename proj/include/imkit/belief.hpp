#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "imkit/assertion.hpp"
#include "imkit/association.hpp"
#include "imkit/prs.hpp"
#include "imkit/random_stream.hpp"

namespace imkit {

struct BeliefResult {
  double belief = 0.0;
  double plausibility = 1.0;
  double mc_se_belief = 0.0;
  double mc_se_plausibility = 0.0;
  long replicates = 0;  // 0 for closed form
};

enum class BeliefMethod { Auto, ClosedForm, MonteCarlo };

/// {u : Theta_x(u) subset of A} as disjoint open u-intervals, one per open
/// piece of A. Pieces that touch are kept apart.
std::vector<UInterval> a_event_set(const Association& assoc, double x, const Assertion& a);

/// bel_x(A) = P_S{S subset of the a-event of A}. Not available for predicate
/// assertions.
BeliefResult belief_closed_form(const Association& assoc, const PredictiveRandomSet& prs, double x,
                                const Assertion& a);

/// Monte Carlo estimate from n_rep realized sets. Replicate i uses
/// stream.child(i); belief and plausibility come from the same draws, so
/// pl(A) = 1 - bel(A^c) holds exactly. Throws NumericError on an empty
/// focal set.
BeliefResult belief_monte_carlo(const Association& assoc, const PredictiveRandomSet& prs, double x,
                                const Assertion& a, long n_rep, const RandomStream& stream);

/// Auto picks the closed form whenever the assertion is not a predicate.
BeliefResult belief(const Association& assoc, const PredictiveRandomSet& prs, double x, const Assertion& a,
                    long n_rep, const RandomStream& stream, BeliefMethod method = BeliefMethod::Auto);

/// pl_x({theta}), closed form.
double plausibility_point(const Association& assoc, const PredictiveRandomSet& prs, double x, double theta);

struct PlausibilityRegion {
  double alpha = 0.0;
  std::vector<std::pair<double, double>> intervals;
  bool truncated_low = false;   // pl > alpha at the lower end of the search range
  bool truncated_high = false;  // pl > alpha at the upper end of the search range
  bool empty = false;           // no grid point had pl > alpha
  double search_lo = 0.0;
  double search_hi = 0.0;

  bool contains(double theta) const;
  /// Total length of the intervals.
  double length() const;
};

struct RegionSearch {
  double lo = 0.0;
  double hi = 1.0;
  int grid = 512;
  bool log_scale = false;
  double tol = 1e-9;
};

/// {theta : pl(theta) > alpha} for an arbitrary plausibility curve: grid
/// bracketing followed by Brent refinement of every crossing.
PlausibilityRegion find_region(const std::function<double(double)>& pl, double alpha, const RegionSearch& search);

/// Search range follows assoc.theta_bracket(x), log-spaced for positive
/// parameters.
RegionSearch default_region_search(const Association& assoc, double x, int grid = 512);

PlausibilityRegion plausibility_region(const Association& assoc, const PredictiveRandomSet& prs, double x,
                                       double alpha, int grid = 512);

struct TestDecision {
  bool reject = false;
  double plausibility = 1.0;
};

/// Reject iff pl_x(A) <= alpha.
TestDecision im_test(const Association& assoc, const PredictiveRandomSet& prs, double x, const Assertion& a,
                     double alpha);

struct EfficiencyResult {
  double ratio = 1.0;
  double mc_se = 0.0;
};

/// bel_x(A; S) / bel_x(A; {U}). Throws DomainError when the fiducial belief
/// is zero.
double relative_efficiency(const Association& assoc, const PredictiveRandomSet& prs, double x, const Assertion& a);
/// Same ratio with the numerator estimated by Monte Carlo; the standard
/// error is that of the numerator divided by the exact denominator.
EfficiencyResult relative_efficiency_mc(const Association& assoc, const PredictiveRandomSet& prs, double x,
                                        const Assertion& a, long n_rep, const RandomStream& stream);

/// Dempster's r_x(theta) = e^{-theta} theta^x / x! for the Poisson model.
double dempster_r(long x, double theta);

}  // namespace imkit
