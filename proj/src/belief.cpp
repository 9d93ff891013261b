#include "imkit/belief.hpp"

#include <algorithm>
#include <cmath>

#include "imkit/numeric.hpp"

namespace imkit {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
}

double binomial_se(double p, long n) { return n > 0 ? std::sqrt(std::max(p * (1.0 - p), 0.0) / n) : 0.0; }

}  // namespace

std::vector<UInterval> a_event_set(const Association& assoc, double x, const Assertion& a) {
  assoc.check_observation(x);
  std::vector<UInterval> out;
  for (const auto& [lo, hi] : a.open_pieces()) {
    const UInterval k = assoc.a_event(x, lo, hi);
    if (!k.empty()) out.push_back(k);
  }
  return out;
}

BeliefResult belief_closed_form(const Association& assoc, const PredictiveRandomSet& prs, double x,
                                const Assertion& a) {
  if (a.kind() == Assertion::Kind::Predicate) {
    throw DomainError("belief_closed_form: predicate assertions need the Monte Carlo path");
  }
  BeliefResult r;
  r.belief = prs.containment_prob(a_event_set(assoc, x, a));
  r.plausibility = 1.0 - prs.containment_prob(a_event_set(assoc, x, a.complement()));
  return r;
}

BeliefResult belief_monte_carlo(const Association& assoc, const PredictiveRandomSet& prs, double x,
                                const Assertion& a, long n_rep, const RandomStream& stream) {
  assoc.check_observation(x);
  if (n_rep < 1) throw DomainError("belief_monte_carlo: n_rep must be positive");
  const Assertion ac = a.complement();
  long in_a = 0;
  long in_ac = 0;
  for (long i = 0; i < n_rep; ++i) {
    RandomStream rs = stream.child(static_cast<std::uint64_t>(i));
    const RealizedSet s = prs.draw(rs);
    bool all_a = true;
    bool all_ac = true;
    for (const auto& c : realized_components(s)) {
      const FocalInterval f = assoc.focal_hull(x, c.lo, c.hi);
      if (f.lower > f.upper) throw NumericError("empty focal set encountered");
      all_a = all_a && a.contains_set(f);
      all_ac = all_ac && ac.contains_set(f);
    }
    in_a += all_a;
    in_ac += all_ac;
  }
  BeliefResult r;
  r.replicates = n_rep;
  r.belief = static_cast<double>(in_a) / n_rep;
  const double bel_c = static_cast<double>(in_ac) / n_rep;
  r.plausibility = 1.0 - bel_c;
  r.mc_se_belief = binomial_se(r.belief, n_rep);
  r.mc_se_plausibility = binomial_se(bel_c, n_rep);
  return r;
}

BeliefResult belief(const Association& assoc, const PredictiveRandomSet& prs, double x, const Assertion& a,
                    long n_rep, const RandomStream& stream, BeliefMethod method) {
  if (method == BeliefMethod::Auto) {
    method = a.kind() == Assertion::Kind::Predicate ? BeliefMethod::MonteCarlo : BeliefMethod::ClosedForm;
  }
  if (method == BeliefMethod::ClosedForm) return belief_closed_form(assoc, prs, x, a);
  return belief_monte_carlo(assoc, prs, x, a, n_rep, stream);
}

double plausibility_point(const Association& assoc, const PredictiveRandomSet& prs, double x, double theta) {
  return belief_closed_form(assoc, prs, x, Assertion::point(theta)).plausibility;
}

bool PlausibilityRegion::contains(double theta) const {
  return std::any_of(intervals.begin(), intervals.end(),
                     [&](const auto& iv) { return iv.first < theta && theta < iv.second; });
}

double PlausibilityRegion::length() const {
  double total = 0.0;
  for (const auto& [lo, hi] : intervals) total += hi - lo;
  return total;
}

PlausibilityRegion find_region(const std::function<double(double)>& pl, double alpha, const RegionSearch& search) {
  check_alpha(alpha);
  if (search.grid < 2) throw DomainError("find_region: grid must have at least 2 points");
  if (!(search.lo < search.hi)) throw DomainError("find_region: empty search range");
  if (search.log_scale && !(search.lo > 0.0)) throw DomainError("find_region: log grid needs a positive range");

  const int n = search.grid;
  std::vector<double> theta(n);
  std::vector<bool> inside(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    theta[i] = search.log_scale ? search.lo * std::pow(search.hi / search.lo, t) : search.lo + t * (search.hi - search.lo);
    inside[i] = pl(theta[i]) > alpha;
  }
  theta.front() = search.lo;
  theta.back() = search.hi;

  const auto g = [&](double th) { return pl(th) - alpha; };
  const auto crossing = [&](int i) {
    const double tol = search.tol * std::max(1.0, std::abs(theta[i]));
    // Brent needs a sign change; pl may equal alpha exactly at the outside
    // point, which still brackets.
    return find_root(g, theta[i], theta[i + 1], tol);
  };

  PlausibilityRegion region;
  region.alpha = alpha;
  region.search_lo = search.lo;
  region.search_hi = search.hi;
  region.truncated_low = inside.front();
  region.truncated_high = inside.back();

  double start = search.lo;
  for (int i = 0; i + 1 < n; ++i) {
    if (!inside[i] && inside[i + 1]) start = crossing(i);
    if (inside[i] && !inside[i + 1]) region.intervals.emplace_back(start, crossing(i));
  }
  if (inside.back()) region.intervals.emplace_back(start, search.hi);
  region.empty = region.intervals.empty();
  return region;
}

RegionSearch default_region_search(const Association& assoc, double x, int grid) {
  const auto [lo, hi] = assoc.theta_bracket(x);
  RegionSearch s;
  s.lo = lo;
  s.hi = hi;
  s.grid = grid;
  s.log_scale = assoc.positive_parameter();
  return s;
}

PlausibilityRegion plausibility_region(const Association& assoc, const PredictiveRandomSet& prs, double x,
                                       double alpha, int grid) {
  return find_region([&](double th) { return plausibility_point(assoc, prs, x, th); }, alpha,
                     default_region_search(assoc, x, grid));
}

TestDecision im_test(const Association& assoc, const PredictiveRandomSet& prs, double x, const Assertion& a,
                     double alpha) {
  check_alpha(alpha);
  TestDecision d;
  d.plausibility = belief_closed_form(assoc, prs, x, a).plausibility;
  d.reject = d.plausibility <= alpha;
  return d;
}

namespace {

double fiducial_belief(const Association& assoc, double x, const Assertion& a) {
  const double b0 = belief_closed_form(assoc, singleton_prs(), x, a).belief;
  if (!(b0 > 0.0)) throw DomainError("relative_efficiency: fiducial belief is zero");
  return b0;
}

}  // namespace

double relative_efficiency(const Association& assoc, const PredictiveRandomSet& prs, double x, const Assertion& a) {
  const double b0 = fiducial_belief(assoc, x, a);
  return belief_closed_form(assoc, prs, x, a).belief / b0;
}

EfficiencyResult relative_efficiency_mc(const Association& assoc, const PredictiveRandomSet& prs, double x,
                                        const Assertion& a, long n_rep, const RandomStream& stream) {
  const double b0 = fiducial_belief(assoc, x, a);
  const BeliefResult r = belief_monte_carlo(assoc, prs, x, a, n_rep, stream);
  return {r.belief / b0, r.mc_se_belief / b0};
}

double dempster_r(long x, double theta) {
  if (x < 0) throw DomainError("dempster_r: x must be a non-negative integer");
  return poisson_pmf(x, theta);
}

}  // namespace imkit
