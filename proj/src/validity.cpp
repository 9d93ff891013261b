#include "imkit/validity.hpp"

#include <algorithm>
#include <cmath>

#include "imkit/belief.hpp"
#include "imkit/numeric.hpp"

namespace imkit {

namespace {

double se_of(double p, long n) { return std::sqrt(std::max(p * (1.0 - p), 0.0) / n); }

void check_levels(const std::vector<double>& alpha_grid) {
  if (alpha_grid.empty()) throw DomainError("alpha grid is empty");
  for (double a : alpha_grid) {
    if (!(a > 0.0 && a < 1.0)) throw DomainError("alpha grid values must lie in (0,1)");
  }
}

void check_reps(long n_rep) {
  if (n_rep < 1) throw DomainError("n_rep must be positive");
}

}  // namespace

std::string_view target_name(CalibrationTarget target) {
  switch (target) {
    case CalibrationTarget::PrsValidity: return "prs_validity";
    case CalibrationTarget::ImValidity: return "im_validity";
    case CalibrationTarget::Coverage: return "coverage";
  }
  return "unknown";
}

bool CalibrationReport::all_pass() const {
  return std::all_of(pass.begin(), pass.end(), [](bool p) { return p; });
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("ks_distance: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_critical_1pct(long n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

CalibrationReport check_prs_validity(const PredictiveRandomSet& prs, long n_rep, const std::vector<double>& alpha_grid,
                                     const RandomStream& stream) {
  check_levels(alpha_grid);
  check_reps(n_rep);
  std::vector<double> q;
  q.reserve(static_cast<std::size_t>(n_rep));
  for (long i = 0; i < n_rep; ++i) {
    RandomStream rs = stream.child(static_cast<std::uint64_t>(i));
    q.push_back(prs.miss_prob(rs.uniform()));
  }

  CalibrationReport rep;
  rep.target = CalibrationTarget::PrsValidity;
  rep.alpha_grid = alpha_grid;
  rep.n_rep = n_rep;
  for (double alpha : alpha_grid) {
    const long hits = std::count_if(q.begin(), q.end(), [&](double v) { return v >= 1.0 - alpha; });
    const double p = static_cast<double>(hits) / n_rep;
    rep.empirical.push_back(p);
    rep.mc_se.push_back(se_of(p, n_rep));
    rep.pass.push_back(p <= alpha + 3.0 * rep.mc_se.back());
  }
  rep.ks_distance = ks_distance(std::move(q), [](double v) { return std::clamp(v, 0.0, 1.0); });
  rep.ks_critical = ks_critical_1pct(n_rep);
  return rep;
}

CalibrationReport check_im_validity(const Association& assoc, const PredictiveRandomSet& prs, const Assertion& a,
                                    const std::vector<double>& theta_grid, const std::vector<double>& alpha_grid,
                                    long n_rep, const RandomStream& stream, ValidityForm form) {
  check_levels(alpha_grid);
  check_reps(n_rep);
  if (theta_grid.empty()) throw DomainError("check_im_validity: theta grid is empty");
  for (double th : theta_grid) {
    const bool inside = a.contains(th);
    if (form == ValidityForm::Plausibility && !inside) {
      throw DomainError("check_im_validity: plausibility form needs theta inside the assertion");
    }
    if (form == ValidityForm::Belief && inside) {
      throw DomainError("check_im_validity: belief form needs theta outside the assertion");
    }
  }

  CalibrationReport rep;
  rep.target = CalibrationTarget::ImValidity;
  rep.alpha_grid = alpha_grid;
  rep.theta_grid = theta_grid;
  rep.n_rep = n_rep;
  rep.empirical.assign(alpha_grid.size(), -1.0);
  rep.mc_se.assign(alpha_grid.size(), 0.0);
  rep.worst_theta.assign(alpha_grid.size(), theta_grid.front());

  for (std::size_t g = 0; g < theta_grid.size(); ++g) {
    const double theta = theta_grid[g];
    const RandomStream gs = stream.child(g);
    std::vector<long> hits(alpha_grid.size(), 0);
    for (long i = 0; i < n_rep; ++i) {
      RandomStream rs = gs.child(static_cast<std::uint64_t>(i));
      const double x = assoc.simulate(theta, rs);
      const BeliefResult r = belief_closed_form(assoc, prs, x, a);
      for (std::size_t k = 0; k < alpha_grid.size(); ++k) {
        const double alpha = alpha_grid[k];
        hits[k] += form == ValidityForm::Plausibility ? r.plausibility <= alpha : r.belief >= 1.0 - alpha;
      }
    }
    for (std::size_t k = 0; k < alpha_grid.size(); ++k) {
      const double p = static_cast<double>(hits[k]) / n_rep;
      if (p > rep.empirical[k]) {
        rep.empirical[k] = p;
        rep.mc_se[k] = se_of(p, n_rep);
        rep.worst_theta[k] = theta;
      }
    }
  }
  for (std::size_t k = 0; k < alpha_grid.size(); ++k) {
    rep.pass.push_back(rep.empirical[k] <= alpha_grid[k] + 3.0 * rep.mc_se[k]);
  }
  return rep;
}

CalibrationReport check_coverage(const Association& assoc, const PredictiveRandomSet& prs, double theta_true,
                                 double alpha, long n_rep, const RandomStream& stream) {
  check_levels({alpha});
  check_reps(n_rep);
  long hits = 0;
  for (long i = 0; i < n_rep; ++i) {
    RandomStream rs = stream.child(static_cast<std::uint64_t>(i));
    const double x = assoc.simulate(theta_true, rs);
    hits += plausibility_region(assoc, prs, x, alpha).contains(theta_true);
  }
  CalibrationReport rep;
  rep.target = CalibrationTarget::Coverage;
  rep.alpha_grid = {alpha};
  rep.theta_grid = {theta_true};
  rep.worst_theta = {theta_true};
  rep.n_rep = n_rep;
  const double p = static_cast<double>(hits) / n_rep;
  rep.empirical = {p};
  rep.mc_se = {se_of(p, n_rep)};
  rep.pass = {p >= 1.0 - alpha - 3.0 * rep.mc_se.front()};
  return rep;
}

}  // namespace imkit
