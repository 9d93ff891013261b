#include "imkit/score_balance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/interpolators/cubic_hermite.hpp>

namespace imkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr QuadratureSpec kBalanceQuadrature{1e-14, 1e-12, 1000};
constexpr int kNodesPerSide = 64;
constexpr double kTailProb = 5e-5;  // each side of the central 99.99%
constexpr double kSpanDecades = 4.0;

class GaussianScore final : public ScoreModel {
 public:
  std::string_view name() const override { return "gaussian"; }
  double density(double x, double theta) const override { return norm_pdf(x - theta); }
  double cdf(double x, double theta) const override { return norm_cdf(x - theta); }
  double quantile(double p, double theta) const override { return theta + norm_quantile(p); }
  double score(double x, double theta) const override { return x - theta; }
  double curvature(double x, double theta) const override {
    const double t = x - theta;
    return t * t - 1.0;
  }
  std::pair<double, double> support(double) const override { return {-kInf, kInf}; }
  std::pair<double, double> score_range(double) const override { return {-kInf, kInf}; }
  double score_inverse(double s, double theta) const override { return theta + s; }
  double score_inverse_slope(double, double) const override { return 1.0; }
  void check_theta(double theta) const override {
    if (!std::isfinite(theta)) throw DomainError("gaussian score model: theta must be finite");
  }
};

class ExponentialScore final : public ScoreModel {
 public:
  std::string_view name() const override { return "exponential"; }
  double density(double x, double theta) const override {
    return x < 0.0 ? 0.0 : std::exp(-x / theta) / theta;
  }
  double cdf(double x, double theta) const override { return x <= 0.0 ? 0.0 : -std::expm1(-x / theta); }
  double quantile(double p, double theta) const override { return -theta * std::log1p(-p); }
  double score(double x, double theta) const override { return (x - theta) / (theta * theta); }
  double curvature(double x, double theta) const override {
    const double t = score(x, theta);
    return t * t + (theta - 2.0 * x) / (theta * theta * theta);
  }
  std::pair<double, double> support(double) const override { return {0.0, kInf}; }
  std::pair<double, double> score_range(double theta) const override { return {-1.0 / theta, kInf}; }
  double score_inverse(double s, double theta) const override {
    if (s <= -1.0 / theta) return 0.0;
    return theta + theta * theta * s;
  }
  double score_inverse_slope(double, double theta) const override { return theta * theta; }
  void check_theta(double theta) const override {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("exponential score model: theta must be positive");
  }
};

void check_t(const ScoreModel& model, double theta0, double t) {
  const auto [lo, hi] = model.score_range(theta0);
  if (!(t >= lo && t <= hi)) throw DomainError("score value outside the score range");
}

}  // namespace

void ScoreModel::check_theta(double theta) const {
  if (!std::isfinite(theta)) throw DomainError("score model: theta must be finite");
}

double ScoreModel::partial_score_expectation(double a, double b, double theta) const {
  const auto [s_lo, s_hi] = score_range(theta);
  a = std::max(a, s_lo);
  b = std::min(b, s_hi);
  if (!(a < b)) return 0.0;
  const double xa = std::isinf(a) ? a : score_inverse(a, theta);
  const double xb = std::isinf(b) ? b : score_inverse(b, theta);
  return integrate([&](double x) { return score(x, theta) * density(x, theta); }, xa, xb, kBalanceQuadrature);
}

double ScoreModel::score_density(double s, double theta) const {
  const auto [lo, hi] = score_range(theta);
  if (!(s > lo && s < hi)) return 0.0;
  return density(score_inverse(s, theta), theta) * std::abs(score_inverse_slope(s, theta));
}

double ScoreModel::score_prob(double a, double b, double theta) const {
  if (!(a < b)) return 0.0;
  const double fa = std::isinf(a) ? (a < 0 ? 0.0 : 1.0) : cdf(score_inverse(a, theta), theta);
  const double fb = std::isinf(b) ? (b < 0 ? 0.0 : 1.0) : cdf(score_inverse(b, theta), theta);
  return std::clamp(fb - fa, 0.0, 1.0);
}

std::unique_ptr<ScoreModel> gaussian_score_model() { return std::make_unique<GaussianScore>(); }
std::unique_ptr<ScoreModel> exponential_score_model() { return std::make_unique<ExponentialScore>(); }

std::unique_ptr<ScoreModel> score_model_by_name(std::string_view name) {
  if (name == "gaussian") return gaussian_score_model();
  if (name == "exponential") return exponential_score_model();
  throw DomainError("no score-balanced construction for model '" + std::string(name) + "'");
}

double solve_xi_minus(const ScoreModel& model, double theta0, double t, double tol) {
  model.check_theta(theta0);
  if (t <= 0.0) return t;
  check_t(model, theta0, t);
  const double s_lo = model.score_range(theta0).first;
  const auto g = [&](double xi) { return model.partial_score_expectation(xi, t, theta0); };

  double lo = std::max(-t, s_lo);
  for (int i = 0; g(lo) > 0.0; ++i) {
    if (lo == s_lo || i > 200) throw BracketError("xi_minus: score distribution cannot balance t");
    lo = std::max(2.0 * lo, s_lo);
  }
  if (g(0.0) <= 0.0) return 0.0;
  return find_root(g, lo, 0.0, tol * std::max(1.0, t));
}

double solve_xi_plus(const ScoreModel& model, double theta0, double t, double tol) {
  model.check_theta(theta0);
  if (t >= 0.0) return t;
  check_t(model, theta0, t);
  const double s_hi = model.score_range(theta0).second;
  const auto g = [&](double xi) { return model.partial_score_expectation(t, xi, theta0); };

  double hi = std::min(-t, s_hi);
  for (int i = 0; g(hi) < 0.0; ++i) {
    if (hi == s_hi || i > 200) throw BracketError("xi_plus: score distribution cannot balance t");
    hi = std::min(2.0 * hi, s_hi);
  }
  if (g(0.0) >= 0.0) return 0.0;
  return find_root(g, 0.0, hi, tol * std::max(1.0, -t));
}

std::pair<double, double> balanced_interval(const ScoreModel& model, double theta0, double t) {
  if (t >= 0.0) return {solve_xi_minus(model, theta0, t), t};
  return {t, solve_xi_plus(model, theta0, t)};
}

using Hermite = boost::math::interpolators::cubic_hermite<std::vector<double>>;

namespace {

// log|v| - log|end - v|, or log|v| when `end` is infinite. Increasing in |v|.
double lower_coord(double v, double end, bool negative) {
  const double mag = negative ? -v : v;
  if (!std::isfinite(end)) return std::log(mag);
  return std::log(mag) - std::log(negative ? v - end : end - v);
}

double from_coord(double c, double end, bool negative) {
  if (!std::isfinite(end)) return negative ? -std::exp(c) : std::exp(c);
  // |v| / |end - v| = w  =>  v = w end / (1 + w)
  const double w = std::exp(c);
  return std::isinf(w) ? end : w * end / (1.0 + w);
}

}  // namespace

struct BalancedFamily::Curves {
  Hermite lower_of_upper;
  Hermite upper_of_lower;
  double upper_min, upper_max;
  double lower_min, lower_max;
};

BalancedFamily::BalancedFamily(const ScoreModel& model, double theta0) : model_(&model), theta0_(theta0) {
  model.check_theta(theta0);
  const double q_hi = model.score(model.quantile(1.0 - kTailProb, theta0), theta0);
  const double q_lo = model.score(model.quantile(kTailProb, theta0), theta0);

  std::vector<BalancedPair> pairs;
  for (int k = 0; k < kNodesPerSide; ++k) {
    const double scale = std::pow(10.0, -kSpanDecades + kSpanDecades * k / (kNodesPerSide - 1));
    const double tp = q_hi * scale;
    const double tn = q_lo * scale;
    pos_nodes_.push_back(tp);
    neg_nodes_.push_back(-tn);
    pairs.push_back({solve_xi_minus(model, theta0, tp), tp});
    pairs.push_back({tn, solve_xi_plus(model, theta0, tn)});
  }
  std::sort(pairs.begin(), pairs.end(), [](const BalancedPair& a, const BalancedPair& b) { return a.upper < b.upper; });
  table_.push_back({0.0, 0.0});
  for (const auto& p : pairs) {
    const auto& last = table_.back();
    const bool distinct = p.upper > last.upper * (1.0 + 1e-9) && p.lower < last.lower * (1.0 + 1e-9);
    if (p.lower < 0.0 && p.upper > 0.0 && distinct) table_.push_back(p);
  }
  if (table_.size() < 5) throw NumericError("balanced family: too few distinct tabulated pairs");

  const auto [s_lo, s_hi] = model.score_range(theta0);
  lo_end_ = s_lo;
  hi_end_ = s_hi;
  // Interpolation coordinates: log(-l) and log(r), with the distance to a
  // finite end of the score range divided out so that the curve stays
  // smooth where xi runs into that end.
  const auto d_lam = [&](double l) { return 1.0 / l - (std::isfinite(s_lo) ? 1.0 / (l - s_lo) : 0.0); };
  const auto d_rho = [&](double r) { return 1.0 / r + (std::isfinite(s_hi) ? 1.0 / (s_hi - r) : 0.0); };
  // Along the curve dl/dr = r f_T(r) / (l f_T(l)).
  const auto slope = [&](const BalancedPair& p) {
    const double dl_dr =
        p.upper * model.score_density(p.upper, theta0) / (p.lower * model.score_density(p.lower, theta0));
    return d_lam(p.lower) * dl_dr / d_rho(p.upper);
  };
  std::vector<double> rho, lam_of_rho, d_lam_of_rho, lam, rho_of_lam, d_rho_of_lam;
  for (auto it = table_.begin() + 1; it != table_.end(); ++it) {
    const double m = slope(*it);
    rho.push_back(lower_coord(it->upper, hi_end_, false));
    lam_of_rho.push_back(lower_coord(it->lower, lo_end_, true));
    d_lam_of_rho.push_back(m);
    lam.push_back(lam_of_rho.back());
    rho_of_lam.push_back(rho.back());
    d_rho_of_lam.push_back(1.0 / m);
  }
  Curves c{Hermite(std::move(rho), std::move(lam_of_rho), std::move(d_lam_of_rho)),
           Hermite(std::move(lam), std::move(rho_of_lam), std::move(d_rho_of_lam)),
           table_[1].upper, table_.back().upper, table_.back().lower, table_[1].lower};
  curves_ = std::make_shared<const Curves>(std::move(c));
}

double BalancedFamily::xi_minus(double t) const {
  if (t <= 0.0) return t;
  if (t >= curves_->upper_min && t <= curves_->upper_max) {
    return from_coord(curves_->lower_of_upper(lower_coord(t, hi_end_, false)), lo_end_, true);
  }
  return solve_xi_minus(*model_, theta0_, t);
}

double BalancedFamily::xi_plus(double t) const {
  if (t >= 0.0) return t;
  if (t >= curves_->lower_min && t <= curves_->lower_max) {
    return from_coord(curves_->upper_of_lower(lower_coord(t, lo_end_, true)), hi_end_, false);
  }
  return solve_xi_plus(*model_, theta0_, t);
}

std::pair<double, double> BalancedFamily::interval(double t) const {
  if (t >= 0.0) return {xi_minus(t), t};
  return {t, xi_plus(t)};
}

double BalancedFamily::width(double t) const { return xi_plus(t) - xi_minus(t); }

BalancedFamily build_balanced_family(const ScoreModel& model, double theta0) { return BalancedFamily(model, theta0); }

double two_sided_belief(const ScoreModel& model, const BalancedFamily& family, double x) {
  const auto [sup_lo, sup_hi] = model.support(family.theta0());
  if (!(x >= sup_lo && x <= sup_hi) || std::isnan(x)) throw DomainError("two_sided_belief: x outside the support");
  const double t = model.score(x, family.theta0());
  if (t == 0.0) return 0.0;
  const auto [l, r] = family.interval(t);
  return model.score_prob(l, r, family.theta0());
}

UnimodalReport check_unimodal_condition(const ScoreModel& model, double theta0, int grid) {
  model.check_theta(theta0);
  if (grid < 3) throw DomainError("check_unimodal_condition: grid must have at least 3 points");
  UnimodalReport rep;
  rep.scan_lo = model.score(model.quantile(kTailProb, theta0), theta0);
  rep.scan_hi = model.score(model.quantile(1.0 - kTailProb, theta0), theta0);
  const auto v = [&](double t) { return model.curvature(model.score_inverse(t, theta0), theta0); };
  rep.v_at_zero = v(0.0);

  std::vector<double> ts(grid), vs(grid);
  for (int i = 0; i < grid; ++i) {
    ts[i] = rep.scan_lo + (rep.scan_hi - rep.scan_lo) * i / (grid - 1);
    vs[i] = v(ts[i]);
  }
  const auto [mn, mx] = std::minmax_element(vs.begin(), vs.end());
  if (*mx - *mn <= 1e-12 * std::max(1.0, std::abs(*mx))) {
    rep.argmin_defined = false;
    rep.argmin = std::numeric_limits<double>::quiet_NaN();
    rep.v_min = *mn;
    return rep;
  }

  const int i = static_cast<int>(mn - vs.begin());
  double a = ts[std::max(i - 1, 0)];
  double b = ts[std::min(i + 1, grid - 1)];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = v(c);
  double fd = v(d);
  while (b - a > 1e-12 * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = v(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = v(d);
    }
  }
  rep.argmin = 0.5 * (a + b);
  rep.v_min = v(rep.argmin);
  const double tol = 1e-6 * (rep.scan_hi - rep.scan_lo);
  rep.holds = std::abs(rep.argmin) <= tol && rep.v_at_zero < 0.0;
  return rep;
}

double score_balanced_pl(const ScoreModel& model, double x, double theta) {
  model.check_theta(theta);
  const auto [sup_lo, sup_hi] = model.support(theta);
  if (!(x >= sup_lo && x <= sup_hi)) throw DomainError("score_balanced_pl: x outside the support");
  const double t = model.score(x, theta);
  if (t == 0.0) return 1.0;
  const auto [l, r] = balanced_interval(model, theta, t);
  return std::clamp(1.0 - model.score_prob(l, r, theta), 0.0, 1.0);
}

std::vector<double> score_balanced_pl_curve(const ScoreModel& model, const std::vector<double>& theta_grid,
                                            double x) {
  std::vector<double> out;
  out.reserve(theta_grid.size());
  for (double th : theta_grid) out.push_back(score_balanced_pl(model, x, th));
  return out;
}

}  // namespace imkit
