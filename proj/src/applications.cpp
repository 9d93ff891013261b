#include "imkit/applications.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "imkit/numeric.hpp"

namespace imkit {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
}

void check_rates_sample(const std::vector<double>& x) {
  if (x.size() < 2) throw DomainError("rates sample needs at least two observations");
  for (double xi : x) {
    if (!(xi > 0.0) || !std::isfinite(xi)) throw DomainError("rates sample components must be positive");
  }
}

double se_of(double p, long n) { return std::sqrt(std::max(p * (1.0 - p), 0.0) / n); }

// Dirichlet(1,...,1) as normalized Exp(1) draws.
std::vector<double> draw_simplex(int n, RandomStream& rs) {
  std::vector<double> v(n);
  for (auto& vi : v) vi = rs.exponential();
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  for (auto& vi : v) vi /= total;
  return v;
}

}  // namespace

NormalSample NormalSample::from_data(const std::vector<double>& data) {
  if (data.size() < 2) throw DomainError("normal sample needs at least two observations");
  const double n = static_cast<double>(data.size());
  const double mean = std::accumulate(data.begin(), data.end(), 0.0) / n;
  double ss = 0.0;
  for (double d : data) ss += (d - mean) * (d - mean);
  NormalSample out{static_cast<int>(data.size()), mean, std::sqrt(ss / (n - 1.0))};
  out.validate();
  return out;
}

void NormalSample::validate() const {
  if (n < 2) throw DomainError("normal sample: n must be at least 2");
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("normal sample: s must be positive");
  if (!std::isfinite(xbar)) throw DomainError("normal sample: xbar must be finite");
}

double NormalSample::z() const { return std::sqrt(static_cast<double>(n)) * xbar / s; }

double psi_cdf(const NormalSample& sample, double psi) {
  sample.validate();
  if (!std::isfinite(psi)) throw DomainError("psi must be finite");
  return noncentral_t_cdf(sample.z(), sample.n - 1, std::sqrt(static_cast<double>(sample.n)) * psi);
}

double psi_plausibility(const NormalSample& sample, double psi) {
  return 1.0 - std::abs(2.0 * psi_cdf(sample, psi) - 1.0);
}

std::pair<double, double> psi_interval(const NormalSample& sample, double alpha) {
  check_alpha(alpha);
  sample.validate();
  const double center = sample.z() / std::sqrt(static_cast<double>(sample.n));
  const auto solve = [&](double target) {
    const auto g = [&](double psi) { return psi_cdf(sample, psi) - target; };
    // g decreases in psi.
    double step = 1.0 + std::abs(center);
    double lo = center - step;
    double hi = center + step;
    for (int i = 0; g(lo) < 0.0; ++i) {
      if (i > 60) throw BracketError("psi_interval: cannot bracket the lower end");
      lo -= step;
      step *= 2.0;
    }
    step = 1.0 + std::abs(center);
    for (int i = 0; g(hi) > 0.0; ++i) {
      if (i > 60) throw BracketError("psi_interval: cannot bracket the upper end");
      hi += step;
      step *= 2.0;
    }
    return find_root(g, lo, hi, 1e-10);
  };
  return {solve(1.0 - alpha / 2.0), solve(alpha / 2.0)};
}

BeliefResult psi_plausibility_mc(const NormalSample& sample, double psi, long n_rep, const RandomStream& stream) {
  if (n_rep < 1) throw DomainError("psi_plausibility_mc: n_rep must be positive");
  const double dist = std::abs(psi_cdf(sample, psi) - 0.5);
  long hits = 0;
  for (long i = 0; i < n_rep; ++i) {
    RandomStream rs = stream.child(static_cast<std::uint64_t>(i));
    const double v1 = rs.uniform();
    hits += dist < std::abs(v1 - 0.5);
  }
  BeliefResult r;
  r.replicates = n_rep;
  r.belief = 0.0;
  r.plausibility = static_cast<double>(hits) / n_rep;
  r.mc_se_plausibility = se_of(r.plausibility, n_rep);
  return r;
}

double rates_h(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  if (n < 2) throw DomainError("rates_h: need at least two components");
  for (double vi : v) {
    if (!(vi >= 0.0) || !std::isfinite(vi)) throw DomainError("rates_h: components must be non-negative");
  }
  // 1 - t_i as a suffix sum avoids cancellation near t_i = 1.
  std::vector<double> tail(n + 1, 0.0);
  for (int j = n - 1; j >= 0; --j) tail[j] = tail[j + 1] + v[j];
  double head = 0.0;
  double h = 0.0;
  for (int i = 1; i < n; ++i) {
    head += v[i - 1];
    const double upper = tail[i];
    if (!(head > 0.0 && upper > 0.0)) throw DomainError("rates_h: v lies on the simplex boundary");
    const double a = 1.0 / (n - i - 0.3);
    const double b = 1.0 / (i - 0.3);
    h -= a * std::log(head) + b * std::log(upper);
  }
  return h;
}

RatesReference::RatesReference(int n, long n_draws, const RandomStream& stream) : n_(n) {
  if (n < 2) throw DomainError("RatesReference: dimension must be at least 2");
  if (n_draws < 1) throw DomainError("RatesReference: n_draws must be positive");
  h_.reserve(static_cast<std::size_t>(n_draws));
  for (long i = 0; i < n_draws; ++i) {
    RandomStream rs = stream.child(static_cast<std::uint64_t>(i));
    h_.push_back(rates_h(draw_simplex(n, rs)));
  }
  std::sort(h_.begin(), h_.end());
}

double RatesReference::exceedance(double h_obs) const {
  const auto above = h_.end() - std::upper_bound(h_.begin(), h_.end(), h_obs);
  return static_cast<double>(above) / static_cast<double>(h_.size());
}

std::vector<double> rates_simplex_point(const std::vector<double>& x) {
  check_rates_sample(x);
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  std::vector<double> v(x.size());
  std::transform(x.begin(), x.end(), v.begin(), [&](double xi) { return xi / total; });
  return v;
}

BeliefResult rates_plausibility(const std::vector<double>& x, const RatesReference& reference) {
  check_rates_sample(x);
  if (static_cast<int>(x.size()) != reference.dimension()) {
    throw DomainError("rates_plausibility: reference dimension does not match the sample");
  }
  BeliefResult r;
  r.replicates = reference.size();
  r.belief = 0.0;
  r.plausibility = reference.exceedance(rates_h(rates_simplex_point(x)));
  r.mc_se_plausibility = se_of(r.plausibility, reference.size());
  return r;
}

BeliefResult rates_plausibility(const std::vector<double>& x, long n_rep, const RandomStream& stream) {
  if (n_rep < 1000) throw DomainError("rates_plausibility: n_rep must be at least 1000");
  check_rates_sample(x);
  return rates_plausibility(x, RatesReference(static_cast<int>(x.size()), n_rep, stream));
}

double lr_statistic(const std::vector<double>& x) {
  check_rates_sample(x);
  const double n = static_cast<double>(x.size());
  double mean_log = 0.0;
  double mean = 0.0;
  for (double xi : x) {
    mean_log += std::log(xi);
    mean += xi;
  }
  mean_log /= n;
  mean /= n;
  return std::min(1.0, std::exp(n * (mean_log - std::log(mean))));
}

std::vector<PowerRow> power_study(const PowerConfig& config, const RandomStream& stream) {
  check_alpha(config.alpha);
  if (config.n1 < 1 || config.n2 < 1) throw DomainError("power_study: n1 and n2 must be positive");
  if (config.n_datasets < 1 || config.n_mc < 1 || config.n_null < 1) {
    throw DomainError("power_study: simulation sizes must be positive");
  }
  for (double th : config.theta_ratios) {
    if (!(th > 0.0) || !std::isfinite(th)) throw DomainError("power_study: theta ratios must be positive");
  }
  const int n = config.n1 + config.n2;

  const RatesReference reference(n, config.n_mc, stream.child(0));

  std::vector<double> null_lr;
  null_lr.reserve(static_cast<std::size_t>(config.n_null));
  const RandomStream null_stream = stream.child(1);
  std::vector<double> x(n);
  for (long i = 0; i < config.n_null; ++i) {
    RandomStream rs = null_stream.child(static_cast<std::uint64_t>(i));
    for (auto& xi : x) xi = rs.exponential();
    null_lr.push_back(lr_statistic(x));
  }
  std::sort(null_lr.begin(), null_lr.end());

  std::vector<PowerRow> rows;
  for (std::size_t g = 0; g < config.theta_ratios.size(); ++g) {
    const double theta = config.theta_ratios[g];
    const RandomStream data_stream = stream.child(2 + g);
    long im_rejects = 0;
    long lr_rejects = 0;
    for (long d = 0; d < config.n_datasets; ++d) {
      RandomStream rs = data_stream.child(static_cast<std::uint64_t>(d));
      for (int i = 0; i < n; ++i) x[i] = rs.exponential() / (i < config.n1 ? 1.0 : theta);
      im_rejects += rates_plausibility(x, reference).plausibility <= config.alpha;
      const double lr = lr_statistic(x);
      const auto at_or_below = std::upper_bound(null_lr.begin(), null_lr.end(), lr) - null_lr.begin();
      lr_rejects += static_cast<double>(at_or_below) / null_lr.size() <= config.alpha;
    }
    for (const auto& [method, rejects] : {std::pair<const char*, long>{"IM", im_rejects}, {"LR", lr_rejects}}) {
      const double p = static_cast<double>(rejects) / config.n_datasets;
      rows.push_back({theta, method, p, se_of(p, config.n_datasets), config.n_datasets, config.alpha, config.n1,
                      config.n2});
    }
  }
  return rows;
}

}  // namespace imkit
