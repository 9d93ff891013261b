// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "imkit/applications.hpp"
#include "imkit/belief.hpp"
#include "imkit/numeric.hpp"
#include "imkit/score_balance.hpp"
#include "imkit/validity.hpp"

#ifndef IMKIT_CLI_PATH
#error "IMKIT_CLI_PATH must name the imkit executable"
#endif

using namespace imkit;

namespace {

int failures = 0;

void report(const char* id, bool ok, const std::string& what, double seconds) {
  std::printf("%s %-5s %s [%.2fs]\n", ok ? "PASS" : "FAIL", id, what.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class F>
void criterion(const char* id, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string what;
  bool ok = false;
  try {
    ok = body(what);
  } catch (const std::exception& e) {
    what += std::string(" exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, ok, what, s);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double phi(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double exp_partial_expectation(double a, double b) {
  // theta0 = 1, T = X - 1: integral of (x - 1) e^{-x} = -x e^{-x}.
  const auto g = [](double y) { return std::isinf(y) ? 0.0 : y * std::exp(-y); };
  return g(std::max(1.0 + a, 0.0)) - g(1.0 + b);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

int main() {
  const RandomStream root(20130417, 0);

  criterion("AC1", [](std::string& w) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = plausibility_region(poisson_mean_assoc(), default_prs(), 5.0, 0.1);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.intervals.size() != 1) return false;
    const auto [lo, hi] = r.intervals[0];
    w = fmt("poisson x=5 90%% interval (%.6f, %.6f) vs (1.97, 10.51) +-0.01", lo, hi);
    return std::abs(lo - 1.97) <= 0.01 && std::abs(hi - 10.51) <= 0.01 && s < 1.0;
  });

  criterion("AC2", [](std::string& w) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = plausibility_region(gaussian_mean_assoc(), default_prs(), 5.0, 0.1);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.intervals.size() != 1) return false;
    const auto [lo, hi] = r.intervals[0];
    w = fmt("gaussian x=5 90%% interval (%.8f, %.8f) vs 5 -+ 1.6449 within 1e-4", lo, hi);
    return std::abs(lo - (5 - 1.6449)) <= 1e-4 && std::abs(hi - (5 + 1.6449)) <= 1e-4 && s < 1.0;
  });

  criterion("AC3", [](std::string& w) {
    const double r = dempster_r(5, 5.0);
    const double pl = plausibility_point(poisson_mean_assoc(), default_prs(), 5.0, 5.0);
    w = fmt("dempster r_5(5) = %.6f (0.175 +- 5e-4), pl_5(5) = %.17g", r, pl);
    return std::abs(r - 0.175) <= 5e-4 && pl == 1.0;
  });

  criterion("AC4", [&](std::string& w) {
    const std::vector<double> alphas{0.01, 0.05, 0.1, 0.25, 0.5};
    bool ok = true;
    for (const auto& name : {"default", "lower", "upper"}) {
      const auto rep = check_prs_validity(prs_by_name(name), 100000, alphas, root.child(4));
      w += fmt("%s KS=%.5f ", name, *rep.ks_distance);
      ok &= rep.ks_pass() && rep.all_pass();
    }
    const auto single = check_prs_validity(singleton_prs(), 100000, alphas, root.child(4));
    w += fmt("(crit %.5f); singleton KS=%.3f fails=%s", single.ks_critical, *single.ks_distance,
             single.all_pass() ? "no" : "yes");
    return ok && !single.all_pass() && !single.ks_pass();
  });

  criterion("AC5", [&](std::string& w) {
    struct Setup {
      Association assoc;
      std::vector<double> grid;
      double left_edge;  // left-ray assertion (-inf, edge]
      double null_point; // two-sided assertion {null_point}^c
    };
    const std::vector<Setup> setups{
        {gaussian_mean_assoc(), {-2, -1, 0, 1, 2}, 2.0, 0.5},
        {poisson_mean_assoc(), {0.5, 1, 3, 5, 10}, 10.0, 4.0},
        {exponential_mean_assoc(), {0.5, 1, 2, 5, 10}, 10.0, 3.0},
    };
    const std::vector<double> alphas{0.01, 0.05, 0.1, 0.25, 0.5};
    const long reps = 10000;
    int checks = 0;
    int passed = 0;
    double worst_margin = -INFINITY;
    std::string worst;
    std::uint64_t idx = 0;
    for (const auto& s : setups) {
      for (const auto& prs_name : {"default", "lower", "upper"}) {
        const auto prs = prs_by_name(prs_name);
        std::vector<std::pair<std::string, CalibrationReport>> reps_out;
        // Point assertions: theta equals the asserted point, one report per grid value.
        CalibrationReport point;
        for (double th : s.grid) {
          auto r = check_im_validity(s.assoc, prs, Assertion::point(th), {th}, alphas, reps, root.child(500 + idx++));
          if (point.empirical.empty()) {
            point = r;
          } else {
            for (std::size_t k = 0; k < alphas.size(); ++k) {
              if (r.empirical[k] > point.empirical[k]) {
                point.empirical[k] = r.empirical[k];
                point.mc_se[k] = r.mc_se[k];
                point.worst_theta[k] = th;
              }
            }
          }
        }
        point.pass.clear();
        for (std::size_t k = 0; k < alphas.size(); ++k) {
          point.pass.push_back(point.empirical[k] <= alphas[k] + 3.0 * point.mc_se[k]);
        }
        reps_out.emplace_back("point", point);
        reps_out.emplace_back("left-ray", check_im_validity(s.assoc, prs, Assertion::left_ray(s.left_edge, true), s.grid,
                                                            alphas, reps, root.child(500 + idx++)));
        std::vector<double> off;
        for (double th : s.grid) {
          if (th != s.null_point) off.push_back(th);
        }
        reps_out.emplace_back("two-sided", check_im_validity(s.assoc, prs, Assertion::not_point(s.null_point), off,
                                                             alphas, reps, root.child(500 + idx++)));
        for (const auto& [family, rep] : reps_out) {
          for (std::size_t k = 0; k < alphas.size(); ++k) {
            ++checks;
            passed += rep.pass[k];
            const double margin = rep.empirical[k] - alphas[k] - 3.0 * rep.mc_se[k];
            if (margin > worst_margin) {
              worst_margin = margin;
              worst = fmt("%s/%s/%s alpha=%g p=%.4f", std::string(s.assoc.name()).c_str(), prs_name, family.c_str(),
                          alphas[k], rep.empirical[k]);
            }
          }
        }
      }
    }
    w = fmt("%d/%d (model, prs, assertion, alpha) cells within alpha + 3 se at 1e4 reps; tightest: %s", passed, checks,
            worst.c_str());
    return passed == checks;
  });

  criterion("AC6", [&](std::string& w) {
    double worst_unit = 0.0;
    const auto g = gaussian_mean_assoc();
    const auto p = poisson_mean_assoc();
    RandomStream rs = root.child(6);
    for (int i = 0; i < 20; ++i) {
      const double xg = -3.0 + 6.0 * rs.uniform();
      const double xp = std::floor(15.0 * rs.uniform());
      worst_unit = std::max(worst_unit, std::abs(relative_efficiency(g, one_sided_prs(PrsFamily::Upper), xg,
                                                                     Assertion::left_ray(0.5)) - 1.0));
      worst_unit = std::max(worst_unit, std::abs(relative_efficiency(p, one_sided_prs(PrsFamily::Lower), xp,
                                                                     Assertion::left_ray(6.0)) - 1.0));
    }
    const std::vector<Association> models{gaussian_mean_assoc(), poisson_mean_assoc(), exponential_mean_assoc()};
    int dominated = 0;
    double max_excess = -INFINITY;
    for (int c = 0; c < 100; ++c) {
      const auto& m = models[c % 3];
      const auto prs = prs_by_name(c % 2 ? "default" : (m.trend() == EndpointTrend::Increasing ? "lower" : "upper"));
      double x = 0.0;
      double lo = 0.0;
      double hi = 0.0;
      double fid = 0.0;
      do {
        x = m.model() == Association::Model::Gaussian ? -3 + 6 * rs.uniform()
            : m.model() == Association::Model::Poisson ? std::floor(12 * rs.uniform())
                                                        : 0.2 + 5 * rs.uniform();
        const auto f1 = m.focal_interval(x, 0.02 + 0.96 * rs.uniform());
        const auto f2 = m.focal_interval(x, 0.02 + 0.96 * rs.uniform());
        lo = std::min(f1.lower, f2.lower) - 0.05;
        hi = std::max(f1.upper, f2.upper) + 0.05;
        if (m.positive_parameter()) lo = std::max(lo, 1e-6);
        fid = belief_closed_form(m, singleton_prs(), x, Assertion::interval(lo, hi)).belief;
      } while (fid < 0.01);
      const auto r = relative_efficiency_mc(m, prs, x, Assertion::interval(lo, hi), 10000, root.child(600 + c));
      dominated += r.ratio <= 1.0 + 3.0 * r.mc_se;
      max_excess = std::max(max_excess, r.ratio - 1.0);
    }
    w = fmt("matched one-sided R: max |R-1| = %.2e over 40 cases; dominance R <= 1 + 3se in %d/100 cases (max R-1 %.4f)",
            worst_unit, dominated, max_excess);
    return worst_unit <= 1e-9 && dominated == 100;
  });

  criterion("AC7", [&](std::string& w) {
    const auto gm = gaussian_score_model();
    const auto gf = build_balanced_family(*gm, 0.0);
    double gauss_err = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double x = -4.0 + 8.0 * i / 49.0;
      gauss_err = std::max(gauss_err, std::abs(two_sided_belief(*gm, gf, x) - (2.0 * phi(std::abs(x)) - 1.0)));
    }
    const auto em = exponential_score_model();
    const auto ef = build_balanced_family(*em, 1.0);
    double residual = 0.0;
    for (const auto& p : ef.table()) residual = std::max(residual, std::abs(exp_partial_expectation(p.lower, p.upper)));
    double reflex = 0.0;
    for (double t : ef.positive_nodes()) reflex = std::max(reflex, std::abs(ef.xi_plus(ef.xi_minus(t)) - t));
    for (double a : ef.negative_nodes()) reflex = std::max(reflex, std::abs(ef.xi_minus(ef.xi_plus(-a)) + a));
    RandomStream rs = root.child(7);
    std::vector<double> bel(10000);
    for (auto& b : bel) b = two_sided_belief(*em, ef, rs.exponential());
    const double ks = ks_distance(bel, [](double u) { return u; });
    w = fmt("gaussian max err %.2e (1e-8); exp balance residual %.2e, reflexivity %.2e (1e-6); KS %.4f < %.4f",
            gauss_err, residual, reflex, ks, ks_critical_1pct(10000));
    return gauss_err <= 1e-8 && residual <= 1e-6 && reflex <= 1e-6 && ks < ks_critical_1pct(10000);
  });

  criterion("AC8", [](std::string& w) {
    const auto em = exponential_score_model();
    const auto ea = exponential_mean_assoc();
    const auto sb = find_region([&](double th) { return score_balanced_pl(*em, 5.0, th); }, 0.1,
                                default_region_search(ea, 5.0));
    const auto df = plausibility_region(ea, default_prs(), 5.0, 0.1);
    w = fmt("exponential x=5 90%% regions: score-balanced length %.4f vs default %.4f", sb.length(), df.length());
    return !sb.empty && !sb.truncated_high && !df.truncated_high && sb.length() < df.length();
  });

  criterion("AC9", [&](std::string& w) {
    const long reps = 10000;
    long hits = 0;
    const RandomStream base = root.child(9);
    for (long r = 0; r < reps; ++r) {
      RandomStream rs = base.child(r);
      std::vector<double> data(10);
      for (auto& d : data) d = 1.0 + 2.0 * rs.normal();
      const auto [lo, hi] = psi_interval(NormalSample::from_data(data), 0.1);
      hits += lo < 0.5 && 0.5 < hi;
    }
    const double p = static_cast<double>(hits) / reps;
    const double band = 3.0 * std::sqrt(0.09 / reps);
    w = fmt("psi 90%% interval coverage %.4f at (n,mu,sigma)=(10,1,2), band 0.90 +- %.4f", p, band);
    return std::abs(p - 0.9) <= band;
  });

  criterion("AC10", [&](std::string& w) {
    const PowerConfig cfg;  // n1 = n2 = 50, alpha 0.05, 2000 datasets
    const auto rows = power_study(cfg, root.child(10));
    const double se = std::sqrt(0.05 * 0.95 / cfg.n_datasets);
    bool ok = true;
    for (const auto& r : rows) {
      w += fmt("%s(%g)=%.4f ", r.method.c_str(), r.theta_ratio, r.power);
      if (r.theta_ratio == 1.0) ok &= std::abs(r.power - 0.05) <= 3.0 * se;
    }
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
      if (rows[i].theta_ratio != 1.0) ok &= rows[i].power >= rows[i + 1].power;
    }
    w += fmt("level band 0.05 +- %.4f", 3.0 * se);
    return ok;
  });

  criterion("AC11", [](std::string& w) {
    const std::string cli = IMKIT_CLI_PATH;
    const std::vector<std::string> commands{
        "interval --model poisson --x 5 --alpha 0.1",
        "pl-curve --model exponential --prs score-balanced --x 5 --grid 1:60:40 --format json",
        "validate --target im --model poisson --assertion point --theta0 5 --reps 2000 --seed 11",
        "test --model rates --x 1,2,0.5,3,1.5 --reps 5000 --seed 3",
        "power --n1 10 --n2 10 --datasets 200 --reps 2000 --null-reps 2000 --seed 5",
    };
    int same = 0;
    for (std::size_t i = 0; i < commands.size(); ++i) {
      std::string content[2];
      for (int k = 0; k < 2; ++k) {
        const std::string path = "acceptance_rerun_" + std::to_string(i) + "_" + std::to_string(k) + ".out";
        const std::string cmd = "\"" + cli + "\" " + commands[i] + " --out " + path;
        if (std::system(cmd.c_str()) != 0) return false;
        content[k] = slurp(path);
        std::remove(path.c_str());
      }
      same += !content[0].empty() && content[0] == content[1];
    }
    w = fmt("%d/%zu CLI commands byte-identical on rerun", same, commands.size());
    return same == static_cast<int>(commands.size());
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
