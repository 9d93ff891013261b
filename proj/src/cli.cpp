#include "imkit/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "imkit/applications.hpp"
#include "imkit/belief.hpp"
#include "imkit/numeric.hpp"
#include "imkit/score_balance.hpp"
#include "imkit/validity.hpp"

namespace imkit {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kDefaultAlphaGrid = "0.01,0.05,0.1,0.25,0.5";

struct RunConfig {
  std::string command;
  std::string model = "gaussian";
  std::string prs = "default";
  std::string x;
  std::string alpha = "0.1";
  std::string grid;
  long reps = 10000;
  std::uint64_t seed = 20130417;
  std::string format = "csv";
  std::string out;
  std::string assertion = "point";
  double theta0 = 0.0;
  double theta1 = 1.0;
  std::string target = "im";
  std::string form = "plausibility";
  int n1 = 50;
  int n2 = 50;
  long datasets = 2000;
  long null_reps = 10000;

  // Which optional flags were given.
  bool has_alpha = false;
  bool has_theta0 = false;
  bool has_model = false;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<json>> rows;
};

struct Output {
  json config = json::object();
  Table table;
  json diagnostics = json::object();
  int exit_code = kExitOk;
};

// ---- parsing helpers ----

double parse_double(const std::string& s, const char* what) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (s.empty() || end != begin + s.size()) throw DomainError(std::string("cannot parse ") + what + " '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
  if (out.empty()) throw DomainError(std::string("empty ") + what);
  return out;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw DomainError("grid must have the form lo:hi:count");
  const double lo = parse_double(parts[0], "grid lower end");
  const double hi = parse_double(parts[1], "grid upper end");
  const double count = parse_double(parts[2], "grid count");
  if (count != std::floor(count) || count < 2) throw DomainError("grid count must be an integer >= 2");
  if (!(lo < hi)) throw DomainError("grid requires lo < hi");
  const int n = static_cast<int>(count);
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  g.back() = hi;
  return g;
}

double single_alpha(const RunConfig& cfg) {
  const auto a = parse_list(cfg.alpha, "alpha");
  if (a.size() != 1) throw DomainError("this command takes a single --alpha");
  if (!(a[0] > 0.0 && a[0] < 1.0)) throw DomainError("alpha must lie in (0,1)");
  return a[0];
}

double single_x(const RunConfig& cfg) {
  if (cfg.x.empty()) throw DomainError("--x is required");
  const auto v = parse_list(cfg.x, "observation");
  if (v.size() != 1) throw DomainError("this model takes a single observation");
  return v[0];
}

NormalSample parse_psi_sample(const RunConfig& cfg) {
  if (cfg.x.empty()) throw DomainError("--x is required (n,xbar,s)");
  const auto v = parse_list(cfg.x, "observation");
  if (v.size() != 3 || v[0] != std::floor(v[0])) throw DomainError("model psi takes --x n,xbar,s");
  NormalSample s{static_cast<int>(v[0]), v[1], v[2]};
  s.validate();
  return s;
}

Assertion build_assertion(const RunConfig& cfg) {
  if (!cfg.has_theta0) throw DomainError("--theta0 is required for assertions");
  const double t0 = cfg.theta0;
  if (cfg.assertion == "point") return Assertion::point(t0);
  if (cfg.assertion == "not-point") return Assertion::not_point(t0);
  if (cfg.assertion == "left-ray") return Assertion::left_ray(t0);
  if (cfg.assertion == "right-ray") return Assertion::right_ray(t0);
  if (cfg.assertion == "interval") return Assertion::interval(t0, cfg.theta1);
  if (cfg.assertion == "exterior") return Assertion::exterior(t0, cfg.theta1);
  throw DomainError("unknown assertion '" + cfg.assertion + "'");
}

void check_in_param_space(const Association& assoc, const std::vector<double>& grid) {
  const auto [lo, hi] = assoc.param_space();
  for (double th : grid) {
    if (!(th > lo && th < hi)) throw DomainError("theta grid leaves the parameter space");
  }
}

std::vector<double> default_theta_grid(const Association& assoc, double x) {
  const auto [lo, hi] = assoc.theta_bracket(x);
  std::vector<double> g(201);
  for (int i = 0; i < 201; ++i) {
    const double t = i / 200.0;
    g[i] = assoc.positive_parameter() ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo);
  }
  return g;
}

bool is_score_balanced(const RunConfig& cfg) { return cfg.prs == "score-balanced"; }

json unimodal_json(const UnimodalReport& r) {
  json j;
  j["holds"] = r.holds;
  j["argmin_defined"] = r.argmin_defined;
  j["argmin"] = r.argmin;
  j["v_at_zero"] = r.v_at_zero;
  j["v_min"] = r.v_min;
  j["scan"] = {r.scan_lo, r.scan_hi};
  return j;
}

json region_diagnostics(const PlausibilityRegion& r) {
  json j;
  j["alpha"] = r.alpha;
  j["search_range"] = {r.search_lo, r.search_hi};
  j["truncated_low"] = r.truncated_low;
  j["truncated_high"] = r.truncated_high;
  j["empty"] = r.empty;
  return j;
}

// ---- commands ----

Output cmd_pl_curve(const RunConfig& cfg) {
  Output o;
  o.table.header = {"theta", "plausibility", "belief"};
  if (cfg.model == "psi") {
    const NormalSample s = parse_psi_sample(cfg);
    const double c = s.z() / std::sqrt(static_cast<double>(s.n));
    const auto grid = cfg.grid.empty() ? parse_grid(std::to_string(c - 3.0) + ":" + std::to_string(c + 3.0) + ":201")
                                       : parse_grid(cfg.grid);
    for (double psi : grid) o.table.rows.push_back({psi, psi_plausibility(s, psi), 0.0});
    return o;
  }
  if (cfg.model == "rates") throw DomainError("model rates has no scalar plausibility curve; use test");

  const Association assoc = association_by_name(cfg.model);
  const double x = single_x(cfg);
  assoc.check_observation(x);
  const auto grid = cfg.grid.empty() ? default_theta_grid(assoc, x) : parse_grid(cfg.grid);
  check_in_param_space(assoc, grid);

  if (is_score_balanced(cfg)) {
    const auto model = score_model_by_name(cfg.model);
    for (double th : grid) o.table.rows.push_back({th, score_balanced_pl(*model, x, th), 0.0});
    const double theta0 = cfg.has_theta0 ? cfg.theta0 : x;
    o.diagnostics["unimodal"] = unimodal_json(check_unimodal_condition(*model, theta0));
    o.diagnostics["unimodal"]["theta0"] = theta0;
    return o;
  }
  const PredictiveRandomSet prs = prs_by_name(cfg.prs);
  for (double th : grid) {
    const BeliefResult r = belief_closed_form(assoc, prs, x, Assertion::point(th));
    o.table.rows.push_back({th, r.plausibility, r.belief});
  }
  return o;
}

Output cmd_interval(const RunConfig& cfg) {
  Output o;
  o.table.header = {"lower", "upper"};
  const double alpha = single_alpha(cfg);
  if (cfg.model == "psi") {
    const auto [lo, hi] = psi_interval(parse_psi_sample(cfg), alpha);
    o.table.rows.push_back({lo, hi});
    o.diagnostics["alpha"] = alpha;
    return o;
  }
  if (cfg.model == "rates") throw DomainError("model rates has no scalar plausibility region");

  const Association assoc = association_by_name(cfg.model);
  const double x = single_x(cfg);
  assoc.check_observation(x);
  PlausibilityRegion region;
  if (is_score_balanced(cfg)) {
    const auto model = score_model_by_name(cfg.model);
    region = find_region([&](double th) { return score_balanced_pl(*model, x, th); }, alpha,
                         default_region_search(assoc, x));
  } else {
    region = plausibility_region(assoc, prs_by_name(cfg.prs), x, alpha);
  }
  for (const auto& [lo, hi] : region.intervals) o.table.rows.push_back({lo, hi});
  o.diagnostics = region_diagnostics(region);
  return o;
}

Output cmd_test(const RunConfig& cfg) {
  Output o;
  o.table.header = {"assertion", "plausibility", "belief", "mc_se", "alpha", "decision"};
  const double alpha = single_alpha(cfg);
  const auto row = [&](const std::string& label, double pl, double bel, double se) {
    o.table.rows.push_back({label, pl, bel, se, alpha, pl <= alpha ? "reject" : "retain"});
  };

  if (cfg.model == "rates") {
    if (cfg.x.empty()) throw DomainError("--x is required");
    const auto x = parse_list(cfg.x, "observation");
    const BeliefResult r = rates_plausibility(x, cfg.reps, RandomStream(cfg.seed, 0));
    row("equal-rates", r.plausibility, r.belief, r.mc_se_plausibility);
    return o;
  }
  if (cfg.model == "psi") {
    if (cfg.assertion != "point") throw DomainError("model psi supports point assertions only");
    const Assertion a = build_assertion(cfg);
    row(a.describe(), psi_plausibility(parse_psi_sample(cfg), cfg.theta0), 0.0, 0.0);
    return o;
  }

  const Association assoc = association_by_name(cfg.model);
  const double x = single_x(cfg);
  assoc.check_observation(x);
  const Assertion a = build_assertion(cfg);
  if (is_score_balanced(cfg)) {
    if (a.kind() != Assertion::Kind::Point) throw DomainError("score-balanced sets support point assertions only");
    const auto model = score_model_by_name(cfg.model);
    row(a.describe(), score_balanced_pl(*model, x, cfg.theta0), 0.0, 0.0);
    return o;
  }
  const PredictiveRandomSet prs = prs_by_name(cfg.prs);
  const BeliefResult r = belief_closed_form(assoc, prs, x, a);
  row(a.describe(), r.plausibility, r.belief, 0.0);
  return o;
}

void report_rows(Output& o, const CalibrationReport& rep) {
  o.table.header = {"target", "theta", "alpha", "empirical", "mc_se", "pass"};
  for (std::size_t k = 0; k < rep.alpha_grid.size(); ++k) {
    const json theta = rep.worst_theta.empty() ? json(nullptr) : json(rep.worst_theta[k]);
    o.table.rows.push_back({std::string(target_name(rep.target)), theta, rep.alpha_grid[k], rep.empirical[k],
                            rep.mc_se[k], static_cast<bool>(rep.pass[k])});
  }
  o.diagnostics["n_rep"] = rep.n_rep;
  o.diagnostics["all_pass"] = rep.all_pass();
  if (!rep.theta_grid.empty()) o.diagnostics["theta_grid"] = rep.theta_grid;
  if (rep.ks_distance) {
    o.diagnostics["ks_distance"] = *rep.ks_distance;
    o.diagnostics["ks_critical_1pct"] = rep.ks_critical;
    o.diagnostics["ks_pass"] = rep.ks_pass();
  }
  if (!rep.all_pass()) o.exit_code = kExitCalibration;
}

// Plausibility-form validity of the score-balanced IM for A = {theta0}.
CalibrationReport score_balanced_validity(const RunConfig& cfg, const std::vector<double>& alphas) {
  const Association assoc = association_by_name(cfg.model);
  const auto model = score_model_by_name(cfg.model);
  const BalancedFamily family(*model, cfg.theta0);
  const RandomStream stream(cfg.seed, 0);
  std::vector<long> hits(alphas.size(), 0);
  for (long i = 0; i < cfg.reps; ++i) {
    RandomStream rs = stream.child(static_cast<std::uint64_t>(i));
    const double pl = 1.0 - two_sided_belief(*model, family, assoc.simulate(cfg.theta0, rs));
    for (std::size_t k = 0; k < alphas.size(); ++k) hits[k] += pl <= alphas[k];
  }
  CalibrationReport rep;
  rep.target = CalibrationTarget::ImValidity;
  rep.alpha_grid = alphas;
  rep.theta_grid = {cfg.theta0};
  rep.n_rep = cfg.reps;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const double p = static_cast<double>(hits[k]) / cfg.reps;
    rep.empirical.push_back(p);
    rep.mc_se.push_back(std::sqrt(p * (1.0 - p) / cfg.reps));
    rep.pass.push_back(p <= alphas[k] + 3.0 * rep.mc_se.back());
    rep.worst_theta.push_back(cfg.theta0);
  }
  return rep;
}

Output cmd_validate(const RunConfig& cfg) {
  Output o;
  if (cfg.reps < 1) throw DomainError("--reps must be positive");
  const auto alphas = parse_list(cfg.alpha, "alpha");
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw DomainError("alpha must lie in (0,1)");
  }
  const RandomStream stream(cfg.seed, 0);

  if (cfg.target == "prs") {
    if (is_score_balanced(cfg)) throw DomainError("prs validation takes a uniform-space PRS");
    report_rows(o, check_prs_validity(prs_by_name(cfg.prs), cfg.reps, alphas, stream));
    return o;
  }
  if (cfg.target != "im" && cfg.target != "coverage") throw DomainError("unknown --target '" + cfg.target + "'");
  if (cfg.model == "psi" || cfg.model == "rates") throw DomainError("validate supports scalar models only");
  const Association assoc = association_by_name(cfg.model);

  if (cfg.target == "coverage") {
    if (!cfg.has_theta0) throw DomainError("--theta0 (true theta) is required for coverage");
    if (alphas.size() != 1) throw DomainError("coverage takes a single --alpha");
    if (is_score_balanced(cfg)) throw DomainError("coverage is available for uniform-space PRSs only");
    report_rows(o, check_coverage(assoc, prs_by_name(cfg.prs), cfg.theta0, alphas[0], cfg.reps, stream));
    return o;
  }

  if (is_score_balanced(cfg)) {
    if (cfg.assertion != "point" || !cfg.grid.empty() || cfg.form != "plausibility") {
      throw DomainError("score-balanced validation covers point assertions in plausibility form");
    }
    if (!cfg.has_theta0) throw DomainError("--theta0 is required for assertions");
    score_model_by_name(cfg.model)->check_theta(cfg.theta0);
    report_rows(o, score_balanced_validity(cfg, alphas));
    return o;
  }
  const Assertion a = build_assertion(cfg);
  ValidityForm form;
  if (cfg.form == "plausibility") {
    form = ValidityForm::Plausibility;
  } else if (cfg.form == "belief") {
    form = ValidityForm::Belief;
  } else {
    throw DomainError("unknown --form '" + cfg.form + "'");
  }
  std::vector<double> grid;
  if (!cfg.grid.empty()) {
    grid = parse_grid(cfg.grid);
  } else if (form == ValidityForm::Plausibility && a.kind() == Assertion::Kind::Point) {
    grid = {cfg.theta0};
  } else {
    throw DomainError("--grid is required for this assertion");
  }
  check_in_param_space(assoc, grid);
  report_rows(o, check_im_validity(assoc, prs_by_name(cfg.prs), a, grid, alphas, cfg.reps, stream, form));
  return o;
}

Output cmd_power(const RunConfig& cfg) {
  if (cfg.has_model && cfg.model != "rates") throw DomainError("power requires --model rates");
  Output o;
  PowerConfig pc;
  pc.n1 = cfg.n1;
  pc.n2 = cfg.n2;
  pc.alpha = single_alpha(cfg);
  pc.n_datasets = cfg.datasets;
  pc.n_mc = cfg.reps;
  pc.n_null = cfg.null_reps;
  if (!cfg.grid.empty()) pc.theta_ratios = parse_grid(cfg.grid);
  o.table.header = {"theta_ratio", "method", "power", "mc_se", "n_datasets", "alpha", "n1", "n2"};
  for (const PowerRow& r : power_study(pc, RandomStream(cfg.seed, 0))) {
    o.table.rows.push_back({r.theta_ratio, r.method, r.power, r.mc_se, r.n_datasets, r.alpha, r.n1, r.n2});
  }
  return o;
}

// ---- output ----

json config_json(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["model"] = cfg.command == "power" ? "rates" : cfg.model;
  if (cfg.command != "power") j["prs"] = cfg.prs;
  if (!cfg.x.empty()) j["x"] = cfg.x;
  j["alpha"] = cfg.alpha;
  if (!cfg.grid.empty()) j["grid"] = cfg.grid;
  j["reps"] = cfg.reps;
  j["seed"] = cfg.seed;
  if (cfg.command == "test" || cfg.command == "validate") {
    j["assertion"] = cfg.assertion;
    if (cfg.has_theta0) j["theta0"] = cfg.theta0;
    if (cfg.assertion == "interval" || cfg.assertion == "exterior") j["theta1"] = cfg.theta1;
  }
  if (cfg.command == "pl-curve" && cfg.has_theta0) j["theta0"] = cfg.theta0;
  if (cfg.command == "validate") {
    j["target"] = cfg.target;
    j["form"] = cfg.form;
  }
  if (cfg.command == "power") {
    j["n1"] = cfg.n1;
    j["n2"] = cfg.n2;
    j["datasets"] = cfg.datasets;
    j["null_reps"] = cfg.null_reps;
  }
  return j;
}

std::string cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
    return buf;
  }
  return "";
}

void write_csv(std::ostream& os, const Output& o) {
  os << "# imkit " << o.config.dump() << "\n";
  if (!o.diagnostics.empty()) os << "# diagnostics " << o.diagnostics.dump() << "\n";
  for (std::size_t i = 0; i < o.table.header.size(); ++i) os << (i ? "," : "") << o.table.header[i];
  os << "\n";
  for (const auto& row : o.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell(row[i]);
    os << "\n";
  }
}

void write_json(std::ostream& os, const Output& o) {
  json results = json::array();
  for (const auto& row : o.table.rows) {
    json r;
    for (std::size_t i = 0; i < row.size(); ++i) r[o.table.header[i]] = row[i];
    results.push_back(std::move(r));
  }
  json doc;
  doc["config"] = o.config;
  doc["results"] = std::move(results);
  doc["diagnostics"] = o.diagnostics;
  os << doc.dump(2) << "\n";
}

void write_text(std::ostream& os, const Output& o) {
  std::vector<std::vector<std::string>> cells{o.table.header};
  for (const auto& row : o.table.rows) {
    std::vector<std::string> r;
    for (const auto& v : row) r.push_back(cell(v));
    cells.push_back(std::move(r));
  }
  std::vector<std::size_t> width(o.table.header.size(), 0);
  for (const auto& r : cells) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  os << "# imkit " << o.config.dump() << "\n";
  for (const auto& r : cells) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      os << (i ? "  " : "") << std::string(width[i] - r[i].size(), ' ') << r[i];
    }
    os << "\n";
  }
  for (const auto& [key, value] : o.diagnostics.items()) os << key << ": " << value.dump() << "\n";
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--model", cfg.model, "gaussian, poisson, exponential, psi or rates");
  sub->add_option("--prs", cfg.prs, "default, lower, upper, singleton or score-balanced");
  sub->add_option("--x", cfg.x, "observation; comma-separated for vectors (psi: n,xbar,s)");
  sub->add_option("--alpha", cfg.alpha, "level in (0,1); validate accepts a comma-separated list");
  sub->add_option("--grid", cfg.grid, "lo:hi:count");
  sub->add_option("--reps", cfg.reps, "Monte Carlo replications");
  sub->add_option("--seed", cfg.seed, "master seed");
  sub->add_option("--format", cfg.format, "csv, json or text")->check(CLI::IsMember({"csv", "json", "text"}));
  sub->add_option("--out", cfg.out, "output file (default: stdout)");
  sub->add_option("--assertion", cfg.assertion, "point, not-point, left-ray, right-ray, interval or exterior");
  sub->add_option("--theta0", cfg.theta0, "assertion parameter");
  sub->add_option("--theta1", cfg.theta1, "upper end for interval and exterior assertions");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Belief and plausibility computations for inferential models", "imkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* pl_curve = app.add_subcommand("pl-curve", "plausibility curve of singleton assertions");
  auto* interval = app.add_subcommand("interval", "plausibility region {theta : pl > alpha}");
  auto* test = app.add_subcommand("test", "IM test: reject when pl(A) <= alpha");
  auto* validate = app.add_subcommand("validate", "Monte Carlo calibration checks");
  auto* power = app.add_subcommand("power", "power study for equality of exponential rates");
  for (auto* sub : {pl_curve, interval, test, validate, power}) add_common(sub, cfg);
  validate->add_option("--target", cfg.target, "prs, im or coverage");
  validate->add_option("--form", cfg.form, "plausibility or belief");
  power->add_option("--n1", cfg.n1, "observations with rate 1");
  power->add_option("--n2", cfg.n2, "observations with rate theta");
  power->add_option("--datasets", cfg.datasets, "simulated datasets per theta");
  power->add_option("--null-reps", cfg.null_reps, "null datasets calibrating the LR test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  cfg.has_alpha = chosen->count("--alpha") > 0;
  cfg.has_theta0 = chosen->count("--theta0") > 0;
  cfg.has_model = chosen->count("--model") > 0;
  if (!cfg.has_alpha && cfg.command == "power") cfg.alpha = "0.05";
  if (!cfg.has_alpha && cfg.command == "validate" && cfg.target != "coverage") cfg.alpha = kDefaultAlphaGrid;

  Output o;
  try {
    if (cfg.command == "pl-curve") o = cmd_pl_curve(cfg);
    if (cfg.command == "interval") o = cmd_interval(cfg);
    if (cfg.command == "test") o = cmd_test(cfg);
    if (cfg.command == "validate") o = cmd_validate(cfg);
    if (cfg.command == "power") o = cmd_power(cfg);
  } catch (const DomainError& e) {
    err << "imkit: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "imkit: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  o.config = config_json(cfg);

  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out, std::ios::binary);
    if (!file) {
      err << "imkit: cannot open " << cfg.out << "\n";
      return kExitConfig;
    }
  }
  std::ostream& os = cfg.out.empty() ? out : file;
  if (cfg.format == "json") {
    write_json(os, o);
  } else if (cfg.format == "text") {
    write_text(os, o);
  } else {
    write_csv(os, o);
  }
  if (o.exit_code == kExitCalibration) err << "imkit: calibration check failed\n";
  return o.exit_code;
}

}  // namespace imkit
