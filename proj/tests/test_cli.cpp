#include <doctest.h>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "imkit/cli.hpp"

using namespace imkit;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "imkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("interval csv output") {
  const auto r = run({"interval", "--model", "poisson", "--x", "5", "--alpha", "0.1"});
  REQUIRE(r.code == kExitOk);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() >= 3);
  CHECK(ls[0].rfind("# imkit {", 0) == 0);
  CHECK(ls[0].find("\"seed\":20130417") != std::string::npos);
  CHECK(ls[2] == "lower,upper");
  const auto comma = ls[3].find(',');
  CHECK(std::stod(ls[3].substr(0, comma)) == doctest::Approx(1.97).epsilon(0.005));
  CHECK(std::stod(ls[3].substr(comma + 1)) == doctest::Approx(10.51).epsilon(0.001));
}

TEST_CASE("curve headers") {
  const auto r = run({"pl-curve", "--model", "exponential", "--x", "5", "--grid", "1:20:5"});
  REQUIRE(r.code == kExitOk);
  const auto ls = lines(r.out);
  CHECK(std::find(ls.begin(), ls.end(), "theta,plausibility,belief") != ls.end());
  CHECK(ls.size() == 2 + 5);

  const auto sb = run({"pl-curve", "--model", "exponential", "--prs", "score-balanced", "--x", "5", "--grid", "1:20:5"});
  REQUIRE(sb.code == kExitOk);
  CHECK(sb.out.find("# diagnostics") != std::string::npos);
  CHECK(sb.out.find("unimodal") != std::string::npos);
}

TEST_CASE("json output is a single object") {
  const auto r = run({"pl-curve", "--model", "gaussian", "--x", "5", "--grid", "3:7:3", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.contains("config"));
  CHECK(j.contains("diagnostics"));
  REQUIRE(j["results"].size() == 3);
  CHECK(j["results"][1]["plausibility"].get<double>() == 1.0);
  CHECK(j["config"]["seed"].get<long>() == 20130417);
}

TEST_CASE("text output") {
  const auto r = run({"test", "--model", "poisson", "--x", "5", "--assertion", "point", "--theta0", "5", "--alpha", "0.1",
                      "--format", "text"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("retain") != std::string::npos);
}

TEST_CASE("test decisions") {
  const auto r = run({"test", "--model", "gaussian", "--prs", "upper", "--x", "0", "--assertion", "right-ray", "--theta0",
                      "2", "--alpha", "0.05"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("reject") != std::string::npos);
  const auto psi = run({"test", "--model", "psi", "--x", "10,0.1,1", "--assertion", "point", "--theta0", "0"});
  REQUIRE(psi.code == kExitOk);
  CHECK(psi.out.find("retain") != std::string::npos);
  const auto rates = run({"test", "--model", "rates", "--x", "1,1.2,0.9,1.1,0.8", "--reps", "2000"});
  REQUIRE(rates.code == kExitOk);
  CHECK(rates.out.find("equal-rates") != std::string::npos);
}

TEST_CASE("power output header") {
  const auto r = run({"power", "--n1", "5", "--n2", "5", "--datasets", "50", "--reps", "1000", "--null-reps", "1000"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("theta_ratio,method,power,mc_se,n_datasets,alpha,n1,n2") != std::string::npos);
}

TEST_CASE("validate exit codes") {
  const auto ok = run({"validate", "--target", "prs", "--prs", "default", "--reps", "5000"});
  CHECK(ok.code == kExitOk);
  const auto bad = run({"validate", "--target", "prs", "--prs", "singleton", "--reps", "5000"});
  CHECK(bad.code == kExitCalibration);
  const auto cov = run({"validate", "--target", "coverage", "--model", "gaussian", "--theta0", "1", "--reps", "500"});
  CHECK(cov.code == kExitOk);
}

TEST_CASE("config errors") {
  CHECK(run({"interval", "--model", "poisson", "--x", "2.5"}).code == kExitConfig);
  CHECK(run({"interval", "--model", "binomial", "--x", "2"}).code == kExitConfig);
  CHECK(run({"pl-curve", "--model", "gaussian", "--x", "1", "--grid", "3:1"}).code == kExitConfig);
  CHECK(run({"pl-curve", "--model", "poisson", "--prs", "score-balanced", "--x", "3", "--grid", "1:5:3"}).code ==
        kExitConfig);
  CHECK(run({"frobnicate"}).code == kExitConfig);
  CHECK(run({"interval", "--model", "gaussian", "--x", "1", "--alpha", "2"}).code == kExitConfig);
  const auto r = run({"interval", "--model", "gaussian", "--x", "oops"});
  CHECK(r.code == kExitConfig);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("reruns are byte-identical") {
  const std::vector<std::string> args{"validate", "--target", "im", "--model", "poisson", "--assertion", "point",
                                      "--theta0", "4", "--reps", "500", "--seed", "7"};
  CHECK(run(args).out == run(args).out);
  auto other = args;
  other.back() = "8";
  CHECK(run(args).out != run(other).out);

  const auto dir = std::filesystem::temp_directory_path();
  const auto f1 = (dir / "imkit_cli_a.csv").string();
  const auto f2 = (dir / "imkit_cli_b.csv").string();
  const std::vector<std::string> base{"power", "--n1", "5", "--n2", "5", "--datasets", "40", "--reps", "1000", "--null-reps", "1000", "--out"};
  auto a = base;
  a.push_back(f1);
  auto b = base;
  b.push_back(f2);
  REQUIRE(run(a).code == kExitOk);
  REQUIRE(run(b).code == kExitOk);
  std::ifstream s1(f1), s2(f2);
  const std::string c1((std::istreambuf_iterator<char>(s1)), {});
  const std::string c2((std::istreambuf_iterator<char>(s2)), {});
  CHECK_FALSE(c1.empty());
  CHECK(c1 == c2);
  std::filesystem::remove(f1);
  std::filesystem::remove(f2);
}

}  // TEST_SUITE
