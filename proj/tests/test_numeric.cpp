#include <doctest.h>

#include <boost/math/distributions/non_central_t.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "imkit/numeric.hpp"
#include "imkit/random_stream.hpp"
#include "oracles.hpp"

using namespace imkit;

TEST_SUITE("numeric") {

TEST_CASE("normal cdf matches erfc reference") {
  for (double z = -8.0; z <= 8.0; z += 0.25) CHECK(norm_cdf(z) == doctest::Approx(oracle::phi_cdf(z)).epsilon(1e-13));
  CHECK(norm_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
}

TEST_CASE("normal quantile inverts the reference cdf") {
  for (double p : {1e-12, 1e-6, 0.001, 0.025, 0.3, 0.5, 0.77, 0.975, 0.999}) {
    CHECK(norm_quantile(p) == doctest::Approx(oracle::phi_quantile(p)).epsilon(1e-10));
  }
  CHECK(norm_quantile(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-13));
  CHECK_THROWS_AS(norm_quantile(0.0), DomainError);
  CHECK_THROWS_AS(norm_quantile(1.0), DomainError);
}

TEST_CASE("gamma cdf agrees with direct Poisson sums through the duality") {
  for (long x = 0; x <= 20; ++x) {
    for (double theta : {0.1, 0.7, 2.0, 5.0, 9.5, 17.0, 30.0}) {
      // P{X <= x} = 1 - G_{x+1}(theta)
      CHECK(1.0 - gamma_cdf(theta, x + 1.0) == doctest::Approx(oracle::poisson_cdf_sum(x, theta)).epsilon(1e-11));
      CHECK(poisson_cdf(x, theta) == doctest::Approx(oracle::poisson_cdf_sum(x, theta)).epsilon(1e-11));
    }
  }
}

TEST_CASE("gamma cdf special values and complements") {
  for (double t : {0.01, 0.5, 1.0, 4.0, 20.0}) CHECK(gamma_cdf(t, 1.0) == doctest::Approx(1.0 - std::exp(-t)));
  CHECK(gamma_cdf(0.0, 3.0) == 0.0);
  for (double shape : {0.3, 1.0, 6.0, 50.0}) {
    for (double x : {0.1, 1.0, 7.0, 80.0}) {
      CHECK(gamma_cdf(x, shape) + gamma_sf(x, shape) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  CHECK(gamma_sf(200.0, 5.0) > 0.0);
  CHECK(gamma_sf(200.0, 5.0) == doctest::Approx(boost::math::gamma_q(5.0, 200.0)).epsilon(1e-10));
  CHECK_THROWS_AS(gamma_cdf(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(gamma_cdf(-1.0, 2.0), DomainError);
}

TEST_CASE("gamma quantile") {
  CHECK(gamma_quantile(0.05, 5.0) == doctest::Approx(1.970).epsilon(5e-4));
  CHECK(gamma_quantile(0.95, 6.0) == doctest::Approx(10.513).epsilon(5e-4));
  for (double shape : {0.5, 1.0, 3.0, 21.0}) {
    for (double p : {1e-8, 0.01, 0.4, 0.9, 0.999999}) {
      CHECK(gamma_quantile(p, shape) == doctest::Approx(boost::math::gamma_p_inv(shape, p)).epsilon(1e-10));
      CHECK(gamma_cdf(gamma_quantile(p, shape), shape) == doctest::Approx(p).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(gamma_quantile(1.5, 2.0), DomainError);
}

TEST_CASE("poisson pmf") {
  CHECK(poisson_pmf(5, 5.0) == doctest::Approx(0.17547).epsilon(1e-4));
  CHECK(poisson_pmf(5, 1.0) == doctest::Approx(std::exp(-1.0) / 120.0).epsilon(1e-13));
  CHECK(poisson_pmf(0, 2.5) == doctest::Approx(std::exp(-2.5)).epsilon(1e-14));
  CHECK(poisson_pmf(-1, 2.0) == 0.0);
  CHECK_THROWS_AS(poisson_pmf(3, 0.0), DomainError);
  CHECK_THROWS_AS(poisson_pmf(3, -1.0), DomainError);
  double total = 0.0;
  for (long k = 0; k < 200; ++k) total += poisson_pmf(k, 17.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("noncentral t with zero noncentrality is the central t") {
  for (int df : {1, 2, 3, 4, 9, 15, 30}) {
    for (double z : {-4.0, -1.3, 0.0, 0.4, 2.2, 6.0}) {
      CHECK(noncentral_t_cdf(z, df, 0.0) == doctest::Approx(oracle::student_t_cdf(z, df)).epsilon(1e-9));
    }
  }
}

TEST_CASE("noncentral t against an independent implementation") {
  for (int df : {1, 4, 9, 29}) {
    for (double ncp : {-3.0, -0.5, 0.7, 2.0, 6.0}) {
      const boost::math::non_central_t dist(df, ncp);
      for (double z : {-2.0, 0.0, 1.0, 3.5, 8.0}) {
        CHECK(noncentral_t_cdf(z, df, ncp) == doctest::Approx(boost::math::cdf(dist, z)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("noncentral t matches a direct simulation") {
  // (ncp + Z) / sqrt(W / df) <= z with 10^6 draws; se about 4e-4.
  RandomStream rs(99, 3);
  const int df = 9;
  const double ncp = 1.0;
  const double z = 2.0;
  const long n = 1000000;
  long hits = 0;
  for (long i = 0; i < n; ++i) {
    const double w = std::sqrt(rs.chi_square(df) / df);
    hits += (ncp + rs.normal()) / w <= z;
  }
  const double p = static_cast<double>(hits) / n;
  const double se = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(noncentral_t_cdf(z, df, ncp) - p) < 4.0 * se);
}

TEST_CASE("noncentral t is decreasing in the noncentrality") {
  double prev = 1.0;
  for (double ncp = -5.0; ncp <= 5.0; ncp += 0.5) {
    const double f = noncentral_t_cdf(0.8, 7, ncp);
    CHECK(f < prev);
    prev = f;
  }
  CHECK_THROWS_AS(noncentral_t_cdf(0.0, 0, 1.0), DomainError);
}

TEST_CASE("integrate handles finite and infinite ranges") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, INFINITY) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integrate(norm_pdf, -INFINITY, INFINITY) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integrate(norm_pdf, -INFINITY, 1.0) == doctest::Approx(oracle::phi_cdf(1.0)).epsilon(1e-10));
  CHECK(integrate([](double x) { return 1.0; }, 2.0, 2.0) == 0.0);
}

TEST_CASE("integrate reports non-convergence") {
  const QuadratureSpec tight{1e-15, 1e-15, 2};
  CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, tight), QuadratureError);
  CHECK_THROWS_AS(QuadratureSpec({-1.0, 1e-8, 10}).validate(), DomainError);
}

TEST_CASE("find_root") {
  const double r = find_root([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
  CHECK(r == doctest::Approx(std::numbers::sqrt2).epsilon(1e-13));
  CHECK(find_root([](double x) { return x; }, 0.0, 1.0, 1e-12) == 0.0);
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12), BracketError);
}

}  // TEST_SUITE
