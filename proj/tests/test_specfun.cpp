#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "gptrans/specfun.hpp"
#include "oracles.hpp"

namespace sf = gptrans::specfun;

namespace {

double rel(double got, long double want) {
  return static_cast<double>(std::fabs((static_cast<long double>(got) - want) / want));
}

}  // namespace

TEST_CASE("frozen values") {
  CHECK(sf::erfc(1.0) == doctest::Approx(0.15729920705028513).epsilon(1e-15));
  CHECK(sf::erfcx(1.0) == doctest::Approx(0.42758357615580700).epsilon(1e-15));
  CHECK(sf::exp_e1(1.0) == doctest::Approx(0.21938393439552027).epsilon(1e-15));
  CHECK(sf::besselj(0.0, 1.0) == doctest::Approx(0.76519768655796655).epsilon(1e-14));
  CHECK(sf::besselj(0.5, 2.0) == doctest::Approx(0.51301613656182775).epsilon(1e-14));
  CHECK(sf::gamma(0.5) == doctest::Approx(1.7724538509055160).epsilon(1e-15));
  CHECK(sf::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-15));
  CHECK(sf::erfc(0.0) == 1.0);
  CHECK(sf::erfcx(0.0) == 1.0);
}

TEST_CASE("erfc against series and continued fraction") {
  for (double x = -3.0; x <= 26.0; x += 0.0625) {
    INFO("x = " << x);
    CHECK(rel(sf::erfc(x), oracle::erfc(x)) <= 1e-12);
  }
}

TEST_CASE("erf is accurate near zero") {
  for (double x : {1e-300, 1e-12, 1e-6, 0.01, 0.3, 0.5, 0.9}) {
    INFO("x = " << x);
    CHECK(rel(sf::erf(x), oracle::erf_series(x)) <= 1e-12);
    CHECK(sf::erf(-x) == -sf::erf(x));
  }
}

TEST_CASE("erfcx against series and continued fraction") {
  for (double x = 0.0; x <= 40.0; x += 0.03125) {
    INFO("x = " << x);
    CHECK(rel(sf::erfcx(x), oracle::erfcx(x)) <= 1e-12);
  }
  for (double x : {50.0, 1e2, 1e3, 1e5, 1e8, 1e150, 1e300}) {
    INFO("x = " << x);
    CHECK(std::isfinite(sf::erfcx(x)));
    CHECK(rel(sf::erfcx(x), oracle::erfcx(x)) <= 1e-12);
  }
  CHECK(sf::erfcx(INFINITY) == 0.0);
}

TEST_CASE("erfcx on negative arguments") {
  for (double x : {-0.1, -0.5, -1.0, -2.0, -4.0}) {
    const long double want = std::exp(static_cast<long double>(x) * x) * oracle::erfc(x);
    INFO("x = " << x);
    CHECK(rel(sf::erfcx(x), want) <= 1e-12);
  }
}

TEST_CASE("gamma against Stirling with shift") {
  for (double x = 0.01; x <= 170.0; x *= 1.07) {
    INFO("x = " << x);
    CHECK(rel(sf::gamma(x), oracle::gamma(x)) <= 1e-12);
    CHECK(rel(sf::lgamma(x), oracle::lgamma(x)) <= 1e-12 + 1e-15 / std::fabs(static_cast<double>(oracle::lgamma(x))));
  }
  for (int k = 1; k < 20; ++k) CHECK(rel(sf::gamma(k + 1.0), oracle::gamma(k + 1.0L)) <= 1e-14);
}

TEST_CASE("gamma recurrence") {
  for (double x = 0.1; x < 50.0; x += 0.37) CHECK(sf::gamma(x + 1.0) == doctest::Approx(x * sf::gamma(x)).epsilon(1e-13));
}

TEST_CASE("E1 against series and continued fraction") {
  for (double x = 1e-6; x <= 700.0; x *= 1.05) {
    INFO("x = " << x);
    CHECK(rel(sf::exp_e1(x), oracle::e1(x)) <= 1e-12);
  }
}

TEST_CASE("Bessel J against the power series") {
  for (double v : {-0.5, -0.25, 0.0, 0.5, 1.0, 2.0, 3.5, 7.0}) {
    for (double x = 0.0; x <= 20.0; x += 0.25) {
      if (v < 0.0 && x == 0.0) {
        CHECK(std::isinf(sf::besselj(v, x)));
        continue;
      }
      const long double want = oracle::besselj(v, x);
      INFO("v = " << v << ", x = " << x);
      CHECK(std::fabs(sf::besselj(v, x) - static_cast<double>(want)) <= 1e-9 * std::max(1.0L, std::fabs(want)));
    }
  }
}

TEST_CASE("Bessel J against the standard library") {
  for (double v : {0.0, 0.5, 1.0, 2.5, 4.0}) {
    for (double x = 0.5; x <= 60.0; x += 0.5) {
      INFO("v = " << v << ", x = " << x);
      CHECK(sf::besselj(v, x) == doctest::Approx(std::cyl_bessel_j(v, x)).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("Bessel J three-term recurrence") {
  for (double v : {0.5, 1.0, 1.5, 3.0, 6.25}) {
    for (double x = 0.5; x <= 40.0; x += 0.75) {
      const double lhs = sf::besselj(v - 1.0, x) + sf::besselj(v + 1.0, x);
      const double rhs = 2.0 * v / x * sf::besselj(v, x);
      INFO("v = " << v << ", x = " << x);
      CHECK(std::fabs(lhs - rhs) <= 1e-9 * std::max(1.0, std::fabs(rhs)));
    }
  }
}

TEST_CASE("Bessel J half-integer closed forms") {
  for (double x = 0.25; x <= 50.0; x += 0.5) {
    const double s = std::sqrt(2.0 / (M_PI * x));
    CHECK(std::fabs(sf::besselj(0.5, x) - s * std::sin(x)) <= 1e-9);
    CHECK(std::fabs(sf::besselj(-0.5, x) - s * std::cos(x)) <= 1e-9);
    CHECK(std::fabs(sf::besselj(1.5, x) - s * (std::sin(x) / x - std::cos(x))) <= 1e-9);
  }
}

TEST_CASE("Bessel branches agree at the crossover") {
  for (double v : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    const double x = sf::kBesselCrossover;
    INFO("v = " << v);
    CHECK(std::fabs(sf::detail::besselj_series(v, x) - sf::detail::besselj_asymptotic(v, x)) <= 1e-9);
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(sf::gamma(0.0), sf::DomainError);
  CHECK_THROWS_AS(sf::gamma(-1.5), sf::DomainError);
  CHECK_THROWS_AS(sf::lgamma(-1.0), sf::DomainError);
  CHECK_THROWS_AS(sf::besselj(-0.75, 1.0), sf::DomainError);
  CHECK_THROWS_AS(sf::besselj(1.0, -1.0), sf::DomainError);
  CHECK_THROWS_AS(sf::exp_e1(0.0), sf::DomainError);
  CHECK_THROWS_AS(sf::exp_e1(-2.0), sf::DomainError);
}

TEST_CASE("accuracy budget validation") {
  CHECK_NOTHROW(sf::AccuracyBudget{}.validate());
  CHECK_THROWS_AS((sf::AccuracyBudget{0.0, 100}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((sf::AccuracyBudget{1e-2, 100}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((sf::AccuracyBudget{1e-12, 5}.validate()), std::invalid_argument);
}
