#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ccs/risk.hpp"

using namespace ccs;

namespace {

// Textbook form of the closed curve, valid while sinh/cosh do not overflow.
// Kept here as an independent reference for the tanh reformulation.
double naive_exchangeable_risk_diff(int p, double gamma, double theta, int n) {
  const double pd = p;
  const double u = 0.5 * pd * theta;
  const double s = std::sinh(u);
  const double c = std::cosh(u);
  const double e = (4.0 / pd) * s * s + 2.0;
  const double d1 = 4.0 * (pd - 1.0) * s * c / e;
  const double d2 =
      2.0 * pd * (pd - 1.0) * (2.0 * c * c + (2.0 - 4.0 / pd) * s * s) / (e * e);
  const double g_inv = 2.0 / (pd * (pd - 1.0));
  return -(2.0 / (double(n) * n)) * g_inv *
         (gamma * d2 + (gamma * gamma + 0.5 * gamma) * d1 * d1);
}

}  // namespace

TEST_CASE("closed exchangeable curve", "[risk]") {
  SECTION("value at theta = 0 is -4 gamma / n^2") {
    for (int p : {2, 3, 10}) {
      for (double gamma : {-0.5, -0.25, -0.01, 0.3}) {
        const double v = exchangeable_risk_diff(p, gamma, 0.0, 100);
        REQUIRE(v == Catch::Approx(-4.0 * gamma / 1e4).epsilon(1e-13));
      }
    }
  }

  SECTION("limit at large theta") {
    for (int p : {2, 3, 10}) {
      for (double gamma : {-0.5, -0.25, -0.01}) {
        const double lim = exchangeable_risk_diff_limit(p, gamma, 100);
        REQUIRE(exchangeable_risk_diff(p, gamma, 50.0, 100) ==
                Catch::Approx(lim).epsilon(1e-10).margin(1e-18));
        // Stays finite and equal to the limit even where sinh/cosh overflow.
        REQUIRE(exchangeable_risk_diff(p, gamma, 1e6, 100) ==
                Catch::Approx(lim).epsilon(1e-12).margin(1e-18));
      }
    }
  }

  SECTION("agrees with the sinh/cosh form at moderate theta") {
    for (int p : {2, 3, 7}) {
      for (double gamma : {-0.5, -0.25, 0.4}) {
        for (double theta : {-4.0, -1.3, -0.2, 0.0, 0.7, 2.5, 5.0}) {
          REQUIRE(exchangeable_risk_diff(p, gamma, theta, 100) ==
                  Catch::Approx(naive_exchangeable_risk_diff(p, gamma, theta, 100))
                      .epsilon(1e-11)
                      .margin(1e-20));
        }
      }
    }
  }

  SECTION("even in theta") {
    for (double theta : {0.3, 1.7, 4.2}) {
      REQUIRE(exchangeable_risk_diff(5, -0.25, theta, 100) ==
              exchangeable_risk_diff(5, -0.25, -theta, 100));
    }
  }

  SECTION("zero for the Jeffreys exponent") {
    REQUIRE(exchangeable_risk_diff(4, 0.0, 1.3, 100) == 0.0);
  }

  SECTION("argument validation") {
    REQUIRE_THROWS_AS(exchangeable_risk_diff(1, -0.25, 0.0, 100), std::invalid_argument);
    REQUIRE_THROWS_AS(exchangeable_risk_diff(3, -0.25, 0.0, 0), std::invalid_argument);
  }
}

TEST_CASE("generic route matches the closed curve on the exchangeable family", "[risk]") {
  for (int p : {2, 3, 5}) {
    const ModelFamily fam = ModelFamily::exchangeable(p);
    for (double gamma : {-0.5, -0.25, 0.3}) {
      const PriorSpec prior = PriorSpec::from_gamma(gamma);
      for (double theta : {0.0, -0.4, 0.4, 2.0, -2.0}) {
        Vector th(1);
        th << theta;
        REQUIRE(asymptotic_risk_diff(fam, prior, th, 100) ==
                Catch::Approx(exchangeable_risk_diff(p, gamma, theta, 100))
                    .epsilon(1e-10)
                    .margin(1e-19));
      }
    }
  }
}

TEST_CASE("generic route on the full family matches a finite-difference operator",
          "[risk]") {
  const ModelFamily fam = ModelFamily::full(4);
  const PriorSpec prior = PriorSpec::from_gamma(-0.25);
  Vector theta(2);
  theta << 0.8, -0.5;
  const int n = 100;
  const double gamma = prior.gamma();
  const double via_fd =
      -(2.0 / (double(n) * n)) *
      laplace_beltrami_theta(
          fam,
          [&](const Vector& th) { return gamma * log_det_fisher_beta(fam.spectrum(th)); },
          theta);
  REQUIRE(asymptotic_risk_diff(fam, prior, theta, n) ==
          Catch::Approx(via_fd).margin(1e-10));
}

TEST_CASE("risk curve table", "[risk]") {
  std::vector<double> thetas;
  for (int i = 0; i <= 20; ++i) thetas.push_back(-1.0 + 0.1 * i);
  const auto table = risk_curve_table({2, 3}, {-0.25, -0.01}, thetas, 100);

  SECTION("size and loop order p, gamma, theta") {
    REQUIRE(table.size() == 2 * 2 * 21);
    REQUIRE(table[0].p == 2);
    REQUIRE(table[0].gamma == -0.25);
    REQUIRE(table[0].theta == -1.0);
    REQUIRE(table[21].gamma == -0.01);
    REQUIRE(table[2 * 21].p == 3);
    REQUIRE(table.back().theta == Catch::Approx(1.0));
  }

  SECTION("rows reproduce the closed form") {
    for (const auto& row : table)
      REQUIRE(row.risk_diff == exchangeable_risk_diff(row.p, row.gamma, row.theta, row.n));
  }

  SECTION("empty axes rejected") {
    REQUIRE_THROWS_AS(risk_curve_table({}, {-0.25}, thetas, 100), std::invalid_argument);
    REQUIRE_THROWS_AS(risk_curve_table({2}, {}, thetas, 100), std::invalid_argument);
    REQUIRE_THROWS_AS(risk_curve_table({2}, {-0.25}, {}, 100), std::invalid_argument);
  }
}
