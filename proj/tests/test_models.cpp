#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "ccs/model.hpp"
#include "ccs/rng.hpp"

using namespace ccs;

TEST_CASE("full family gradient matrix", "[models]") {
  SECTION("p = 4 matches the hand computation") {
    const ModelFamily fam = ModelFamily::full(4);
    REQUIRE(fam.dim() == 2);
    Matrix expected(2, 4);
    expected << -2, 1, 0, 1,
                -1, 0, 1, 0;
    REQUIRE((fam.log_gradient() - expected).cwiseAbs().maxCoeff() == 0.0);
  }

  SECTION("p = 5 matches the hand computation") {
    const ModelFamily fam = ModelFamily::full(5);
    REQUIRE(fam.dim() == 2);
    Matrix expected(2, 5);
    expected << -2, 1, 0, 0, 1,
                -2, 0, 1, 1, 0;
    REQUIRE((fam.log_gradient() - expected).cwiseAbs().maxCoeff() == 0.0);
  }

  SECTION("rows sum to zero for every order") {
    for (int p = 2; p <= 12; ++p) {
      const ModelFamily fam = ModelFamily::full(p);
      REQUIRE(fam.log_gradient().rowwise().sum().cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("exchangeable family gradient matrix", "[models]") {
  const ModelFamily fam = ModelFamily::exchangeable(4);
  REQUIRE(fam.dim() == 1);
  Matrix expected(1, 4);
  expected << -3, 1, 1, 1;
  REQUIRE((fam.log_gradient() - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("families coincide at p = 2 and p = 3", "[models]") {
  for (int p : {2, 3}) {
    const Matrix cf = ModelFamily::full(p).log_gradient();
    const Matrix ce = ModelFamily::exchangeable(p).log_gradient();
    REQUIRE((cf - ce).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("spectrum evaluation", "[models]") {
  SECTION("theta = 0 gives the identity spectrum") {
    for (int p : {2, 5, 8}) {
      const ModelFamily fam = ModelFamily::full(p);
      const Spectrum s = fam.spectrum(Vector::Zero(fam.dim()));
      REQUIRE((s.values() - Vector::Ones(p)).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  SECTION("full p = 4 worked example") {
    const ModelFamily fam = ModelFamily::full(4);
    Vector theta(2);
    theta << 0.2, -0.4;
    const Vector lam = fam.spectrum(theta).values();
    REQUIRE(lam[0] == Catch::Approx(1.0).epsilon(1e-14));  // balances 0.2 - 0.4 + 0.2
    REQUIRE(lam[1] == Catch::Approx(std::exp(0.2)).epsilon(1e-14));
    REQUIRE(lam[2] == Catch::Approx(std::exp(-0.4)).epsilon(1e-14));
    REQUIRE(lam[3] == Catch::Approx(std::exp(0.2)).epsilon(1e-14));
  }

  SECTION("exchangeable spectrum shape") {
    const ModelFamily fam = ModelFamily::exchangeable(5);
    Vector theta(1);
    theta << 0.3;
    const Vector lam = fam.spectrum(theta).values();
    REQUIRE(lam[0] == Catch::Approx(std::exp(-4.0 * 0.3)).epsilon(1e-14));
    for (int k = 1; k < 5; ++k) REQUIRE(lam[k] == std::exp(0.3));
  }

  SECTION("log spectrum equals C transpose theta") {
    RngStream rng(7);
    for (int p = 2; p <= 9; ++p) {
      const ModelFamily fam = ModelFamily::full(p);
      Vector theta(fam.dim());
      for (int i = 0; i < fam.dim(); ++i) theta[i] = rng.uniform(-2.0, 2.0);
      const Vector log_lam = fam.spectrum(theta).values().array().log().matrix();
      const Vector expected = fam.log_gradient().transpose() * theta;
      REQUIRE((log_lam - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SECTION("out-of-range theta rejected") {
    const ModelFamily fam = ModelFamily::exchangeable(2);
    Vector theta(1);
    theta << 400.0;  // the box is 700 / p = 350
    REQUIRE_THROWS_AS(fam.spectrum(theta), std::invalid_argument);
  }

  SECTION("dimension mismatch rejected") {
    const ModelFamily fam = ModelFamily::full(6);
    REQUIRE_THROWS_AS(fam.spectrum(Vector::Zero(2)), std::invalid_argument);
  }
}

TEST_CASE("theta recovery from a spectrum", "[models]") {
  RngStream rng(19);
  for (int p = 2; p <= 10; ++p) {
    for (const char* name : {"full", "exchangeable"}) {
      const ModelFamily fam = ModelFamily::from_name(name, p);
      Vector theta(fam.dim());
      for (int i = 0; i < fam.dim(); ++i) theta[i] = rng.uniform(-1.5, 1.5);
      const Vector back = fam.theta_from(fam.spectrum(theta));
      REQUIRE((back - theta).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("family lookup by name", "[models]") {
  REQUIRE(ModelFamily::from_name("full", 6).kind() == FamilyKind::kFull);
  REQUIRE(ModelFamily::from_name("exchangeable", 6).kind() == FamilyKind::kExchangeable);
  REQUIRE_THROWS_AS(ModelFamily::from_name("toeplitz", 6), std::invalid_argument);
  REQUIRE_THROWS_AS(ModelFamily::full(1), std::invalid_argument);
}
