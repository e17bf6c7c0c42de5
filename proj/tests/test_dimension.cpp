#include <cmath>

#include "doctest.h"
#include "harris/dimension.hpp"
#include "harris/errors.hpp"

using namespace harris;

TEST_CASE("predicted dimension values") {
  CHECK(predicted_dimension(0.0) == doctest::Approx(0.5));
  CHECK(predicted_dimension(0.5) == doctest::Approx(1.0 / 3.0));
  CHECK(predicted_dimension(0.25) == doctest::Approx(3.0 / 7.0));
}

TEST_CASE("resolvent exponent: 1/2 for the Arratia flow") {
  auto r = exponent_via_resolvent(CorrelationFunction::indicator());
  CHECK(r.lambda.size() == 9);
  CHECK(r.predicted == doctest::Approx(0.5));
  CHECK(r.exponent == doctest::Approx(0.5).epsilon(2e-3));
  // Psi(lambda) = sqrt(lambda) exactly for Brownian motion
  for (std::size_t i = 0; i < r.lambda.size(); ++i)
    CHECK(r.psi[i] == doctest::Approx(std::sqrt(r.lambda[i])).epsilon(2e-3));
}

TEST_CASE("resolvent exponent tracks the predicted value off the Arratia case") {
  auto r = exponent_via_resolvent(CorrelationFunction::exp_power(1.0, 0.5));
  CHECK(r.predicted == doctest::Approx(1.0 / 3.0));
  CHECK(r.exponent == doctest::Approx(1.0 / 3.0).epsilon(0.1));
}

TEST_CASE("box dimension: small Arratia run lands near 1/2") {
  SpectralParams p;
  p.sde.dt_w = 1e-6;
  auto r = box_dimension(CorrelationFunction::indicator(), 40, 21, p, 5, 11);
  CHECK(r.n_nonempty == 40);
  CHECK(r.curve.levels.size() == 7);
  CHECK(r.predicted == doctest::Approx(0.5));
  // coarse run: generous tolerance, just pins the scaling regime
  CHECK(r.curve.slope == doctest::Approx(0.5).epsilon(0.3));
  CHECK_THROWS_AS(box_dimension(CorrelationFunction::indicator(), 0, 21, p), ConfigError);
}
