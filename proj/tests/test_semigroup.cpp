#include <cmath>
#include <vector>

#include "doctest.h"
#include "harris/errors.hpp"
#include "harris/math.hpp"
#include "harris/semigroup.hpp"

using namespace harris;

namespace {

struct Solvers {
  ScaleSpeedChart chart;
  SemigroupSolver L;
  SemigroupSolver Lhat;
  Solvers(const CorrelationFunction& b)
      : chart(ScaleSpeedChart::build(b)),
        L(make_L_grid(chart)),
        Lhat(make_Lhat_grid(chart)) {}
};

}  // namespace

TEST_CASE("conservation and contraction") {
  Solvers s(CorrelationFunction::exp_power(1.0, 0.5));
  std::vector<double> ones(s.L.grid().size(), 1.0);
  auto u = s.L.apply(Boundary::Plus, ones, 0.3);
  for (double v : u) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  auto k = s.L.apply(Boundary::Zero, ones, 0.3);
  CHECK(k[0] == 0.0);
  for (double v : k) {
    CHECK(v >= -1e-12);
    CHECK(v <= 1.0 + 1e-12);
  }
  // killed mass is monotone in time
  auto k2 = s.L.apply(Boundary::Zero, ones, 0.6);
  for (std::size_t i = 0; i < k.size(); ++i) CHECK(k2[i] <= k[i] + 1e-12);
}

TEST_CASE("T^- matches T^0 on functions vanishing at the boundary") {
  Solvers s(CorrelationFunction::exp_power(1.0, 0.5));
  auto f = s.L.grid().indicator_geq(0.4);
  f[0] = 0.0;
  auto a = s.L.apply(Boundary::Minus, f, 0.2);
  auto z = s.L.apply(Boundary::Zero, f, 0.2);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i] == doctest::Approx(z[i]).epsilon(1e-12));
}

TEST_CASE("indicator semigroups against Gaussian closed forms") {
  Solvers s(CorrelationFunction::indicator());
  const double t = 0.25, x = 0.2, y = 0.5, sd = std::sqrt(2.0 * t);
  // reflected: T+ 1_{[0,y]}(x) = Phi((y-x)/sd) - Phi((-y-x)/sd)
  auto up = s.L.apply(Boundary::Plus, s.L.grid().indicator_leq(y), t);
  CHECK(s.L.grid().eval(up, x) ==
        doctest::Approx(norm_cdf((y - x) / sd) - norm_cdf((-y - x) / sd)).epsilon(2e-3));
  // killed: That^0 1_{[x,inf)}(y) = Q((x-y)/sd) - Q((x+y)/sd)
  auto uz = s.Lhat.apply(Boundary::Zero, s.Lhat.grid().indicator_geq(x), t);
  CHECK(s.Lhat.grid().eval(uz, y) ==
        doctest::Approx(0.5032139766482728).epsilon(2e-3));  // value at (0.25,0.2,0.5)
  // reflected hat: Q((x-y)/sd) + Q((x+y)/sd)
  auto ur = s.Lhat.apply(Boundary::Plus, s.Lhat.grid().indicator_geq(x), t);
  CHECK(s.Lhat.grid().eval(ur, y) == doctest::Approx(0.8254127828108546).epsilon(2e-3));
}

TEST_CASE("duality residuals are small for both correlation classes") {
  for (auto b : {CorrelationFunction::indicator(), CorrelationFunction::exp_power(1.0, 0.5)}) {
    Solvers s(b);
    auto [r1, r2] = check_duality_single(s.L, s.Lhat, s.chart, 0.25, 0.2, 0.5);
    CHECK(r1 < 1e-3);
    CHECK(r2 < 1e-3);
  }
}

TEST_CASE("alternating duality input validation") {
  Solvers s(CorrelationFunction::indicator());
  CHECK_THROWS_AS(check_duality_alternating(s.L, s.Lhat, s.chart, {0.1, 0.2}, 0.2, 0.5),
                  ConfigError);
  CHECK_THROWS_AS(check_duality_alternating(s.L, s.Lhat, s.chart, {0.0, 0.2, 0.2}, 0.2, 0.5),
                  ConfigError);
}

TEST_CASE("resolvent: closed form for the indicator") {
  auto chart = ScaleSpeedChart::build(CorrelationFunction::indicator());
  // g_lambda(0,0) = 1/sqrt(lambda), so Psi(lambda) = sqrt(lambda)
  for (double lam : {1.0, 4.0, 100.0})
    CHECK(resolvent_at_origin(chart, lam) == doctest::Approx(1.0 / std::sqrt(lam)).epsilon(1e-3));
  double p1 = 1.0 / resolvent_at_origin(chart, 1.0);
  double p4 = 1.0 / resolvent_at_origin(chart, 4.0);
  CHECK(p4 / p1 == doctest::Approx(2.0).epsilon(1e-3));
  CHECK_THROWS_AS(resolvent_at_origin(chart, -1.0), ConfigError);
  CHECK_THROWS_AS(resolvent_at_origin(chart, 1e-9), NumericalError);
}

TEST_CASE("law evolution: mass accounting") {
  Solvers s(CorrelationFunction::exp_power(1.0, 0.5));
  // full F: reflecting evolution conserves total mass
  std::vector<double> p(s.L.grid().size(), 0.0);
  p[0] = 1.0 / s.L.grid().mass[0];
  double before = s.L.total_mass(p);
  double loss = s.L.step_density(p, 1e-3, false);
  CHECK(std::fabs(loss) < 1e-10);
  CHECK(s.L.total_mass(p) == doctest::Approx(before).epsilon(1e-10));
  // killed step drains mass
  loss = s.L.step_density(p, 1e-3, true);
  CHECK(loss > 0.0);

  // indicator: E[b(xi(t))] = 0 away from absorption, so the full-F integral is 0
  Solvers si(CorrelationFunction::indicator());
  CHECK(std::fabs(expected_b_time_integral(si.L, RegimeSchedule::full())) < 1e-9);
  // and with F empty the difference stays trapped: integral = 1
  CHECK(expected_b_time_integral(si.L, RegimeSchedule{}) == doctest::Approx(1.0));
}
