#include <cmath>
#include <limits>
#include <stdexcept>

#include <doctest.h>

#include "adt/design.hpp"
#include "adt/optimizer.hpp"

using namespace adt;

namespace {

Scenario univariate() {
  Scenario s;
  s.family = ModelFamily::Gamma;
  s.gamma1 = {0.23, 0.53, 1.0, 5.16};
  s.schedule = MeasurementSchedule({0.25, 0.5, 0.75, 1.0});
  s.use_condition = -0.4;
  s.alpha = 0.5;
  return s;
}

Scenario gamma_gamma() {
  Scenario s = univariate();
  s.family = ModelFamily::GammaGamma;
  s.gamma2 = GammaComponentParams{0.31, 0.35, 0.88, 4.6};
  return s;
}

Scenario gamma_lmem() {
  Scenario s = univariate();
  s.family = ModelFamily::GammaLmem;
  s.lmem = LmemComponentParams{2.35, 0.06, 0.28, 0.04, 0.0064, 0.0081, 3.73};
  return s;
}

void check_close(double got, double want, double rel, double abs = 0.0) {
  CHECK(std::abs(got - want) <= rel * std::abs(want) + abs);
}

}  // namespace

TEST_CASE("design invariants") {
  CHECK_THROWS_AS(Design({0.0, 1.0}, {0.6, 0.6}), std::invalid_argument);   // sum != 1
  CHECK_THROWS_AS(Design({0.0, 1.2}, {0.5, 0.5}), std::invalid_argument);   // out of range
  CHECK_THROWS_AS(Design({0.0, 1.0}, {1.0, 0.0}), std::invalid_argument);   // zero weight
  CHECK_THROWS_AS(Design({}, {}), std::invalid_argument);
  // duplicates merge, support sorted
  const Design d({1.0, 0.5, 0.5}, {0.2, 0.3, 0.5});
  REQUIRE(d.size() == 2);
  CHECK(d.points()[0] == 0.5);
  CHECK(d.weights()[0] == doctest::Approx(0.8));
}

TEST_CASE("avar is permutation and merge invariant") {
  const Scenario s = univariate();
  const Design a({0.0, 1.0, 0.5}, {0.4, 0.25, 0.35});
  const Design b({0.5, 0.0, 1.0}, {0.35, 0.4, 0.25});
  CHECK(avar(s, a) == avar(s, b));
  const Design merged({0.0, 0.5, 0.5, 1.0}, {0.4, 0.2, 0.15, 0.25});
  check_close(avar(s, merged), avar(s, a), 1e-12);
}

TEST_CASE("one-point designs are not estimable") {
  const Scenario s = univariate();
  CHECK(avar(s, Design({0.3}, {1.0})) == std::numeric_limits<double>::infinity());
  CHECK(efficiency(s, Design({0.3}, {1.0}), Design::two_point(0.79)) == 0.0);
}

TEST_CASE("univariate criterion matches the closed two-point form") {
  const Scenario s = univariate();
  const CriterionContext ctx = make_criterion_context(s);
  const double lam0 = intensity(0.23, s.schedule);
  const double lam1 = intensity(0.76, s.schedule);
  for (double w : {0.3, 0.5, 0.7884404686}) {
    const double expect = (1.0 + 0.4) * (1.0 + 0.4) / (w * lam0) + 0.16 / ((1.0 - w) * lam1);
    check_close(avar(ctx, Design::two_point(w)), expect, 1e-12);
  }
}

TEST_CASE("efficiencies of the standard designs at the nominal scenario") {
  const Scenario s = univariate();
  const Design optimal = two_point_search(s).design;
  check_close(efficiency(s, Design::two_point(0.5), optimal), 0.75, 0.0, 0.01);
  check_close(efficiency(s, Design::uniform(3), optimal), 0.55, 0.0, 0.01);
  check_close(efficiency(s, optimal, optimal), 1.0, 1e-12);
  // frozen oracle values
  check_close(efficiency(s, Design::two_point(0.5), optimal), 0.7503048400, 1e-6);
  check_close(efficiency(s, Design::uniform(3), optimal), 0.5508539810, 1e-6);
}

TEST_CASE("identical gamma components reduce to the univariate problem") {
  Scenario twin = gamma_gamma();
  twin.gamma2 = twin.gamma1;
  const Design opt_uni = two_point_search(univariate()).design;
  const Design opt_twin = two_point_search(twin).design;
  check_close(opt_twin.weights()[0], opt_uni.weights()[0], 1e-5);
}

TEST_CASE("criterion context constants for the example scenarios") {
  const CriterionContext gg = make_criterion_context(gamma_gamma());
  check_close(gg.t_alpha, 3.9217118298, 1e-8);
  check_close(gg.c1, 0.4083130604, 1e-7);
  check_close(gg.c2, 0.6049892513, 1e-7);

  const CriterionContext gl = make_criterion_context(gamma_lmem());
  check_close(gl.t_alpha, 4.9775002225, 1e-8);
  check_close(gl.c1, 0.7861491091, 1e-7);
  check_close(gl.c2, 0.7888174910, 1e-7);
  check_close(gl.c_varsigma_sq, 0.0450807485, 1e-6);
  check_close(gl.density, 0.5603247920, 1e-7);
}

TEST_CASE("component dominance in the compound weights flips with the gamma intercept") {
  // the LMEM coefficient dominates for small gamma intercepts; by 0.5 the
  // gamma component has taken over decisively
  auto at = [&](double b10) {
    Scenario s = gamma_lmem();
    s.gamma1.beta0 = b10;
    return make_criterion_context(s);
  };
  const CriterionContext low = at(0.0);
  CHECK(low.c2 > low.c1);
  const CriterionContext high = at(0.5);
  CHECK(high.c1 > high.c2);
  CHECK(high.c1 / high.c2 > 100.0);
}

TEST_CASE("avar is convex along weight interpolation") {
  for (const Scenario& s : {univariate(), gamma_gamma(), gamma_lmem()}) {
    const CriterionContext ctx = make_criterion_context(s);
    const Design a({0.0, 0.5, 1.0}, {0.7, 0.1, 0.2});
    const Design b({0.0, 0.5, 1.0}, {0.2, 0.3, 0.5});
    const double fa = avar(ctx, a), fb = avar(ctx, b);
    for (int i = 1; i <= 11; ++i) {
      const double th = i / 12.0;
      std::vector<double> w(3);
      for (int j = 0; j < 3; ++j) w[j] = th * a.weights()[j] + (1 - th) * b.weights()[j];
      const double fm = avar(ctx, Design({0.0, 0.5, 1.0}, w));
      CHECK(fm <= th * fa + (1 - th) * fb + 1e-10);
    }
  }
}

TEST_CASE("gamma+lmem criterion includes the density scale and the additive constant") {
  const Scenario s = gamma_lmem();
  const CriterionContext ctx = make_criterion_context(s);
  const Design d = Design::two_point(0.78);
  const double parts = block_criterion(criterion_blocks(ctx), d);
  check_close(avar(ctx, d), (parts + ctx.c_varsigma_sq) / (ctx.density * ctx.density), 1e-12);
}
