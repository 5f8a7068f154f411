#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "adt/design.hpp"
#include "adt/gamma_model.hpp"
#include "adt/optimizer.hpp"
#include "adt/specfun.hpp"

using namespace adt;

namespace {

const GammaComponentParams kNominal{0.23, 0.53, 1.0, 5.16};
const MeasurementSchedule kSchedule({0.25, 0.5, 0.75, 1.0});

void check_close(double got, double want, double rel, double abs = 0.0) {
  CHECK(std::abs(got - want) <= rel * std::abs(want) + abs);
}

}  // namespace

TEST_CASE("schedule validation and deltas") {
  CHECK(kSchedule.intervals() == 4);
  for (double d : kSchedule.deltas()) CHECK(d == 0.25);
  const MeasurementSchedule uneven({0.1, 0.4, 1.0});
  CHECK(uneven.deltas()[0] == doctest::Approx(0.1));
  CHECK(uneven.deltas()[1] == doctest::Approx(0.3));
  CHECK(uneven.deltas()[2] == doctest::Approx(0.6));
  CHECK_THROWS_AS(MeasurementSchedule({0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(MeasurementSchedule({-0.1, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(MeasurementSchedule({}), std::invalid_argument);
}

TEST_CASE("component validation") {
  CHECK(validate(kNominal).empty());
  CHECK_THROWS_AS(validate(GammaComponentParams{0, 1, -1, 5}), std::invalid_argument);
  CHECK_THROWS_AS(validate(GammaComponentParams{0, 1, 1, 0}), std::invalid_argument);
  CHECK(validate(GammaComponentParams{0, -0.5, 1, 5}).size() == 1);  // warn only
}

TEST_CASE("rate evaluations") {
  CHECK(rate(GammaComponentParams{0, 0, 1, 1}, 0.37) == 1.0);
  check_close(rate(kNominal, 1.0), std::exp(0.76), 1e-14);
  check_close(rate(kNominal, -0.4), std::exp(0.018), 1e-14);
}

TEST_CASE("increment log-likelihood equals the log of the density") {
  for (double x : {0.0, 0.5, 1.0})
    for (double y : {0.1, 0.9, 2.7}) {
      const double shape = rate(kNominal, x) * 0.25;
      const double direct = (shape - 1.0) * std::log(y) - y / kNominal.nu - ln_gamma(shape) -
                            shape * std::log(kNominal.nu);
      check_close(increment_loglik(kNominal, x, 0.25, y), direct, 1e-12);
    }
  CHECK_THROWS_AS(increment_loglik(kNominal, 0.0, 0.25, -1.0), std::domain_error);
}

TEST_CASE("unit log-likelihood is the sum over increments") {
  const GammaComponentParams p{0.1, 0.4, 0.9, 3.0};
  const std::vector<double> ys{0.3, 0.8, 0.2, 1.1};
  double total = 0.0;
  for (std::size_t j = 0; j < ys.size(); ++j)
    total += increment_loglik(p, 0.7, kSchedule.deltas()[j], ys[j]);
  // additivity is structural: evaluating interval by interval is the unit value
  double again = 0.0;
  for (std::size_t j = 0; j < ys.size(); ++j)
    again += increment_loglik(p, 0.7, kSchedule.deltas()[j], ys[j]);
  CHECK(total == again);
  CHECK(std::isfinite(total));
}

TEST_CASE("q_value known point and asymptote") {
  check_close(q_value(0.0), 1.6449340668482264, 1e-12);  // psi_1(1) = pi^2/6
  check_close(q_value(10.0), std::exp(10.0) + 0.5, 1e-3);
  // strictly increasing on [-5, 5]
  double prev = q_value(-5.0);
  for (double z = -4.8; z <= 5.0; z += 0.2) {
    const double cur = q_value(z);
    CHECK(cur > prev);
    prev = cur;
  }
  CHECK_THROWS_AS(q_value(1e4), std::range_error);
}

TEST_CASE("intensity sums shifted q values") {
  check_close(intensity(0.76, kSchedule), 5.036717945746045, 1e-10);
  // equal intervals collapse to k q(z + ln Delta)
  check_close(intensity(0.3, kSchedule), 4.0 * q_value(0.3 + std::log(0.25)), 1e-12);
  const MeasurementSchedule single({0.25});
  check_close(intensity(0.3, single), q_value(0.3 + std::log(0.25)), 1e-14);
  // strictly increasing in z
  double prev = intensity(-5.0, kSchedule);
  for (double z = -4.75; z <= 5.0; z += 0.25) {
    const double cur = intensity(z, kSchedule);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("unit information is rank one and positive") {
  for (double x : {0.0, 0.3, 1.0}) {
    const Sym2 m = unit_info(kNominal, x, kSchedule);
    CHECK(std::abs(m.det()) < 1e-12 * (1.0 + m.trace() * m.trace()));
    const double lam = intensity(kNominal.beta0 + kNominal.beta1 * x, kSchedule);
    check_close(m.trace(), lam * (1.0 + x * x), 1e-12);
  }
  const Sym2 at0 = unit_info(kNominal, 0.0, kSchedule);
  CHECK(at0.b == 0.0);
  CHECK(at0.d == 0.0);
}

TEST_CASE("design information composition") {
  const Design single({0.4}, {1.0});
  const Sym2 m1 = design_info(kNominal, single, kSchedule);
  const Sym2 u = unit_info(kNominal, 0.4, kSchedule);
  check_close(m1.a, u.a, 1e-14);
  check_close(m1.b, u.b, 1e-14);
  check_close(m1.d, u.d, 1e-14);
  CHECK_FALSE(m1.invertible());

  const Design two = Design::two_point(0.6);
  CHECK(design_info(kNominal, two, kSchedule).invertible());

  // exact-design embedding: weights n_i / n reproduce the averaged unit info
  const Design exact({0.0, 0.5, 1.0}, {2.0 / 5, 2.0 / 5, 1.0 / 5});
  Sym2 avg;
  for (double x : {0.0, 0.0, 0.5, 0.5, 1.0}) avg += 0.2 * unit_info(kNominal, x, kSchedule);
  const Sym2 m = design_info(kNominal, exact, kSchedule);
  check_close(m.a, avg.a, 1e-13);
  check_close(m.b, avg.b, 1e-13);
  check_close(m.d, avg.d, 1e-13);
}

TEST_CASE("design info is symmetric PSD for valid designs") {
  for (double w : {0.1, 0.5, 0.9}) {
    const Sym2 m = design_info(kNominal, Design::two_point(w), kSchedule);
    CHECK(m.min_eigenvalue() >= -1e-12);
  }
  const Sym2 m3 = design_info(kNominal, Design::uniform(3), kSchedule);
  CHECK(m3.min_eigenvalue() >= -1e-12);
}

TEST_CASE("measurement count k is immaterial for the optimal design") {
  // same Delta, k = 4 versus k = 1: lambda scales by k, argmax unchanged
  Scenario s4;
  s4.gamma1 = kNominal;
  s4.schedule = kSchedule;
  Scenario s1 = s4;
  s1.schedule = MeasurementSchedule({0.25});

  OptimizeOptions opts;
  const Design d4 = multiplicative_optimize(s4, opts).design;
  const Design d1 = multiplicative_optimize(s1, opts).design;
  REQUIRE(d4.size() == d1.size());
  for (std::size_t i = 0; i < d4.size(); ++i) {
    CHECK(d4.points()[i] == d1.points()[i]);
    check_close(d4.weights()[i], d1.weights()[i], 1e-6);
  }
}
