#include <doctest.h>

#include <cmath>

#include "proxrr/errors.hpp"
#include "proxrr/schedules.hpp"

using namespace proxrr;

namespace {

ScheduleParams base() {
  ScheduleParams p;
  p.l_max = 10.0;
  p.mu = 1.0;
  p.n = 5;
  p.epochs = 100;
  return p;
}

}  // namespace

TEST_CASE("constant stepsizes") {
  CHECK(constant_stepsize(base()) == 0.1);
  CHECK(constant_stepsize(base(), StepsizeRule::sgd) == 0.05);
  ScheduleParams bad = base();
  bad.l_max = 0.0;
  CHECK_THROWS_AS(constant_stepsize(bad), ArgumentError);
}

TEST_CASE("tuned stepsizes") {
  ScheduleParams p;
  p.l_max = 1.0;
  p.mu = 1.0;
  p.epsilon = 1e-4;
  p.sigma_rad = 1.0;
  CHECK(tuned_stepsize_rr(p, TuningRegime::strongly_convex_regularizer) == doctest::Approx(0.01));
  CHECK(tuned_stepsize_rr(p, TuningRegime::strongly_convex_components) == doctest::Approx(0.0070710678118654752));
  p.sigma_rad = 0.0;
  CHECK(tuned_stepsize_rr(p, TuningRegime::strongly_convex_regularizer) == 1.0);
  ScheduleParams missing = p;
  missing.epsilon.reset();
  CHECK_THROWS_AS(tuned_stepsize_rr(missing, TuningRegime::strongly_convex_regularizer), ArgumentError);

  // eps mu / (4 sigma_*^2) = 0.01 / (4 * 4).
  ScheduleParams s;
  s.l_max = 1.0;
  s.mu = 1.0;
  s.epsilon = 0.01;
  s.sigma_star = 2.0;
  CHECK(tuned_stepsize_sgd(s) == doctest::Approx(0.000625));
  s.sigma_star = 0.0;
  CHECK(tuned_stepsize_sgd(s) == 0.5);
}

TEST_CASE("decreasing schedule examples") {
  const ScheduleParams p = base();
  CHECK(decreasing_stepsize(p, 25) == 0.1);
  CHECK(decreasing_stepsize(p, 50) == 0.1);
  // s = 3.5, t - t0 = 30: 7 / (5 * 33.5).
  CHECK(decreasing_stepsize(p, 80) == doctest::Approx(7.0 / 167.5).epsilon(1e-15));
  CHECK(decreasing_stepsize(p, 80) == doctest::Approx(0.0417910));
  // Raw value 7 / 22.5 = 0.311 is capped.
  CHECK(decreasing_stepsize(p, 51) == 0.1);
  CHECK_THROWS_AS(decreasing_stepsize(p, 100), ArgumentError);
}

TEST_CASE("decreasing schedule invariants") {
  for (double l_max : {1.0, 10.0, 250.0}) {
    for (std::size_t n : {1, 4, 50}) {
      for (std::size_t T : {1, 2, 7, 100, 301}) {
        ScheduleParams p = base();
        p.l_max = l_max;
        p.n = n;
        p.epochs = T;
        double prev = INFINITY;
        for (std::size_t t = 0; t < T; ++t) {
          const double g = decreasing_stepsize(p, t);
          CHECK(g <= 1.0 / l_max);
          CHECK(g <= prev);
          prev = g;
          if (double(T) <= l_max / (2.0 * p.mu * double(n))) CHECK(g == 1.0 / l_max);
        }
      }
    }
  }
}

TEST_CASE("odd T uses t0 = ceil(T/2)") {
  ScheduleParams p = base();
  p.l_max = 1.0;
  p.epochs = 7;  // t0 = 4
  CHECK(decreasing_stepsize(p, 4) == 1.0);
  // s = 7/20, raw 7 / (5 * (0.35 + 1)) = 1.037 capped; t = 6 gives 7 / (5 * 2.35).
  CHECK(decreasing_stepsize(p, 5) == 1.0);
  CHECK(decreasing_stepsize(p, 6) == doctest::Approx(7.0 / 11.75));
}

TEST_CASE("StepsizeSchedule wrappers") {
  const auto c = StepsizeSchedule::constant(0.3);
  CHECK(c(0) == 0.3);
  CHECK(c(1000) == 0.3);
  CHECK(c.name() == "constant");
  CHECK_THROWS_AS(StepsizeSchedule::constant(0.0), ArgumentError);

  const auto d = StepsizeSchedule::decreasing(base());
  CHECK(d(80) == decreasing_stepsize(base(), 80));
  CHECK(d(500) == decreasing_stepsize(base(), 99));
  ScheduleParams flat = base();
  flat.mu = 0.0;
  CHECK_THROWS_AS(StepsizeSchedule::decreasing(flat), ArgumentError);
}

TEST_CASE("SGD switching schedule") {
  const ScheduleParams p = base();  // switch at k = 4 * ceil(10 / 1) = 40
  CHECK(decreasing_stepsize_sgd(p, 0) == 0.05);
  CHECK(decreasing_stepsize_sgd(p, 39) == 0.05);
  CHECK(decreasing_stepsize_sgd(p, 40) == doctest::Approx(81.0 / 1681.0).epsilon(1e-15));
  CHECK(decreasing_stepsize_sgd(p, 1000) == doctest::Approx(2001.0 / 1002001.0).epsilon(1e-15));
  double prev = decreasing_stepsize_sgd(p, 0);
  for (std::size_t k = 1; k < 5000; ++k) {
    const double g = decreasing_stepsize_sgd(p, k);
    CHECK(g <= prev);
    CHECK(g <= 0.05);
    prev = g;
  }
  ScheduleParams bad = base();
  bad.mu = 0.0;
  CHECK_THROWS_AS(decreasing_stepsize_sgd(bad, 0), ArgumentError);
}
