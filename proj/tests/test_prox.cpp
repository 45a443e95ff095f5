#include <doctest.h>

#include <cmath>
#include <functional>

#include "proxrr/errors.hpp"
#include "proxrr/prox.hpp"
#include "proxrr/regularizer.hpp"
#include "test_util.hpp"

using namespace proxrr;
using proxrr::testing::random_vec;

namespace {

// Minimizer of a convex 1-D function on [lo, hi] by ternary search.
double ternary_min(const std::function<double(double)>& g, double lo, double hi) {
  for (int it = 0; it < 300; ++it) {
    const double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
    if (g(a) < g(b)) {
      hi = b;
    } else {
      lo = a;
    }
  }
  return (lo + hi) / 2;
}

Vec vec3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

}  // namespace

TEST_CASE("prox_l1 examples") {
  CHECK(prox_l1(vec3(3, -0.5, 0.1), 1.0) == vec3(2, 0, 0));
  CHECK(prox_l1(Vec::Zero(4), 0.7) == Vec::Zero(4));
  CHECK(prox_l1(Vec::Constant(1, 0.25), 0.25)[0] == 0.0);
  CHECK(prox_l1(Vec::Constant(1, -0.25), 0.25)[0] == 0.0);
  CHECK(prox_l1(vec3(-4, 4, 1.5), 1.5) == vec3(-2.5, 2.5, 0));
  CHECK_THROWS_AS(prox_l1(Vec::Zero(1), 0.0), ArgumentError);
}

TEST_CASE("prox_elastic_net examples") {
  CHECK(prox_elastic_net(Vec::Constant(1, 4.0), 1.0, 1.0, 1.0)[0] == 1.5);
  const Vec x = vec3(1.5, -2, 0.3);
  CHECK(prox_elastic_net(x, 0.7, 0.0, 0.0) == x);
  CHECK(prox_elastic_net(x, 0.7, 0.0, 2.0) == x / 2.4);
  CHECK(prox_elastic_net(x, 0.7, 1.0, 0.0) == prox_l1(x, 0.7));
  CHECK_THROWS_AS(prox_elastic_net(x, 0.0, 1.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(prox_elastic_net(x, 1.0, -1.0, 1.0), ArgumentError);
}

TEST_CASE("prox_elastic_net matches numeric 1-D minimization") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const double gamma = rng.uniform(0.05, 2.0), l1 = rng.uniform(0.0, 1.5), l2 = rng.uniform(0.0, 2.0);
    const Vec x = random_vec(3, rng, 2.0);
    const Vec p = prox_elastic_net(x, gamma, l1, l2);
    for (Eigen::Index j = 0; j < 3; ++j) {
      auto g = [&](double z) { return gamma * (l1 * std::abs(z) + l2 / 2 * z * z) + 0.5 * (z - x[j]) * (z - x[j]); };
      CHECK(std::abs(p[j] - ternary_min(g, -10, 10)) <= 1e-6);
    }
  }
}

TEST_CASE("prox_consensus_plus_R examples") {
  std::vector<Vec> blocks = {(Vec(2) << 1, 3).finished(), (Vec(2) << 3, 1).finished()};
  CHECK(prox_consensus_plus_R(blocks, 0.5, Regularizer::zero()) == Vec::Constant(2, 2.0));

  const Regularizer R = Regularizer::elastic_net(0.4, 0.3);
  std::vector<Vec> single = {vec3(1, -2, 0.1)};
  CHECK(prox_consensus_plus_R(single, 0.9, R) == R.prox(single[0], 0.9));
  CHECK_THROWS_AS(prox_consensus_plus_R(std::span<const Vec>{}, 1.0, R), ArgumentError);
}

TEST_CASE("consensus prox matches a 2-D grid search") {
  Rng rng(5);
  const double gamma = 0.8, l1 = 0.6;
  const Regularizer R = Regularizer::l1(l1);
  std::vector<Vec> blocks;
  for (int m = 0; m < 3; ++m) blocks.push_back(random_vec(2, rng, 1.5));
  auto objective = [&](double z0, double z1) {
    double v = gamma * l1 * (std::abs(z0) + std::abs(z1));
    for (const auto& b : blocks) v += 0.5 * ((z0 - b[0]) * (z0 - b[0]) + (z1 - b[1]) * (z1 - b[1]));
    return v;
  };
  // Coarse-to-fine grid: 201 x 201 points, zoomed around the best point.
  double c0 = 0, c1 = 0, half = 5.0;
  for (int level = 0; level < 5; ++level) {
    double best = INFINITY, b0 = c0, b1 = c1;
    for (int i = -100; i <= 100; ++i) {
      for (int j = -100; j <= 100; ++j) {
        const double z0 = c0 + half * i / 100, z1 = c1 + half * j / 100;
        const double v = objective(z0, z1);
        if (v < best) {
          best = v;
          b0 = z0;
          b1 = z1;
        }
      }
    }
    c0 = b0;
    c1 = b1;
    half /= 20;
  }
  const Vec p = prox_consensus_plus_R(blocks, gamma, R);
  CHECK(std::abs(p[0] - c0) <= 1e-4);
  CHECK(std::abs(p[1] - c1) <= 1e-4);
}

TEST_CASE("pairwise_mean is order-fixed and exact for one block") {
  Rng rng(6);
  std::vector<Vec> blocks;
  for (int m = 0; m < 5; ++m) blocks.push_back(random_vec(3, rng));
  const Vec a = pairwise_mean(blocks), b = pairwise_mean(blocks);
  CHECK(a == b);
  Vec naive = Vec::Zero(3);
  for (const auto& v : blocks) naive += v;
  CHECK((a - naive / 5).norm() <= 1e-15);
  std::vector<Vec> one = {blocks[0]};
  CHECK(pairwise_mean(one) == blocks[0]);
}

TEST_CASE("consensus regularizer on the stacked space") {
  const Regularizer R = Regularizer::elastic_net(0.2, 0.5);
  const Regularizer C = consensus_regularizer(R, 3, 2);
  CHECK(C.mu() == doctest::Approx(0.5 / 3));
  Vec x(6);
  x << 1, 2, 1, 2, 1, 2;
  CHECK(C.value(x) == doctest::Approx(R.value(x.head(2))));
  x[4] = 0;
  CHECK(std::isinf(C.value(x)));
  const Vec p = C.prox(x, 0.6);
  for (int b = 1; b < 3; ++b) CHECK(p.segment(2 * b, 2) == p.head(2));
}

TEST_CASE("proxes are contractions with factor 1/(1 + 2 s mu)") {
  Rng rng(77);
  std::vector<std::pair<Regularizer, double>> regs = {
      {Regularizer::zero(), 0.0}, {Regularizer::l1(0.7), 0.0}, {Regularizer::ridge(1.3), 1.3},
      {Regularizer::elastic_net(0.4, 0.6), 0.6}, {Regularizer::elastic_net(0.4, 0.6).scaled(2.5), 1.5}};
  for (const auto& [R, mu] : regs) {
    CHECK(R.mu() == doctest::Approx(mu));
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const double s = rng.uniform(1e-3, 3.0);
      const Vec x = random_vec(4, rng, 2.0), y = random_vec(4, rng, 2.0);
      const double lhs = (R.prox(x, s) - R.prox(y, s)).squaredNorm();
      worst = std::max(worst, lhs - (x - y).squaredNorm() / (1 + 2 * s * mu));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("elastic-net prox satisfies the subgradient optimality condition") {
  Rng rng(8);
  for (int k = 0; k < 1000; ++k) {
    const double s = rng.uniform(0.01, 2.0), l1 = rng.uniform(0, 1), l2 = rng.uniform(0, 1);
    const Vec x = random_vec(5, rng, 2.0);
    const Vec p = prox_elastic_net(x, s, l1, l2);
    for (Eigen::Index j = 0; j < 5; ++j) {
      if (p[j] != 0.0) {
        const double r = s * (l1 * (p[j] > 0 ? 1 : -1) + l2 * p[j]) + p[j] - x[j];
        CHECK(std::abs(r) <= 1e-8);
      } else {
        CHECK(std::abs(x[j]) <= s * l1 + 1e-8);
      }
    }
  }
}

TEST_CASE("elastic-net prox scaling identity") {
  Rng rng(9);
  for (int k = 0; k < 200; ++k) {
    const double g = rng.uniform(0.1, 2), l1 = rng.uniform(0, 1), l2 = rng.uniform(0, 1), c = rng.uniform(0.2, 5);
    const Vec x = random_vec(4, rng, 2.0);
    CHECK((prox_elastic_net(x, g, l1, l2) - prox_elastic_net(x, c * g, l1 / c, l2 / c)).norm() <= 1e-12);
  }
}

TEST_CASE("regularizer prox may alias its input") {
  const Regularizer R = Regularizer::elastic_net(0.3, 0.2);
  Vec x = vec3(1, -0.1, 2);
  const Vec expected = R.prox(x, 0.5);
  R.prox(x, 0.5, x);
  CHECK(x == expected);
  CHECK_THROWS_AS(R.prox(x, 0.0), ArgumentError);
}
