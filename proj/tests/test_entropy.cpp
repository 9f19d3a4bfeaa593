#include <cmath>
#include <random>

#include "doctest.h"
#include "sament/entropy.hpp"
#include "sament/errors.hpp"
#include "sament/net.hpp"

using namespace sament;

namespace {

PointSet view(const std::vector<double>& v, std::size_t dim) { return PointSet{v, v.size() / dim, dim}; }

std::vector<double> random_cloud(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n * dim);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_SUITE("entropy") {

TEST_CASE("cover sizes on small hand-made sets") {
  const std::vector<double> one{0.3, -2.0};
  CHECK(greedy_cover(view(one, 2), 0.1) == 1);
  CHECK(exhaustive_min_cover(view(one, 2), 0.1) == 1);
  const std::vector<double> two{0.0, 3.0};
  CHECK(greedy_cover(view(two, 1), 1.0) == 2);
  const std::vector<double> same{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  CHECK(exhaustive_min_cover(view(same, 2), 1e-9) == 1);
  const std::vector<double> line{0.0, 1.5, 3.0};
  CHECK(exhaustive_min_cover(view(line, 1), 1.0) == 3);  // centers are input points
  CHECK(greedy_cover(view(line, 1), 1.0) == 3);
  CHECK(exhaustive_min_cover(view(line, 1), 1.5) == 1);
  CHECK_THROWS_AS(exhaustive_min_cover(view(std::vector<double>(16, 0.0), 1), 1.0), UsageError);
  CHECK_THROWS_AS(greedy_cover(view(std::vector<double>{}, 1), 1.0), UsageError);
}

TEST_CASE("exhaustive <= greedy <= 2 exhaustive on random small sets") {
  std::mt19937_64 rng(31);
  int violations = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + rng() % 14, dim = 1 + rng() % 3;
    const auto pts = random_cloud(rng, n, dim);
    const double eps = 0.1 + 0.3 * std::uniform_real_distribution<double>(0, 1)(rng);
    const auto p = view(pts, dim);
    const auto g = greedy_cover(p, eps), e = exhaustive_min_cover(p, eps);
    CHECK(e <= g);
    CHECK(e <= farthest_point_cover(p, eps));
    CHECK(e <= set_cover_greedy(p, eps));
    violations += g > 2 * e;
  }
  CHECK(violations == 0);
}

TEST_CASE("greedy cover is monotone in eps and yields valid counts") {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 30; ++t) {
    const auto pts = random_cloud(rng, 40, 2);
    const auto p = view(pts, 2);
    std::size_t prev = pts.size();
    for (double eps = 0.02; eps < 1.5; eps *= 1.15) {
      const auto g = greedy_cover(p, eps);
      CHECK(g <= prev);
      CHECK(g >= 1);
      prev = g;
    }
    CHECK(prev == 1);
  }
  const auto big = random_cloud(rng, 100, 2);
  CHECK(greedy_cover(view(big, 2), 0.2) == farthest_point_cover(view(big, 2), 0.2));
}

TEST_CASE("growth fits recover exact models") {
  const std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
  std::vector<double> H;
  for (double e : eps) H.push_back(std::pow(1.0 / e, 2.0));
  auto f = fit_growth(eps, H, GrowthModel::Power);
  CHECK(f.exponent() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(f.params[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.monotone);
  H.clear();
  for (double e : eps) H.push_back(3.0 * std::pow(std::log(1.0 / e), 2.0));
  f = fit_growth(eps, H, GrowthModel::LogSquare);
  CHECK(f.leading() == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(std::abs(f.params[1]) < 1e-8);
  CHECK(std::abs(f.params[2]) < 1e-8);
  H[1] = 0.0;
  CHECK_FALSE(fit_growth(eps, H, GrowthModel::LogSquare).monotone);
  CHECK_THROWS_AS(fit_growth(std::vector<double>{0.4, 0.3, 0.25, 0.21}, H, GrowthModel::Power), UsageError);
  CHECK_THROWS_AS(fit_growth(std::vector<double>{0.4, 0.2, 0.1}, std::vector<double>{1, 2, 3}, GrowthModel::Power),
                  UsageError);
  CHECK(parse_growth_model("logsquare") == GrowthModel::LogSquare);
  CHECK_THROWS_AS(parse_growth_model("cubic"), UsageError);
}

TEST_CASE("constructed smooth nets grow at rate 1/k") {
  const auto b = BasisSpec::trig(4096);
  const std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
  std::vector<double> H;
  for (double e : eps) H.push_back(plan_net(ClassSpec{SmoothSpec{2, 32.0}}, e, b)->log2_size());
  const auto f = fit_growth(eps, H, GrowthModel::Power);
  CHECK(f.monotone);
  CHECK(f.exponent() >= 0.4);
  CHECK(f.exponent() <= 0.6);
}

TEST_CASE("measurement count bookkeeping") {
  CHECK(measurement_lower_bound(100.0, std::exp2(-10.0)) == doctest::Approx(10.0));
  CHECK(measurement_lower_bound(0.0, 0.5) == 0.0);
  CHECK_THROWS_AS(measurement_lower_bound(1.0, 1.0), UsageError);
  CHECK(theorem_bound_check(84, 0.5, 10.0));
  CHECK(theorem_bound_check(441, 0.5, 10.0));
  CHECK_FALSE(theorem_bound_check(442, 0.5, 10.0));
  CHECK(theorem_bound_check(0, 0.5, 0.0));
}

}  // TEST_SUITE
