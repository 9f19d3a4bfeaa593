#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "sament/coefficient_set.hpp"
#include "sament/errors.hpp"

using namespace sament;

TEST_SUITE("function_classes") {

TEST_CASE("product grid enumeration and rounding") {
  const ProductGrid g({GridAxis{"a", 1.0, 3}, GridAxis{"b", 2.0, 4}});
  CHECK(*g.size() == 12);
  CHECK(g.log2_size() == doctest::Approx(std::log2(12.0)));
  std::vector<double> all(12 * 2), one(2);
  g.rows(0, 12, all);
  for (std::uint64_t i = 0; i < 12; ++i) {
    g.row(i, one);
    CHECK(one[0] == all[i * 2]);
    CHECK(one[1] == all[i * 2 + 1]);
    CHECK(g.index_of(one) == i);
  }
  // last axis fastest
  CHECK(all[0] == all[2]);
  CHECK(all[1] != all[3]);
  const auto r = g.round(std::vector<double>{0.95, -1.9});
  CHECK(r[0] == doctest::Approx(2.0 / 3.0));
  CHECK(r[1] == doctest::Approx(-1.5));
  CHECK(GridAxis{"x", 1.0, 11}.nearest(1.0) == 10);
  CHECK(GridAxis{"x", 1.0, 11}.nearest(-1.0) == 0);
}

TEST_CASE("axis_for_step never exceeds the requested step") {
  for (double st : {0.1, 0.3, 0.7, 2.0, 5.0}) {
    const auto a = ProductGrid::axis_for_step("x", 1.0, st);
    CHECK(a.step() <= st * (1.0 + 1e-12));
    if (a.count > 1) CHECK(2.0 / (a.count - 1) > st);
  }
}

TEST_CASE("ellipsoid lattice matches brute-force enumeration") {
  const std::vector<double> w{1.0, 2.0, 3.0};
  const double h = 0.35, K = 1.0;
  const EllipsoidLattice L(w, h, K, 8);
  const double rho = L.rho();
  const int Q = L.budget();
  std::vector<std::vector<long>> pts;
  const long zm = static_cast<long>(K * rho / h) + 2;
  for (long a = -zm; a <= zm; ++a)
    for (long b = -zm; b <= zm; ++b)
      for (long c = -zm; c <= zm; ++c) {
        const long z[3] = {a, b, c};
        long cost = 0;
        for (int j = 0; j < 3; ++j) {
          const long double r = static_cast<long double>(h) * w[j] * z[j] / (static_cast<long double>(K) * rho);
          cost += static_cast<long>(std::floor(Q * r * r));
        }
        if (cost <= Q) pts.push_back({a, b, c});
      }
  REQUIRE(L.size().has_value());
  CHECK(*L.size() == pts.size());
  std::vector<double> rows(pts.size() * 3), one(3);
  L.rows(0, pts.size(), rows);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int j = 0; j < 3; ++j) CHECK(rows[i * 3 + j] == doctest::Approx(h * pts[i][j]));
    L.row(i, one);
    CHECK(one[0] == rows[i * 3]);
    CHECK(L.index_of(one) == i);
    double e = 0.0;
    for (int j = 0; j < 3; ++j) e += (w[j] * one[j]) * (w[j] * one[j]);
    CHECK(std::sqrt(e) <= K * rho * (1 + 1e-12));
  }
  // a partial block starting mid-way agrees with the full enumeration
  std::vector<double> part(5 * 3);
  L.rows(7, 5, part);
  for (std::size_t i = 0; i < 15; ++i) CHECK(part[i] == rows[7 * 3 + i]);
}

TEST_CASE("ellipsoid members round into the lattice") {
  const std::vector<double> w{1.0, 4.0, 9.0, 16.0};
  const EllipsoidLattice L(w, 0.1, 2.0, 16);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<double> c(4);
    double e = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
      c[j] = u(rng) / w[j];
      e += (w[j] * c[j]) * (w[j] * c[j]);
    }
    for (auto& v : c) v *= 2.0 / std::sqrt(e);  // on the boundary
    const auto r = L.round(c);
    double err = 0.0;
    for (std::size_t j = 0; j < 4; ++j) err = std::max(err, std::abs(r[j] - c[j]));
    CHECK(err <= 0.05 + 1e-12);
    CHECK(L.index_of(r) < *L.size());
  }
}

TEST_CASE("concat set indexing") {
  auto a = std::make_shared<ProductGrid>(std::vector<GridAxis>{GridAxis{"a", 1.0, 3}});
  auto b = std::make_shared<ProductGrid>(std::vector<GridAxis>{GridAxis{"b", 1.0, 5}});
  const ConcatSet s(a, b, "x.", "y.");
  CHECK(*s.size() == 15);
  std::vector<double> row(2);
  for (std::uint64_t i = 0; i < 15; ++i) {
    s.row(i, row);
    CHECK(s.index_of(row) == i);
  }
  const auto f = s.factors();
  REQUIRE(f.size() == 2);
  CHECK(f[0].name == "x.a");
  CHECK(f[1].name == "y.b");
}

TEST_CASE("oversized sets refuse indexing but still count") {
  std::vector<GridAxis> axes;
  for (int i = 0; i < 70; ++i) axes.push_back(GridAxis{"a", 1.0, 2});
  const ProductGrid g(axes);
  CHECK_FALSE(g.size().has_value());
  CHECK(g.log2_size() == doctest::Approx(70.0));
  std::vector<double> zero(70, 0.1);
  CHECK_THROWS_AS(g.index_of(zero), UsageError);
}

}  // TEST_SUITE
