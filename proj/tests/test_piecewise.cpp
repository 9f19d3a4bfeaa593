#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "sament/errors.hpp"
#include "sament/members.hpp"
#include "sament/piecewise.hpp"
#include "sament/rng.hpp"

using namespace sament;

namespace {

constexpr double kPi = std::numbers::pi;

/// Coefficient i of a piecewise function by per-piece Gauss-Legendre quadrature.
double quad_coeff(const PiecewiseDescription& d, std::size_t i) {
  double s = 0.0;
  const auto iv = d.intervals();
  for (std::size_t p = 0; p < iv.size(); ++p)
    s += oracle::integrate([&](double t) { return d.pieces[p].value(t) * oracle::basis(i, t); }, iv[p].first,
                           iv[p].second, 1024, 16);
  return s;
}

}  // namespace

TEST_SUITE("hilbert_core") {

TEST_CASE("constant function has a single nonzero coefficient") {
  const auto b = BasisSpec::trig(128);
  const PiecewiseDescription d{{}, {PolynomialPiece{0.0, {1.0}}}, false};
  const Signal x = analyze_piecewise(d, b);
  CHECK(x[0] == doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-14));
  for (std::size_t i = 1; i < b.ambient_dim; ++i) CHECK(std::abs(x[i]) <= 1e-14);
}

TEST_CASE("unit step: cosine coefficients vanish, sine coefficients match quadrature") {
  const auto b = BasisSpec::trig(129);
  const PiecewiseDescription d{{0.0}, {PolynomialPiece{0.0, {-1.0}}, PolynomialPiece{0.0, {1.0}}}, false};
  const Signal x = analyze_piecewise(d, b);
  CHECK(std::abs(x[0]) <= 1e-14);
  for (std::size_t i = 1; i < b.ambient_dim; ++i) {
    if (!is_sine(i)) {
      CHECK(std::abs(x[i]) <= 1e-13);
    } else {
      CHECK(std::abs(x[i] - quad_coeff(d, i)) <= 1e-8);
    }
  }
}

TEST_CASE("random piecewise cubics match quadrature coefficient by coefficient") {
  const auto b = BasisSpec::trig(160);
  Rng rng(21);
  for (int rep = 0; rep < 4; ++rep) {
    PiecewiseDescription d;
    d.breakpoints = sample_breakpoints(3, 0.4, rng);
    for (std::size_t p = 0; p <= d.breakpoints.size(); ++p) {
      PolynomialPiece piece{uniform(rng, -3, 3), {}};
      for (int m = 0; m <= 3; ++m) piece.coeffs.push_back(uniform(rng, -1, 1));
      d.pieces.push_back(piece);
    }
    const Signal x = analyze_piecewise(d, b);
    for (std::size_t i = 0; i < b.ambient_dim; i += 3) CHECK(std::abs(x[i] - quad_coeff(d, i)) <= 1e-8);
  }
}

TEST_CASE("single jump coefficients decay like 1/frequency") {
  const auto b = BasisSpec::trig(4097);
  const double a = 0.7;
  const PiecewiseDescription d{{0.9}, {PolynomialPiece{0.0, {0.0}}, PolynomialPiece{0.0, {a}}}, false};
  const Signal x = analyze_piecewise(d, b);
  // least squares of log |c_f| on log f, c_f the (cos, sin) pair magnitude
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t f = 1; 2 * f < b.ambient_dim; ++f) {
    const double m = std::hypot(x[2 * f - 1], x[2 * f]);
    if (m == 0.0) continue;
    const double lx = std::log(static_cast<double>(f)), ly = std::log(m);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope >= -1.2);
  CHECK(slope <= -0.8);
}

TEST_CASE("validation rejects bad descriptions") {
  const auto b = BasisSpec::trig(16);
  PiecewiseDescription d{{0.5, 0.1}, {PolynomialPiece{0, {1}}, PolynomialPiece{0, {1}}, PolynomialPiece{0, {1}}}, false};
  CHECK_THROWS_AS(analyze_piecewise(d, b), UsageError);
  PiecewiseDescription e{{0.5}, {PolynomialPiece{0, {1}}}, false};
  CHECK_THROWS_AS(analyze_piecewise(e, b), UsageError);
  PiecewiseDescription f{{}, {PolynomialPiece{0, std::vector<double>(kMaxPieceDegree + 2, 1.0)}}, false};
  CHECK_THROWS_AS(analyze_piecewise(f, b), UsageError);
  PiecewiseDescription g{{-3.0, 3.0}, {PolynomialPiece{0, {1}}, PolynomialPiece{0, {2}}}, true};
  CHECK_THROWS_AS(validate(g, 0.5), UsageError);  // circular gap 2 pi - 6 < 0.5
}

TEST_CASE("periodic descriptions wrap the last arc") {
  const auto b = BasisSpec::trig(64);
  // the wrap-around piece equals 1 on [2, pi] and [-pi, -1]
  const PiecewiseDescription d{{-1.0, 2.0}, {PolynomialPiece{0, {-1.0}}, PolynomialPiece{0, {1.0}}}, true};
  const Signal x = analyze_piecewise(d, b);
  const PiecewiseDescription flat{{-1.0, 2.0},
                                  {PolynomialPiece{0, {1.0}}, PolynomialPiece{0, {-1.0}}, PolynomialPiece{0, {1.0}}},
                                  false};
  const Signal y = analyze_piecewise(flat, b);
  CHECK(distance(x, y) <= 1e-12);
  CHECK(d.evaluate(0.0) == -1.0);
  CHECK(d.evaluate(3.0) == 1.0);
  CHECK(d.evaluate(-2.0) == 1.0);
}

TEST_CASE("indicator coefficients agree with constant-piece analysis") {
  const auto b = BasisSpec::trig(300);
  std::vector<double> c(b.ambient_dim);
  indicator_coefficients(-0.4, 2.2, c);
  const Signal x = analyze_polynomial_on_interval(PolynomialPiece{0.0, {1.0}}, -0.4, 2.2, b);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(c[i] - x[i]) <= 1e-13);
}

TEST_CASE("trig series restricted to an interval matches quadrature") {
  const auto b = BasisSpec::trig(40);
  const std::vector<double> g{0.3, -0.5, 0.25, 0.0, 0.125, 0.7, -0.2};
  const double lo = -1.1, hi = 2.4;
  const Signal x = analyze_trig_on_interval(g, lo, hi, b);
  for (std::size_t i = 0; i < b.ambient_dim; ++i) {
    const double q = oracle::integrate(
        [&](double t) {
          double v = 0.0;
          for (std::size_t j = 0; j < g.size(); ++j) v += g[j] * oracle::basis(j, t);
          return v * oracle::basis(i, t);
        },
        lo, hi, 256, 16);
    CHECK(std::abs(x[i] - q) <= 1e-10);
  }
}

TEST_CASE("sample analysis recovers band-limited signals") {
  const auto b = BasisSpec::trig(33);
  Rng rng(4);
  std::vector<double> c(b.ambient_dim);
  for (auto& v : c) v = uniform(rng, -1, 1);
  const Signal x(b, c);
  std::vector<double> ts(128);
  for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = -kPi + 2.0 * kPi * static_cast<double>(i) / 128.0;
  const Signal y = analyze_samples(synthesize(x, ts), b);
  CHECK(distance(x, y) <= 1e-12);
}

TEST_CASE("polynomial sup via critical points matches a dense scan") {
  Rng rng(8);
  for (int rep = 0; rep < 200; ++rep) {
    PolynomialPiece p{uniform(rng, -1, 1), {}};
    const int deg = rep % 4;
    for (int m = 0; m <= deg; ++m) p.coeffs.push_back(uniform(rng, -2, 2));
    const double lo = uniform(rng, -3, 0), hi = lo + uniform(rng, 0.1, 3);
    double dense = 0.0;
    for (int i = 0; i <= 20000; ++i) dense = std::max(dense, std::abs(p.value(lo + (hi - lo) * i / 20000.0)));
    const double s = polynomial_sup_abs(p, lo, hi);
    CHECK(s >= dense - 1e-12);
    CHECK(s <= dense + 1e-6);
  }
}

TEST_CASE("tail norms of random piecewise signals decrease with d") {
  const auto b = BasisSpec::trig(kDefaultAmbientDim);
  const ClassSpec spec{PiecewiseCkSpec{1, 2, 1.0, 0.5, 1.0}};
  Rng rng(77);
  for (int rep = 0; rep < 50; ++rep) {
    const Signal x = sample_signal(spec, b, rng);
    double prev = INFINITY;
    for (std::size_t d = 8; d <= b.ambient_dim; d *= 2) {
      const double t = tail_norm(x, d);
      CHECK(t <= prev);
      prev = t;
    }
    CHECK(prev == 0.0);
  }
}

}  // TEST_SUITE
