#include "sament/entropy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "sament/errors.hpp"

namespace sament {

namespace {

double dist2(const PointSet& p, std::size_t i, std::size_t j) {
  double s = 0.0;
  const double* a = p.row(i);
  const double* b = p.row(j);
  for (std::size_t k = 0; k < p.dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

void check_points(const PointSet& p, double eps) {
  SAMENT_REQUIRE(p.count >= 1, "cover needs at least one point");
  SAMENT_REQUIRE(p.data.size() >= p.count * p.dim, "point buffer too short");
  SAMENT_REQUIRE(eps > 0.0, "cover radius must be positive");
}

}  // namespace

std::size_t farthest_point_cover(const PointSet& pts, double eps) {
  check_points(pts, eps);
  const double e2 = eps * eps;
  std::vector<double> d(pts.count);
  for (std::size_t i = 0; i < pts.count; ++i) d[i] = dist2(pts, 0, i);
  std::size_t chosen = 1;
  for (;;) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < pts.count; ++i)
      if (d[i] > d[far]) far = i;
    if (d[far] <= e2) return chosen;
    ++chosen;
    for (std::size_t i = 0; i < pts.count; ++i) d[i] = std::min(d[i], dist2(pts, far, i));
  }
}

std::size_t set_cover_greedy(const PointSet& pts, double eps) {
  check_points(pts, eps);
  const std::size_t n = pts.count;
  const double e2 = eps * eps;
  std::vector<std::vector<std::size_t>> ball(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (dist2(pts, i, j) <= e2) ball[i].push_back(j);
  std::vector<char> covered(n, 0);
  std::size_t left = n, chosen = 0;
  while (left > 0) {
    std::size_t best = 0, gain = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t g = 0;
      for (std::size_t j : ball[i]) g += !covered[j];
      if (g > gain) gain = g, best = i;
    }
    for (std::size_t j : ball[best]) {
      left -= !covered[j];
      covered[j] = 1;
    }
    ++chosen;
  }
  return chosen;
}

std::size_t greedy_cover(const PointSet& pts, double eps) {
  std::size_t best = farthest_point_cover(pts, eps);
  if (pts.count > 64) return best;
  // a cover at a smaller radius is also a cover at eps; the greedy count only
  // changes at pairwise distances
  const double e2 = eps * eps;
  std::vector<double> radii{eps};
  for (std::size_t i = 0; i < pts.count; ++i)
    for (std::size_t j = i + 1; j < pts.count; ++j) {
      const double q = dist2(pts, i, j);
      if (q > 0.0 && q <= e2) radii.push_back(std::sqrt(q));
    }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  for (double r : radii) {
    // sqrt may round below the squared distance it came from
    const double rr = std::min(eps, std::nextafter(r, std::numeric_limits<double>::infinity()));
    best = std::min(best, set_cover_greedy(pts, rr));
  }
  return best;
}

std::size_t exhaustive_min_cover(const PointSet& pts, double eps) {
  check_points(pts, eps);
  SAMENT_REQUIRE(pts.count <= 15, "exhaustive cover is limited to 15 points");
  const std::size_t n = pts.count;
  const double e2 = eps * eps;
  std::vector<std::uint32_t> cov(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (dist2(pts, i, j) <= e2) cov[i] |= 1u << j;
  const std::uint32_t full = (1u << n) - 1u;
  std::vector<std::uint32_t> uni(std::size_t{1} << n, 0);
  std::size_t best = n;
  for (std::uint32_t m = 1; m <= full; ++m) {
    uni[m] = uni[m & (m - 1)] | cov[static_cast<std::size_t>(std::countr_zero(m))];
    if (uni[m] == full) best = std::min<std::size_t>(best, static_cast<std::size_t>(std::popcount(m)));
  }
  return best;
}

std::string to_string(GrowthModel m) { return m == GrowthModel::Power ? "power" : "logsquare"; }

GrowthModel parse_growth_model(const std::string& s) {
  if (s == "power") return GrowthModel::Power;
  if (s == "logsquare") return GrowthModel::LogSquare;
  throw UsageError("unknown growth model '" + s + "' (expected power or logsquare)");
}

GrowthFit fit_growth(std::span<const double> eps, std::span<const double> H, GrowthModel model) {
  SAMENT_REQUIRE(eps.size() == H.size(), "eps and H differ in length");
  SAMENT_REQUIRE(eps.size() >= 4, "growth fit needs at least 4 eps values");
  double lo = eps[0], hi = eps[0];
  for (double e : eps) {
    SAMENT_REQUIRE(e > 0.0 && std::isfinite(e), "eps values must be positive");
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  SAMENT_REQUIRE(hi >= 2.0 * lo, "eps values must span at least one octave");

  GrowthFit fit;
  fit.model = model;
  std::vector<std::size_t> order(eps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return eps[a] < eps[b]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (H[order[i]] > H[order[i - 1]]) fit.monotone = false;

  const std::size_t m = eps.size();
  const Eigen::Index rows = static_cast<Eigen::Index>(m);
  const Eigen::Index cols = model == GrowthModel::Power ? 2 : 3;
  Eigen::MatrixXd X(rows, cols);
  Eigen::VectorXd y(rows);
  for (std::size_t i = 0; i < m; ++i) {
    const double L = std::log(1.0 / eps[i]);
    const auto r = static_cast<Eigen::Index>(i);
    if (model == GrowthModel::Power) {
      SAMENT_REQUIRE(H[i] > 0.0, "power fit needs positive H values");
      X(r, 0) = 1.0;
      X(r, 1) = L;
      y(r) = std::log(H[i]);
    } else {
      X(r, 0) = L * L;
      X(r, 1) = L;
      X(r, 2) = 1.0;
      y(r) = H[i];
    }
  }
  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd res = y - X * beta;
  const double ss_res = res.squaredNorm();
  const double ss_tot = (y.array() - y.mean()).square().sum();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  if (model == GrowthModel::Power)
    fit.params = {std::exp(beta(0)), beta(1)};
  else
    fit.params = {beta(0), beta(1), beta(2)};
  return fit;
}

double measurement_lower_bound(double H, double delta) {
  SAMENT_REQUIRE(H >= 0.0, "entropy must be non-negative");
  SAMENT_REQUIRE(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  return H / std::log2(1.0 / delta);
}

bool theorem_bound_check(std::uint64_t n_used, double p, double H_eps_over_6, double jl_constant) {
  const double f = jl_constant / (1.0 - p);
  return static_cast<double>(n_used) <= f * H_eps_over_6 + f + 1.0;
}

}  // namespace sament
