#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sament {

/// Points are `count` rows of length `dim`, row-major.
struct PointSet {
  std::span<const double> data;
  std::size_t count = 0;
  std::size_t dim = 0;

  const double* row(std::size_t i) const { return data.data() + i * dim; }
};

/// Farthest-point ordering from point 0 (ties to the lower index); the cover is
/// the shortest prefix whose covering radius is <= eps.
std::size_t farthest_point_cover(const PointSet& pts, double eps);

/// Max-coverage greedy with centers among the points (ties to the lower index).
std::size_t set_cover_greedy(const PointSet& pts, double eps);

/// Upper bound on the eps-covering number: the smaller of farthest_point_cover
/// and the best max-coverage greedy cover found at any radius <= eps (the
/// latter for up to 64 points). Non-increasing in eps.
std::size_t greedy_cover(const PointSet& pts, double eps);

/// Exact minimum number of eps-balls centered at input points covering all of
/// them. At most 15 points.
std::size_t exhaustive_min_cover(const PointSet& pts, double eps);

enum class GrowthModel { Power, LogSquare };

std::string to_string(GrowthModel m);
GrowthModel parse_growth_model(const std::string& s);

/// Power: H = a (1/eps)^m, fitted as log H = log a + m log(1/eps); params {a, m}.
/// LogSquare: H = a L^2 + b L + c with L = ln(1/eps); params {a, b, c}.
struct GrowthFit {
  GrowthModel model = GrowthModel::Power;
  std::vector<double> params;
  double r_squared = 0.0;
  bool monotone = true;  ///< false when H increases somewhere as eps grows

  double exponent() const { return params.at(1); }
  double leading() const { return params.at(0); }
};

GrowthFit fit_growth(std::span<const double> eps, std::span<const double> H, GrowthModel model);

/// H / log2(1 / delta): measurements needed when each carries at most log2(1/delta) bits.
double measurement_lower_bound(double H, double delta);

/// n_used <= jl/(1-p) * H + jl/(1-p) + 1, with H = log2 M at eps/6.
bool theorem_bound_check(std::uint64_t n_used, double p, double H_eps_over_6, double jl_constant = 20.0);

}  // namespace sament
