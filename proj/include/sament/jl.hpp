#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sament/hilbert.hpp"

namespace sament {

/// Scaled orthogonal projection onto a random n-dimensional subspace W of R^d:
/// apply(x)_i = sqrt(d / n) <x_{1..d}, e_i>.
class MeasurementOperator {
 public:
  MeasurementOperator(std::size_t d, std::size_t n, std::uint64_t seed, std::vector<double> frame);

  std::size_t d() const { return d_; }
  std::size_t n() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  double scale() const { return scale_; }
  /// Row-major n x d; row i is e_i.
  std::span<const double> frame() const { return frame_; }
  std::span<const double> row(std::size_t i) const { return std::span(frame_).subspan(i * d_, d_); }

  /// Largest |<e_i, e_j> - delta_ij|.
  double orthonormality_residual() const;

 private:
  std::size_t d_, n_;
  std::uint64_t seed_;
  double scale_;
  std::vector<double> frame_;
};

/// ceil(jl_constant / (1 - p) * ln m).
std::size_t required_measurements(double p, std::uint64_t m, double jl_constant = 20.0);
/// Same with m given through its natural log (for m beyond 64 bits).
std::size_t required_measurements_log(double p, double ln_m, double jl_constant = 20.0);

/// Uniformly random n-frame in R^d from a seeded Gaussian matrix, orthonormalized
/// by two rounds of Cholesky QR.
MeasurementOperator random_subspace(std::size_t d, std::size_t n, std::uint64_t seed);

/// Uses the first d coordinates of x (x.size() >= d).
std::vector<double> apply(const MeasurementOperator& op, std::span<const double> x);
std::vector<double> apply(const MeasurementOperator& op, const Signal& x);
/// Rows of `xs` (count x stride, stride >= d) mapped to count x n.
std::vector<double> apply_rows(const MeasurementOperator& op, std::span<const double> xs, std::size_t count,
                               std::size_t stride);

struct DistortionReport {
  bool ok = true;
  double min_ratio = 1.0;  ///< over pairs with nonzero distance; 1 when there are none
  double max_ratio = 1.0;
  std::uint64_t pairs = 0;
};

inline constexpr double kDistortionLow = 0.5;
inline constexpr double kDistortionHigh = 2.0;

/// All-pairs check of 1/2 |x - y| <= |apply(x) - apply(y)| <= 2 |x - y| over the
/// rows of `points` (count x d). Zero-distance pairs are skipped.
DistortionReport distortion_ok(const MeasurementOperator& op, std::span<const double> points, std::size_t count);

void write_operator(std::ostream& os, const MeasurementOperator& op);
MeasurementOperator read_operator(std::istream& is);

}  // namespace sament
