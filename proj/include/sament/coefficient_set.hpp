#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sament {

/// One multiplicative factor of a net's size.
struct NetFactor {
  std::string name;
  double log2_count = 0.0;
  double step = 0.0;
};

/// Finite set of coefficient vectors, enumerated in a fixed order.
class CoefficientSet {
 public:
  virtual ~CoefficientSet() = default;

  virtual std::size_t dim() const = 0;
  virtual long double log2_size() const = 0;
  /// Exact size when it fits below 2^63.
  virtual std::optional<std::uint64_t> size() const = 0;

  virtual void row(std::uint64_t index, std::span<double> out) const = 0;
  /// Rows [begin, begin + count) into `out`, row-major.
  virtual void rows(std::uint64_t begin, std::uint64_t count, std::span<double> out) const;

  /// Designated element for a target vector that satisfies the set's defining bounds.
  virtual std::vector<double> round(std::span<const double> target) const = 0;
  /// Position of an element in the enumeration order (requires an exact size).
  virtual std::uint64_t index_of(std::span<const double> element) const = 0;

  virtual std::vector<NetFactor> factors() const = 0;

 protected:
  std::uint64_t exact_size_or_throw() const;
};

struct GridAxis {
  std::string name;
  double radius = 1.0;
  std::uint64_t count = 1;

  double step() const { return 2.0 * radius / static_cast<double>(count); }
  double value(std::uint64_t i) const {
    return radius * (2.0 * static_cast<double>(i) + 1.0 - static_cast<double>(count)) / static_cast<double>(count);
  }
  /// Nearest grid point index for v in [-radius, radius] (clamped outside).
  std::uint64_t nearest(double v) const;
};

/// `count` points per axis at cell midpoints of [-radius, radius]; the last axis varies fastest.
class ProductGrid final : public CoefficientSet {
 public:
  explicit ProductGrid(std::vector<GridAxis> axes);

  /// Axis with the fewest points whose step is at most `max_step`.
  static GridAxis axis_for_step(std::string name, double radius, double max_step);

  std::size_t dim() const override { return axes_.size(); }
  long double log2_size() const override;
  std::optional<std::uint64_t> size() const override;
  void row(std::uint64_t index, std::span<double> out) const override;
  void rows(std::uint64_t begin, std::uint64_t count, std::span<double> out) const override;
  std::vector<double> round(std::span<const double> target) const override;
  std::uint64_t index_of(std::span<const double> element) const override;
  std::vector<NetFactor> factors() const override;

  const std::vector<GridAxis>& axes() const { return axes_; }

 private:
  std::vector<GridAxis> axes_;
};

/// Points h z (z integer) with sum_j floor(Q (h w_j z_j / (K rho))^2) <= Q, where
/// rho = 1 + (h/2) |w| / K. Every c with sum (w_j c_j)^2 <= K^2 rounds coordinate-wise
/// into the set, and the set lies inside the ellipsoid of radius K rho.
class EllipsoidLattice final : public CoefficientSet {
 public:
  EllipsoidLattice(std::vector<double> weights, double h, double K, int resolution);

  std::size_t dim() const override { return w_.size(); }
  long double log2_size() const override;
  std::optional<std::uint64_t> size() const override;
  void row(std::uint64_t index, std::span<double> out) const override;
  void rows(std::uint64_t begin, std::uint64_t count, std::span<double> out) const override;
  std::vector<double> round(std::span<const double> target) const override;
  std::uint64_t index_of(std::span<const double> element) const override;
  std::vector<NetFactor> factors() const override;

  double step() const { return h_; }
  double rho() const { return rho_; }
  int budget() const { return Q_; }

 private:
  int cost(std::size_t j, std::int64_t z) const;
  std::int64_t zmax(std::size_t j, int budget) const;
  std::vector<std::int64_t> unrank(std::uint64_t index) const;
  bool advance(std::vector<std::int64_t>& z) const;

  std::vector<double> w_;
  double h_;
  double K_;
  double rho_;
  int Q_;
  std::vector<long double> a_;                 // Q (h w_j / (K rho))^2
  std::vector<std::vector<int>> costs_;        // costs_[j][|z|]
  std::vector<std::vector<long double>> cntl_; // suffix counts, long double
  std::vector<std::vector<std::uint64_t>> cnt_;// suffix counts, saturating
  bool exact_ = true;
};

/// Cartesian product; index = i_first * size(second) + i_second.
class ConcatSet final : public CoefficientSet {
 public:
  ConcatSet(std::shared_ptr<const CoefficientSet> first, std::shared_ptr<const CoefficientSet> second,
            std::string first_prefix = "", std::string second_prefix = "");

  std::size_t dim() const override { return a_->dim() + b_->dim(); }
  long double log2_size() const override { return a_->log2_size() + b_->log2_size(); }
  std::optional<std::uint64_t> size() const override;
  void row(std::uint64_t index, std::span<double> out) const override;
  std::vector<double> round(std::span<const double> target) const override;
  std::uint64_t index_of(std::span<const double> element) const override;
  std::vector<NetFactor> factors() const override;

 private:
  std::shared_ptr<const CoefficientSet> a_, b_;
  std::string pa_, pb_;
};

/// Product with overflow detection.
std::optional<std::uint64_t> checked_mul(std::optional<std::uint64_t> a, std::optional<std::uint64_t> b);

}  // namespace sament
