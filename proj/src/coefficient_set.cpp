#include "sament/coefficient_set.hpp"

#include <algorithm>
#include <cmath>

#include "sament/errors.hpp"

namespace sament {

namespace {

constexpr std::uint64_t kLimit = std::uint64_t{1} << 63;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return (a >= kLimit - b) ? kLimit : a + b; }

}  // namespace

std::optional<std::uint64_t> checked_mul(std::optional<std::uint64_t> a, std::optional<std::uint64_t> b) {
  if (!a || !b) return std::nullopt;
  if (*a == 0 || *b == 0) return std::uint64_t{0};
  if (*a >= kLimit / *b) return std::nullopt;
  return *a * *b;
}

std::uint64_t CoefficientSet::exact_size_or_throw() const {
  const auto s = size();
  SAMENT_REQUIRE(s.has_value(), "coefficient set too large to index (2^" +
                                    std::to_string(static_cast<double>(log2_size())) + " elements)");
  return *s;
}

void CoefficientSet::rows(std::uint64_t begin, std::uint64_t count, std::span<double> out) const {
  const std::size_t n = dim();
  for (std::uint64_t r = 0; r < count; ++r) row(begin + r, out.subspan(r * n, n));
}

// ---------------------------------------------------------------- ProductGrid

std::uint64_t GridAxis::nearest(double v) const {
  const double cell = std::floor((v + radius) / step());
  if (!(cell > 0.0)) return 0;
  return std::min(static_cast<std::uint64_t>(cell), count - 1);
}

ProductGrid::ProductGrid(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
  for (const auto& a : axes_) {
    SAMENT_REQUIRE(a.count >= 1, "grid axis '" + a.name + "' has no points");
    SAMENT_REQUIRE(a.radius > 0.0, "grid axis '" + a.name + "' has non-positive radius");
  }
}

GridAxis ProductGrid::axis_for_step(std::string name, double radius, double max_step) {
  SAMENT_REQUIRE(max_step > 0.0, "grid step must be positive");
  const double n = std::ceil(2.0 * radius / max_step * (1.0 - 1e-12));
  SAMENT_REQUIRE(n < 9.0e18, "grid axis '" + name + "' too fine");
  return GridAxis{std::move(name), radius, static_cast<std::uint64_t>(std::max(1.0, n))};
}

long double ProductGrid::log2_size() const {
  long double s = 0.0L;
  for (const auto& a : axes_) s += std::log2(static_cast<long double>(a.count));
  return s;
}

std::optional<std::uint64_t> ProductGrid::size() const {
  std::optional<std::uint64_t> s = 1;
  for (const auto& a : axes_) s = checked_mul(s, a.count);
  return s;
}

void ProductGrid::row(std::uint64_t index, std::span<double> out) const {
  for (std::size_t i = axes_.size(); i-- > 0;) {
    out[i] = axes_[i].value(index % axes_[i].count);
    index /= axes_[i].count;
  }
}

void ProductGrid::rows(std::uint64_t begin, std::uint64_t count, std::span<double> out) const {
  const std::size_t n = axes_.size();
  if (count == 0) return;
  std::vector<std::uint64_t> digit(n);
  std::uint64_t idx = begin;
  for (std::size_t i = n; i-- > 0;) {
    digit[i] = idx % axes_[i].count;
    idx /= axes_[i].count;
  }
  for (std::uint64_t r = 0; r < count; ++r) {
    for (std::size_t i = 0; i < n; ++i) out[r * n + i] = axes_[i].value(digit[i]);
    for (std::size_t i = n; i-- > 0;) {
      if (++digit[i] < axes_[i].count) break;
      digit[i] = 0;
    }
  }
}

std::vector<double> ProductGrid::round(std::span<const double> target) const {
  SAMENT_REQUIRE(target.size() == axes_.size(), "coefficient vector has wrong length");
  std::vector<double> out(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) out[i] = axes_[i].value(axes_[i].nearest(target[i]));
  return out;
}

std::uint64_t ProductGrid::index_of(std::span<const double> element) const {
  exact_size_or_throw();
  SAMENT_REQUIRE(element.size() == axes_.size(), "coefficient vector has wrong length");
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) idx = idx * axes_[i].count + axes_[i].nearest(element[i]);
  return idx;
}

std::vector<NetFactor> ProductGrid::factors() const {
  std::vector<NetFactor> f;
  for (const auto& a : axes_)
    f.push_back({a.name, static_cast<double>(std::log2(static_cast<long double>(a.count))), a.step()});
  return f;
}

// ------------------------------------------------------------ EllipsoidLattice

EllipsoidLattice::EllipsoidLattice(std::vector<double> weights, double h, double K, int resolution)
    : w_(std::move(weights)), h_(h), K_(K) {
  SAMENT_REQUIRE(!w_.empty(), "lattice needs at least one dimension");
  SAMENT_REQUIRE(h > 0.0 && K > 0.0, "lattice step and radius must be positive");
  SAMENT_REQUIRE(resolution >= 1, "lattice resolution must be >= 1");
  const std::size_t J = w_.size();
  SAMENT_REQUIRE(static_cast<double>(resolution) * static_cast<double>(J) < 1e7, "lattice budget too large");
  Q_ = resolution * static_cast<int>(J);

  long double wsq = 0.0L;
  for (double w : w_) wsq += static_cast<long double>(w) * w;
  rho_ = 1.0 + 0.5 * h_ * static_cast<double>(std::sqrt(wsq)) / K_;

  a_.resize(J);
  costs_.resize(J);
  for (std::size_t j = 0; j < J; ++j) {
    const long double r = static_cast<long double>(h_) * w_[j] / (static_cast<long double>(K_) * rho_);
    a_[j] = static_cast<long double>(Q_) * r * r;
    auto& c = costs_[j];
    for (std::int64_t z = 0;; ++z) {
      const long double v = std::floor(a_[j] * static_cast<long double>(z) * static_cast<long double>(z));
      if (v > static_cast<long double>(Q_)) break;
      c.push_back(static_cast<int>(v));
    }
  }

  const std::size_t B = static_cast<std::size_t>(Q_) + 1;
  cntl_.assign(J + 1, std::vector<long double>(B, 0.0L));
  cnt_.assign(J + 1, std::vector<std::uint64_t>(B, 0));
  std::fill(cntl_[J].begin(), cntl_[J].end(), 1.0L);
  std::fill(cnt_[J].begin(), cnt_[J].end(), 1);
  for (std::size_t j = J; j-- > 0;) {
    const auto& c = costs_[j];
    for (std::size_t b = 0; b < B; ++b) {
      long double sl = cntl_[j + 1][b];
      std::uint64_t si = cnt_[j + 1][b];
      for (std::size_t t = 1; t < c.size() && static_cast<std::size_t>(c[t]) <= b; ++t) {
        const std::size_t rest = b - static_cast<std::size_t>(c[t]);
        sl += 2.0L * cntl_[j + 1][rest];
        si = sat_add(si, sat_add(cnt_[j + 1][rest], cnt_[j + 1][rest]));
      }
      cntl_[j][b] = sl;
      cnt_[j][b] = si;
    }
  }
  exact_ = cnt_[0][static_cast<std::size_t>(Q_)] < kLimit;
}

int EllipsoidLattice::cost(std::size_t j, std::int64_t z) const {
  const std::size_t a = static_cast<std::size_t>(z < 0 ? -z : z);
  return a < costs_[j].size() ? costs_[j][a] : Q_ + 1;
}

std::int64_t EllipsoidLattice::zmax(std::size_t j, int budget) const {
  const auto& c = costs_[j];
  const auto it = std::upper_bound(c.begin(), c.end(), budget);
  return static_cast<std::int64_t>(it - c.begin()) - 1;
}

long double EllipsoidLattice::log2_size() const {
  return std::log2(cntl_[0][static_cast<std::size_t>(Q_)]);
}

std::optional<std::uint64_t> EllipsoidLattice::size() const {
  if (!exact_) return std::nullopt;
  return cnt_[0][static_cast<std::size_t>(Q_)];
}

std::vector<std::int64_t> EllipsoidLattice::unrank(std::uint64_t index) const {
  const std::uint64_t total = exact_size_or_throw();
  SAMENT_REQUIRE(index < total, "lattice index out of range");
  std::vector<std::int64_t> z(w_.size());
  int b = Q_;
  for (std::size_t j = 0; j < w_.size(); ++j) {
    const std::int64_t zm = zmax(j, b);
    for (std::int64_t v = -zm; v <= zm; ++v) {
      const int c = cost(j, v);
      const std::uint64_t n = cnt_[j + 1][static_cast<std::size_t>(b - c)];
      if (index < n) {
        z[j] = v;
        b -= c;
        break;
      }
      index -= n;
    }
  }
  return z;
}

bool EllipsoidLattice::advance(std::vector<std::int64_t>& z) const {
  const std::size_t J = w_.size();
  std::vector<int> budget(J + 1);
  budget[0] = Q_;
  for (std::size_t j = 0; j < J; ++j) budget[j + 1] = budget[j] - cost(j, z[j]);
  for (std::size_t j = J; j-- > 0;) {
    if (z[j] + 1 <= zmax(j, budget[j])) {
      ++z[j];
      int b = budget[j] - cost(j, z[j]);
      for (std::size_t i = j + 1; i < J; ++i) {
        z[i] = -zmax(i, b);
        b -= cost(i, z[i]);
      }
      return true;
    }
  }
  return false;
}

void EllipsoidLattice::row(std::uint64_t index, std::span<double> out) const {
  const auto z = unrank(index);
  for (std::size_t j = 0; j < z.size(); ++j) out[j] = h_ * static_cast<double>(z[j]);
}

void EllipsoidLattice::rows(std::uint64_t begin, std::uint64_t count, std::span<double> out) const {
  if (count == 0) return;
  auto z = unrank(begin);
  const std::size_t J = w_.size();
  for (std::uint64_t r = 0; r < count; ++r) {
    for (std::size_t j = 0; j < J; ++j) out[r * J + j] = h_ * static_cast<double>(z[j]);
    if (r + 1 < count) SAMENT_ASSERT(advance(z), "lattice enumeration ran past its end");
  }
}

std::vector<double> EllipsoidLattice::round(std::span<const double> target) const {
  SAMENT_REQUIRE(target.size() == w_.size(), "coefficient vector has wrong length");
  std::vector<double> out(w_.size());
  long double total = 0.0L;
  for (std::size_t j = 0; j < w_.size(); ++j) {
    const std::int64_t z = std::llround(target[j] / h_);
    total += cost(j, z);
    out[j] = h_ * static_cast<double>(z);
  }
  SAMENT_REQUIRE(total <= Q_, "target lies outside the coefficient ellipsoid");
  return out;
}

std::uint64_t EllipsoidLattice::index_of(std::span<const double> element) const {
  exact_size_or_throw();
  SAMENT_REQUIRE(element.size() == w_.size(), "coefficient vector has wrong length");
  std::uint64_t idx = 0;
  int b = Q_;
  for (std::size_t j = 0; j < w_.size(); ++j) {
    const std::int64_t zj = std::llround(element[j] / h_);
    const std::int64_t zm = zmax(j, b);
    SAMENT_REQUIRE(zj >= -zm && zj <= zm, "element is not a lattice point of the set");
    for (std::int64_t v = -zm; v < zj; ++v) idx += cnt_[j + 1][static_cast<std::size_t>(b - cost(j, v))];
    b -= cost(j, zj);
  }
  return idx;
}

std::vector<NetFactor> EllipsoidLattice::factors() const {
  return {NetFactor{"ellipsoid_lattice", static_cast<double>(log2_size()), h_}};
}

// ------------------------------------------------------------------ ConcatSet

ConcatSet::ConcatSet(std::shared_ptr<const CoefficientSet> first, std::shared_ptr<const CoefficientSet> second,
                     std::string first_prefix, std::string second_prefix)
    : a_(std::move(first)), b_(std::move(second)), pa_(std::move(first_prefix)), pb_(std::move(second_prefix)) {}

std::optional<std::uint64_t> ConcatSet::size() const { return checked_mul(a_->size(), b_->size()); }

void ConcatSet::row(std::uint64_t index, std::span<double> out) const {
  exact_size_or_throw();
  const std::uint64_t nb = *b_->size();
  a_->row(index / nb, out.subspan(0, a_->dim()));
  b_->row(index % nb, out.subspan(a_->dim(), b_->dim()));
}

std::vector<double> ConcatSet::round(std::span<const double> target) const {
  SAMENT_REQUIRE(target.size() == dim(), "coefficient vector has wrong length");
  auto out = a_->round(target.subspan(0, a_->dim()));
  const auto tail = b_->round(target.subspan(a_->dim()));
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

std::uint64_t ConcatSet::index_of(std::span<const double> element) const {
  exact_size_or_throw();
  return a_->index_of(element.subspan(0, a_->dim())) * *b_->size() + b_->index_of(element.subspan(a_->dim()));
}

std::vector<NetFactor> ConcatSet::factors() const {
  auto f = a_->factors();
  for (auto& x : f) x.name = pa_ + x.name;
  for (auto x : b_->factors()) {
    x.name = pb_ + x.name;
    f.push_back(std::move(x));
  }
  return f;
}

}  // namespace sament
