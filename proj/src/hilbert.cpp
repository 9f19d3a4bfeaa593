#include "sament/hilbert.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "sament/errors.hpp"

namespace sament {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);

void require_same_basis(const Signal& x, const Signal& y) {
  SAMENT_REQUIRE(x.basis() == y.basis(), "signals live in different bases");
}

void require_prefix(const Signal& x, std::size_t d) {
  SAMENT_REQUIRE(d >= 1 && d <= x.size(),
                 "prefix dimension " + std::to_string(d) + " outside [1, " +
                     std::to_string(x.size()) + "]");
}

}  // namespace

BasisSpec BasisSpec::trig(std::size_t ambient_dim) {
  SAMENT_REQUIRE(ambient_dim >= 2, "ambient_dim must be at least 2");
  return BasisSpec{BasisKind::Trig, ambient_dim};
}

double basis_value(std::size_t i, double t) {
  if (i == 0) return kInvSqrt2Pi;
  const double f = static_cast<double>(frequency_of(i));
  return (is_sine(i) ? std::sin(f * t) : std::cos(f * t)) * kInvSqrtPi;
}

Signal::Signal(BasisSpec basis, std::vector<double> coeffs)
    : basis_(basis), coeffs_(std::move(coeffs)) {
  SAMENT_REQUIRE(basis_.ambient_dim >= 2, "ambient_dim must be at least 2");
  SAMENT_REQUIRE(coeffs_.size() == basis_.ambient_dim,
                 "coefficient count " + std::to_string(coeffs_.size()) +
                     " does not match ambient_dim " + std::to_string(basis_.ambient_dim));
  for (double c : coeffs_) SAMENT_REQUIRE(std::isfinite(c), "non-finite coefficient");
}

Signal Signal::zero(BasisSpec basis) {
  return Signal(basis, std::vector<double>(basis.ambient_dim, 0.0));
}

Signal Signal::unit(BasisSpec basis, std::size_t i) {
  SAMENT_REQUIRE(i < basis.ambient_dim, "basis index out of range");
  std::vector<double> c(basis.ambient_dim, 0.0);
  c[i] = 1.0;
  return Signal(basis, std::move(c));
}

double inner(const Signal& x, const Signal& y) {
  require_same_basis(x, y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm(const Signal& x) {
  double s = 0.0;
  for (double c : x.coeffs()) s += c * c;
  return std::sqrt(s);
}

double distance(const Signal& x, const Signal& y) {
  require_same_basis(x, y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - y[i];
    s += diff * diff;
  }
  return std::sqrt(s);
}

Signal project_prefix(const Signal& x, std::size_t d) {
  require_prefix(x, d);
  std::vector<double> c(x.coeffs().begin(), x.coeffs().end());
  std::fill(c.begin() + static_cast<std::ptrdiff_t>(d), c.end(), 0.0);
  return Signal(x.basis(), std::move(c));
}

double tail_norm(const Signal& x, std::size_t d) {
  require_prefix(x, d);
  double s = 0.0;
  for (std::size_t i = d; i < x.size(); ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

Signal operator+(const Signal& x, const Signal& y) { return axpy(x, 1.0, y); }
Signal operator-(const Signal& x, const Signal& y) { return axpy(x, -1.0, y); }

Signal operator*(double a, const Signal& x) {
  std::vector<double> c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = a * x[i];
  return Signal(x.basis(), std::move(c));
}

Signal axpy(const Signal& x, double a, const Signal& y) {
  require_same_basis(x, y);
  std::vector<double> c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = x[i] + a * y[i];
  return Signal(x.basis(), std::move(c));
}

double synthesize(const Signal& x, double t) {
  const double ts[1] = {t};
  return synthesize(x, ts)[0];
}

std::vector<double> synthesize(const Signal& x, std::span<const double> ts) {
  std::vector<double> out(ts.size());
  const std::size_t dim = x.size();
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const std::complex<double> step = std::polar(1.0, ts[k]);
    std::complex<double> e = step;
    double acc = x[0] * kInvSqrt2Pi;
    for (std::size_t f = 1; 2 * f - 1 < dim; ++f) {
      // resync the rotation every 64 steps to bound drift
      if (f % 64 == 0) e = std::polar(1.0, static_cast<double>(f) * ts[k]);
      acc += x[2 * f - 1] * e.real() * kInvSqrtPi;
      if (2 * f < dim) acc += x[2 * f] * e.imag() * kInvSqrtPi;
      e *= step;
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace sament
