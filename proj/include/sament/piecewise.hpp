#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sament/hilbert.hpp"

namespace sament {

inline constexpr int kMaxPieceDegree = 8;

/// p(t) = sum_m coeffs[m] * (t - origin)^m
struct PolynomialPiece {
  double origin = 0.0;
  std::vector<double> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  double value(double t) const;
  /// l-th derivative at t.
  double derivative(int l, double t) const;
};

/// Piecewise polynomial on [-pi, pi].
///
/// Non-periodic: s breakpoints split [-pi, pi] into s + 1 pieces.
/// Periodic: the interval is a circle; s >= 1 breakpoints make s arcs, the
/// last one wrapping from b_s to b_1 + 2 pi. With s = 0 a single piece covers
/// the whole circle in either mode.
struct PiecewiseDescription {
  std::vector<double> breakpoints;
  std::vector<PolynomialPiece> pieces;
  bool periodic = false;

  /// [lo, hi] of every piece; periodic wrap-around arcs have hi > pi.
  std::vector<std::pair<double, double>> intervals() const;
  double evaluate(double t) const;
};

/// Checks ordering, piece count and degree bound; `min_gap` is the required
/// circular separation of breakpoints.
void validate(const PiecewiseDescription& desc, double min_gap = 0.0);

/// Exact Fourier coefficients of a piecewise polynomial (integration by parts,
/// no quadrature).
Signal analyze_piecewise(const PiecewiseDescription& desc, BasisSpec basis);

/// Exact coefficients of the function equal to `piece` on [lo, hi] and zero elsewhere.
Signal analyze_polynomial_on_interval(const PolynomialPiece& piece, double lo, double hi,
                                      BasisSpec basis);

/// Coefficients of the indicator of [lo, hi], first `d` entries only (rest zero).
void indicator_coefficients(double lo, double hi, std::span<double> out);

/// Exact coefficients of g * 1_[lo, hi] where g is given by trig coefficients
/// `g` (basis indices 0..g.size()-1).
Signal analyze_trig_on_interval(std::span<const double> g, double lo, double hi, BasisSpec basis);

/// Coefficients of a function sampled at N uniform points t_n = -pi + 2 pi n / N
/// (periodic trapezoid rule through an FFT). Requires N > ambient_dim.
Signal analyze_samples(std::span<const double> values, BasisSpec basis);

/// sup |p| over [lo, hi]; exact (critical points) for degree <= 3.
double polynomial_sup_abs(const PolynomialPiece& p, double lo, double hi);

}  // namespace sament
