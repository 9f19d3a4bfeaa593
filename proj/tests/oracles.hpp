#pragma once

// Independent numerical references used only by the tests.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

/// Composite Gauss-Legendre: `panels` panels of `order` nodes on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, int panels = 512,
                        int order = 16) {
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(lo + 0.5 * h * (x[i] + 1.0));
  }
  return 0.5 * h * s;
}

/// Periodic trapezoid rule with n points on [-pi, pi).
inline double trapezoid(const std::function<double(double)>& f, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(-std::numbers::pi + 2.0 * std::numbers::pi * i / n);
  return s * 2.0 * std::numbers::pi / n;
}

/// Basis function i evaluated from its textbook definition.
inline double basis(std::size_t i, double t) {
  if (i == 0) return 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const double f = static_cast<double>((i + 1) / 2);
  return (i % 2 == 1 ? std::cos(f * t) : std::sin(f * t)) / std::sqrt(std::numbers::pi);
}

}  // namespace oracle
