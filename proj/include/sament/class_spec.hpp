#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "sament/hilbert.hpp"

namespace sament {

struct ClassSpec;

/// Coefficient ellipsoid sum_j (j^k c_j)^2 <= K^2, j the 1-based basis index.
struct SmoothSpec {
  int k = 1;
  double K = 1.0;
};

/// Piecewise polynomials of degree <= k on [-pi, pi] with at most s jumps.
/// |p| <= A and |p^(m)| <= K2 (1 <= m <= k) on every piece; jumps are at least
/// rho1 apart and at least rho1 / 2 away from the seam at +-pi.
struct PiecewiseCkSpec {
  int k = 0;
  int s = 1;
  double K2 = 1.0;
  double rho1 = 0.5;
  double A = 1.0;
};

/// At most kappa jumps; every piece is the restriction of a trig series
/// with |c_j| <= K exp(-eta j).
struct PiecewiseAnalyticSpec {
  int kappa = 1;
  double eta = 0.5;
  double K = 1.0;
  double rho1 = 0.5;
};

/// f o Psi_tau with f in `base` (smooth, k >= 2) and
/// Psi_tau(x) = x + sum_i tau_i a_i sin(i x), a_i = warp_strength / (i s_warp), tau in [0,1]^s_warp.
struct WarpedSpec {
  std::shared_ptr<const ClassSpec> base;
  int s_warp = 1;
  double warp_strength = 0.5;
};

/// f + sum_i beta_i g_i with f in `base`, |beta_i| <= B.
struct AdditiveSpanSpec {
  std::shared_ptr<const ClassSpec> base;
  std::vector<Signal> g;
  double B = 1.0;
  std::string g_label = "hat";
};

struct ClassSpec {
  std::variant<SmoothSpec, PiecewiseCkSpec, PiecewiseAnalyticSpec, WarpedSpec, AdditiveSpanSpec> v;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&v);
  }
};

/// Checks all parameter bounds; throws UsageError naming the violated condition.
void validate(const ClassSpec& spec, BasisSpec basis);

/// Compact identifier without spaces or commas, e.g. `piecewise_ck(k=0;s=1;K2=1;rho1=0.5;A=1)`.
std::string canonical(const ClassSpec& spec);

/// Inverse of canonical(); omitted parameters take their defaults, unknown ones
/// are rejected. The basis is needed for the fixed functions of additive_span.
ClassSpec parse_class_spec(const std::string& text, BasisSpec basis);

/// `r` triangular bumps of half-width pi / r centered at -pi + (i + 1/2) 2 pi / r.
std::vector<Signal> hat_functions(int r, BasisSpec basis);

/// Warp displacement amplitudes a_1..a_s.
std::vector<double> warp_amplitudes(const WarpedSpec& w);

/// Psi_tau(x).
double warp(std::span<const double> a, std::span<const double> tau, double x);

}  // namespace sament
