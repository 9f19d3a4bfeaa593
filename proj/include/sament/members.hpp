#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sament/class_spec.hpp"
#include "sament/hilbert.hpp"
#include "sament/piecewise.hpp"
#include "sament/rng.hpp"

namespace sament {

/// A class element together with the parameters that generated it.
/// Which fields are populated depends on the class:
///   piecewise_ck        breakpoints, poly_pieces
///   piecewise_analytic  breakpoints, trig_pieces (global series restricted to each arc)
///   warped              params = tau, base
///   additive_span       params = beta, base
///   smooth              signal only
struct Member {
  Signal signal;
  std::vector<double> breakpoints;
  std::vector<PolynomialPiece> poly_pieces;
  std::vector<std::vector<double>> trig_pieces;
  std::vector<double> params;
  std::shared_ptr<const Member> base;
};

Member sample_member(const ClassSpec& spec, BasisSpec basis, Rng& rng);
Signal sample_signal(const ClassSpec& spec, BasisSpec basis, Rng& rng);

/// Slack added to class bounds when checking approximate members (net centers).
struct MembershipTolerance {
  double position = 0.0;  ///< subtracted from required gaps
  double value = 0.0;     ///< added to amplitude / derivative / ellipsoid bounds
  double param = 0.0;     ///< added to parameter boxes (tau, beta)
};

struct MembershipResult {
  bool ok = true;
  std::string reason;
  explicit operator bool() const { return ok; }
};

/// Verifies the structural constraints of the class and that `signal` is the
/// analysis of the stored parameters.
MembershipResult check_member(const ClassSpec& spec, const Member& m, const MembershipTolerance& tol = {});

/// Breakpoints drawn uniformly among configurations with gaps >= rho1 and
/// seam distance >= rho1 / 2.
std::vector<double> sample_breakpoints(int count, double rho1, Rng& rng);

/// Arcs [lo, hi] cut by sorted breakpoints in [-pi, pi].
std::vector<std::pair<double, double>> arcs_of(std::span<const double> breakpoints);

/// Coefficients of f o Psi_tau (sampling plus FFT analysis).
Signal warp_signal(const Signal& f, std::span<const double> a, std::span<const double> tau);

/// Signal of a piecewise member given trig pieces.
Signal analyze_trig_pieces(std::span<const double> breakpoints,
                           const std::vector<std::vector<double>>& pieces, BasisSpec basis);

/// Number of leading coefficients of an analytic piece worth storing.
std::size_t analytic_support(const PiecewiseAnalyticSpec& s, std::size_t ambient_dim);

/// sum_j (j^k c_j)^2, j the 1-based basis index.
double sobolev_energy(std::span<const double> c, int k);

}  // namespace sament
