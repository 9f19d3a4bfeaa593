#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "sament/class_spec.hpp"
#include "sament/hilbert.hpp"
#include "sament/rng.hpp"

namespace sament {

/// tail_norm(z, d) <= C d^-beta |z| with |z| <= R.
/// beta = +inf (and C = 0) means every fitted sample was bandlimited below the probed dims.
struct TailDecayModel {
  double C = 0.0;
  double beta = std::numeric_limits<double>::infinity();
  double R = 0.0;
  /// Smallest C that fits the samples; C itself carries the safety factor.
  double C_fit = 0.0;
  double r_squared = 1.0;

  bool degenerate() const;
  double bound(std::size_t d) const;
};

struct TailFitOptions {
  int n_samples = 100;
  std::vector<std::size_t> dims;  ///< empty: dyadic 8, 16, ... < ambient_dim
  double c_safety = 1.1;
  double r_safety = 1.1;
};

std::vector<std::size_t> default_tail_dims(std::size_t ambient_dim);

TailDecayModel fit_tail_model(std::span<const Signal> samples, std::span<const std::size_t> dims,
                              double c_safety = 1.1, double r_safety = 1.1);
TailDecayModel fit_tail_model(const ClassSpec& spec, BasisSpec basis, const TailFitOptions& opt, Rng& rng);

struct TailCheck {
  std::size_t points = 0;
  std::size_t violations = 0;
  std::size_t norm_violations = 0;
  double worst_ratio = 0.0;  ///< max of tail / (C d^-beta |z|)
};

TailCheck check_tail_model(const TailDecayModel& model, std::span<const Signal> samples,
                           std::span<const std::size_t> dims);

/// d = max(1, ceil((R C / eps1)^(1 / beta))); AmbientTooSmallError beyond ambient_dim.
std::size_t truncation_dimension(const TailDecayModel& model, double eps1, std::size_t ambient_dim);

}  // namespace sament
