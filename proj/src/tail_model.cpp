#include "sament/tail_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sament/errors.hpp"
#include "sament/members.hpp"

namespace sament {

bool TailDecayModel::degenerate() const { return std::isinf(beta); }

double TailDecayModel::bound(std::size_t d) const {
  if (degenerate()) return 0.0;
  return C * std::pow(static_cast<double>(d), -beta);
}

std::vector<std::size_t> default_tail_dims(std::size_t ambient_dim) {
  std::vector<std::size_t> dims;
  for (std::size_t d = 8; d < ambient_dim; d *= 2) dims.push_back(d);
  if (dims.empty()) dims.push_back(1);
  return dims;
}

TailDecayModel fit_tail_model(std::span<const Signal> samples, std::span<const std::size_t> dims, double c_safety,
                              double r_safety) {
  SAMENT_REQUIRE(samples.size() >= 10, "tail fit needs at least 10 samples");
  SAMENT_REQUIRE(!dims.empty(), "tail fit needs at least one dimension");
  SAMENT_REQUIRE(c_safety >= 1.0 && r_safety >= 1.0, "safety factors must be >= 1");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    SAMENT_REQUIRE(dims[i] >= 1 && dims[i] <= samples[0].size(), "tail dimension out of range");
    SAMENT_REQUIRE(i == 0 || dims[i] > dims[i - 1], "tail dimensions must increase");
  }

  TailDecayModel m;
  std::vector<double> xs, ys;
  std::vector<std::pair<double, double>> ratios;  // (d, tail / norm)
  for (const Signal& z : samples) {
    const double nz = norm(z);
    m.R = std::max(m.R, nz);
    if (nz == 0.0) continue;
    for (std::size_t d : dims) {
      const double r = tail_norm(z, d) / nz;
      ratios.emplace_back(static_cast<double>(d), r);
      if (r > 0.0) {
        xs.push_back(std::log(static_cast<double>(d)));
        ys.push_back(std::log(r));
      }
    }
  }
  if (m.R == 0.0) throw DegenerateInputError("all tail-fit samples are zero");
  m.R *= r_safety;
  if (xs.empty()) {
    m.C = m.C_fit = 0.0;
    m.beta = std::numeric_limits<double>::infinity();
    return m;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw DegenerateInputError("tail fit needs at least two distinct dimensions with nonzero tails");
  m.beta = -sxy / sxx;
  if (!(m.beta > 0.0)) throw DegenerateInputError("tails do not decay (fitted beta = " + std::to_string(m.beta) + ")");
  m.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  for (const auto& [d, r] : ratios) m.C_fit = std::max(m.C_fit, r * std::pow(d, m.beta));
  m.C = m.C_fit * c_safety;
  return m;
}

TailDecayModel fit_tail_model(const ClassSpec& spec, BasisSpec basis, const TailFitOptions& opt, Rng& rng) {
  SAMENT_REQUIRE(opt.n_samples >= 10, "tail fit needs at least 10 samples");
  std::vector<Signal> samples;
  samples.reserve(static_cast<std::size_t>(opt.n_samples));
  for (int i = 0; i < opt.n_samples; ++i) samples.push_back(sample_signal(spec, basis, rng));
  const auto dims = opt.dims.empty() ? default_tail_dims(basis.ambient_dim) : opt.dims;
  return fit_tail_model(samples, dims, opt.c_safety, opt.r_safety);
}

TailCheck check_tail_model(const TailDecayModel& model, std::span<const Signal> samples,
                           std::span<const std::size_t> dims) {
  TailCheck c;
  for (const Signal& z : samples) {
    const double nz = norm(z);
    if (nz > model.R) ++c.norm_violations;
    for (std::size_t d : dims) {
      ++c.points;
      const double t = tail_norm(z, d);
      const double b = model.bound(d) * nz;
      if (t > b) ++c.violations;
      if (b > 0.0) c.worst_ratio = std::max(c.worst_ratio, t / b);
      else if (t > 0.0) c.worst_ratio = std::numeric_limits<double>::infinity();
    }
  }
  return c;
}

std::size_t truncation_dimension(const TailDecayModel& model, double eps1, std::size_t ambient_dim) {
  SAMENT_REQUIRE(eps1 > 0.0, "eps1 must be positive");
  if (model.degenerate() || model.C == 0.0) return 1;
  const double x = std::pow(model.R * model.C / eps1, 1.0 / model.beta);
  if (x <= 1.0) return 1;
  const double d = std::ceil(x * (1.0 - 1e-14));
  if (d > static_cast<double>(ambient_dim)) throw AmbientTooSmallError(static_cast<std::size_t>(std::min(d, 1e18)), ambient_dim);
  return static_cast<std::size_t>(d);
}

}  // namespace sament
