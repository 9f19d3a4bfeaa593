#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sament/class_spec.hpp"
#include "sament/coefficient_set.hpp"
#include "sament/hilbert.hpp"
#include "sament/members.hpp"

namespace sament {

struct NetOptions {
  /// Share of eps1 spent on jump placement (or the truncated tail for smooth classes).
  double budget_split = 0.5;
  /// build_net refuses nets with more centers than this.
  double max_net_size = 1e6;
  /// Budget resolution Q / J of the smooth-class lattice.
  int lattice_resolution = 16;
};

/// A center named by its configuration and coefficient vector.
struct CenterPoint {
  std::uint64_t config = 0;
  std::vector<double> coeffs;
};

/// Structured eps1-cover. Every center is sum_a coeffs[a] * atom_a(config) where
/// `config` ranges over num_configs() discrete configurations (jump positions,
/// warp parameters) and `coeffs` over a CoefficientSet. Centers are produced on
/// demand; index = config * |coefficients| + coefficient index.
class EpsilonNet {
 public:
  virtual ~EpsilonNet() = default;

  double radius() const { return eps1_; }
  BasisSpec basis() const { return basis_; }
  const ClassSpec& spec() const { return spec_; }
  const std::string& spec_string() const { return spec_string_; }

  /// Throws UsageError if the configuration count does not fit 64 bits.
  std::uint64_t num_configs() const;
  const CoefficientSet& coefficients() const { return *coeffs_; }
  std::shared_ptr<const CoefficientSet> coefficients_ptr() const { return coeffs_; }
  std::size_t num_atoms() const { return coeffs_->dim(); }

  /// log2 of the number of centers (sum over construction_log).
  double log2_size() const;
  /// Exact center count when below 2^63.
  std::optional<std::uint64_t> size() const;
  const std::vector<NetFactor>& construction_log() const { return log_; }

  /// Atoms of `config`, first `len` coordinates, num_atoms x len row-major.
  virtual void atoms(std::uint64_t config, std::size_t len, std::span<double> out) const = 0;

  /// out[((c - begin) * num_atoms + a) * r + i] = <row_i, atom_a(c)>, rows r x len row-major.
  virtual void project_atoms(std::span<const double> rows, std::size_t r, std::size_t len, std::uint64_t begin,
                             std::uint64_t end, std::span<double> out) const;

  /// Designated center of a class member.
  virtual CenterPoint encode(const Member& m) const = 0;
  /// Structured description of a center (for membership checks).
  virtual Member center_member(const CenterPoint& p) const = 0;
  /// How far centers may stray outside the class.
  virtual MembershipTolerance center_tolerance() const = 0;

  std::uint64_t index_of(const CenterPoint& p) const;
  CenterPoint point(std::uint64_t index) const;
  Signal center(const CenterPoint& p) const;
  Signal center(std::uint64_t index) const { return center(point(index)); }

 protected:
  EpsilonNet(const ClassSpec& spec, BasisSpec basis, double eps1);
  /// Called by subclasses once configurations and coefficients are known.
  void finish(std::optional<std::uint64_t> configs, std::vector<NetFactor> config_factors,
              std::shared_ptr<const CoefficientSet> coeffs);

 private:
  ClassSpec spec_;
  BasisSpec basis_;
  double eps1_;
  std::string spec_string_;
  std::optional<std::uint64_t> configs_;
  std::shared_ptr<const CoefficientSet> coeffs_;
  std::vector<NetFactor> log_;
};

/// Construct the cover without a size check (counting only costs memory for the lattice tables).
std::unique_ptr<EpsilonNet> plan_net(const ClassSpec& spec, double eps1, BasisSpec basis,
                                     const NetOptions& opt = {});

/// plan_net plus the max_net_size guard (BudgetExceededError).
std::unique_ptr<EpsilonNet> build_net(const ClassSpec& spec, double eps1, BasisSpec basis,
                                      const NetOptions& opt = {});

/// Position grid shared by the jump classes: P points at -pi + (i + 1/2) 2 pi / P.
double grid_position(std::uint64_t i, std::uint64_t P);

}  // namespace sament
