#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sament/class_spec.hpp"
#include "sament/hilbert.hpp"
#include "sament/jl.hpp"
#include "sament/net.hpp"
#include "sament/rng.hpp"
#include "sament/tail_model.hpp"

namespace sament {

struct PrepareOptions {
  double jl_constant = 20.0;
  NetOptions net;
  /// Coefficient rows evaluated per scan block.
  std::size_t row_block = 1 << 15;
  /// Refuse to hold more than this many projected atom coordinates.
  double max_projected_values = 3e8;
};

/// Everything that does not depend on the measurement operator: the net at
/// eps1 = eps / 6, the truncation dimension d and the Gram matrices of the
/// truncated atoms.
class NetGeometry {
 public:
  NetGeometry(const ClassSpec& spec, double eps, const TailDecayModel& tail, BasisSpec basis,
              const PrepareOptions& opt = {});

  double eps() const { return eps_; }
  double eps1() const { return eps1_; }
  std::size_t d() const { return d_; }
  const TailDecayModel& tail() const { return tail_; }
  const EpsilonNet& net() const { return *net_; }
  std::uint64_t net_size() const { return M_; }
  /// ln(M + 1), the log of the JL point count.
  double ln_points() const;
  std::span<const double> gram() const { return gram_; }
  const PrepareOptions& options() const { return opt_; }

 private:
  double eps_, eps1_;
  TailDecayModel tail_;
  std::size_t d_;
  std::unique_ptr<EpsilonNet> net_;
  std::uint64_t M_;
  std::vector<double> gram_;  // configs x atoms x atoms, inner products of the first d coordinates
  PrepareOptions opt_;
};

class PreparedSampler {
 public:
  PreparedSampler(std::shared_ptr<const NetGeometry> geometry, double p, std::uint64_t operator_seed);

  const NetGeometry& geometry() const { return *geo_; }
  std::shared_ptr<const NetGeometry> geometry_ptr() const { return geo_; }
  double eps() const { return geo_->eps(); }
  double eps1() const { return geo_->eps1(); }
  double p() const { return p_; }
  std::size_t d() const { return geo_->d(); }
  std::size_t n() const { return op_.n(); }
  std::size_t n_required() const { return n_required_; }
  bool clamped() const { return clamped_; }
  std::uint64_t net_size() const { return geo_->net_size(); }
  const EpsilonNet& net() const { return geo_->net(); }
  const MeasurementOperator& op() const { return op_; }

  /// Projected atoms, configs x atoms x n: y_j = sum_a alpha_a * atom(c, a).
  std::span<const double> projected_atoms() const { return proj_; }
  std::span<const double> projected_gram() const { return gram_n_; }
  /// y_j for center index j, built from the projected atoms.
  std::vector<double> projected_center(std::uint64_t index) const;

 private:
  std::shared_ptr<const NetGeometry> geo_;
  double p_;
  std::size_t n_required_;
  bool clamped_;
  MeasurementOperator op_;
  std::vector<double> proj_;
  std::vector<double> gram_n_;
};

/// Net, truncation dimension and a measurement operator drawn from `operator_seed`.
PreparedSampler preprocess(const ClassSpec& spec, double eps, double p, const TailDecayModel& tail, BasisSpec basis,
                           std::uint64_t operator_seed, const PrepareOptions& opt = {});

/// apply(op, x) plus uniform noise in [-delta * scale, delta * scale] per coordinate.
std::vector<double> measure(const PreparedSampler& s, const Signal& x, double delta, Rng& rng);

struct ReconstructionOutcome {
  std::uint64_t index = 0;
  double projected_distance = 0.0;
  double acceptance_radius = 0.0;  ///< 2 eps1 plus the noise slack
  bool within_ball = false;
  std::optional<double> ambient_error;
  std::optional<bool> guarantee_met;
};

/// Distortion of the pairs (x~, x~_j) over all centers j, recorded while decoding
/// with the ground truth at hand.
struct StarDiagnostics {
  DistortionReport distortion;
  std::uint64_t nearest_index = 0;  ///< center nearest to x~ in the first d coordinates
  double nearest_distance = 0.0;    ///< |x~ - x~_nearest|
  double chosen_ratio = 1.0;        ///< exact ratio on (x~, x~_chosen)
  double nearest_ratio = 1.0;       ///< exact ratio on (x~, x~_nearest)
};

/// Nearest projected center; ties go to the lower index.
ReconstructionOutcome reconstruct(const PreparedSampler& s, std::span<const double> y, double delta = 0.0);

/// Same decode, plus ambient error against `truth` and the star-pair distortion scan.
ReconstructionOutcome reconstruct(const PreparedSampler& s, std::span<const double> y, double delta,
                                  const Signal& truth, StarDiagnostics& star);

struct GuaranteeReport {
  double tail_truth = 0.0;   ///< |x - x~|, budget eps1
  double middle = 0.0;       ///< |x~ - x~_j|, budget 4 eps1
  double tail_center = 0.0;  ///< |x~_j - x_j|, budget eps1
  double total = 0.0;        ///< |x - x_j|, budget eps
  bool tail_truth_ok = false;
  bool middle_ok = false;
  bool tail_center_ok = false;
  bool guarantee_met = false;
};

GuaranteeReport verify_guarantee(const PreparedSampler& s, const Signal& x, const ReconstructionOutcome& outcome);

}  // namespace sament
