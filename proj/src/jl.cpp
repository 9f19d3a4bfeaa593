#include "sament/jl.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "sament/errors.hpp"
#include "sament/kernels.hpp"
#include "sament/rng.hpp"
#include "sament/signal_io.hpp"

namespace sament {

namespace {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// One Cholesky QR pass in place; false when the Gram matrix is not numerically
// positive definite.
bool cholesky_qr(Mat& q) {
  Mat g = Mat::Zero(q.cols(), q.cols());
  g.selfadjointView<Eigen::Lower>().rankUpdate(q.transpose());
  Eigen::LLT<Mat> llt(g.selfadjointView<Eigen::Lower>());
  if (llt.info() != Eigen::Success) return false;
  const Mat r = llt.matrixU();
  const double dmin = r.diagonal().minCoeff(), dmax = r.diagonal().maxCoeff();
  if (!(dmin > 1e-8 * dmax)) return false;
  llt.matrixU().solveInPlace<Eigen::OnTheRight>(q);
  return true;
}

}  // namespace

MeasurementOperator::MeasurementOperator(std::size_t d, std::size_t n, std::uint64_t seed,
                                         std::vector<double> frame)
    : d_(d), n_(n), seed_(seed), frame_(std::move(frame)) {
  SAMENT_REQUIRE(n >= 1 && n <= d, "measurement count must satisfy 1 <= n <= d");
  SAMENT_REQUIRE(frame_.size() == n * d, "frame has wrong size");
  scale_ = std::sqrt(static_cast<double>(d) / static_cast<double>(n));
}

double MeasurementOperator::orthonormality_residual() const {
  const Eigen::Map<const RowMat> e(frame_.data(), static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(d_));
  const Mat g = e * e.transpose();
  return (g - Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

std::size_t required_measurements_log(double p, double ln_m, double jl_constant) {
  SAMENT_REQUIRE(p > 0.0 && p < 1.0, "probability p must lie in (0, 1)");
  SAMENT_REQUIRE(ln_m >= std::log(2.0) * (1.0 - 1e-15), "point count m must be at least 2");
  SAMENT_REQUIRE(jl_constant > 0.0, "jl_constant must be positive");
  const double n = std::ceil(jl_constant / (1.0 - p) * ln_m);
  SAMENT_REQUIRE(n >= 1.0, "measurement count must be at least 1");
  return static_cast<std::size_t>(n);
}

std::size_t required_measurements(double p, std::uint64_t m, double jl_constant) {
  SAMENT_REQUIRE(m >= 2, "point count m must be at least 2");
  return required_measurements_log(p, std::log(static_cast<double>(m)), jl_constant);
}

MeasurementOperator random_subspace(std::size_t d, std::size_t n, std::uint64_t seed) {
  SAMENT_REQUIRE(n >= 1 && n <= d, "random_subspace needs 1 <= n <= d");
  for (int attempt = 0; attempt <= 3; ++attempt) {
    Rng rng(stream_seed(seed, "frame", static_cast<std::uint64_t>(attempt)));
    std::normal_distribution<double> normal;
    Mat q(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n));
    for (Eigen::Index j = 0; j < q.cols(); ++j)
      for (Eigen::Index i = 0; i < q.rows(); ++i) q(i, j) = normal(rng);
    if (!cholesky_qr(q) || !cholesky_qr(q)) continue;
    std::vector<double> frame(n * d);
    Eigen::Map<RowMat>(frame.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d)) = q.transpose();
    return MeasurementOperator(d, n, seed, std::move(frame));
  }
  throw InternalError("random_subspace: orthonormalization failed after 3 retries");
}

std::vector<double> apply(const MeasurementOperator& op, std::span<const double> x) {
  SAMENT_REQUIRE(x.size() >= op.d(), "vector shorter than the operator dimension");
  return apply_rows(op, x.first(op.d()), 1, op.d());
}

std::vector<double> apply(const MeasurementOperator& op, const Signal& x) { return apply(op, x.coeffs()); }

std::vector<double> apply_rows(const MeasurementOperator& op, std::span<const double> xs, std::size_t count,
                               std::size_t stride) {
  SAMENT_REQUIRE(stride >= op.d(), "row stride shorter than the operator dimension");
  SAMENT_REQUIRE(xs.size() >= (count == 0 ? 0 : (count - 1) * stride + op.d()), "row buffer too small");
  std::vector<double> out(count * op.n());
  if (count == 0) return out;
  const auto n = static_cast<Eigen::Index>(op.n()), d = static_cast<Eigen::Index>(op.d());
  const Eigen::Map<const RowMat> e(op.frame().data(), n, d);
  const Eigen::Map<const RowMat, 0, Eigen::OuterStride<>> x(xs.data(), static_cast<Eigen::Index>(count), d,
                                                            Eigen::OuterStride<>(static_cast<Eigen::Index>(stride)));
  Eigen::Map<RowMat> y(out.data(), static_cast<Eigen::Index>(count), n);
  y.noalias() = op.scale() * (x * e.transpose());
  return out;
}

DistortionReport distortion_ok(const MeasurementOperator& op, std::span<const double> points, std::size_t count) {
  SAMENT_REQUIRE(count >= 1, "distortion check needs at least one point");
  SAMENT_REQUIRE(points.size() == count * op.d(), "points must be count x d");
  const auto proj = apply_rows(op, points, count, op.d());
  const auto r = kernels::pairwise_distortion_parallel(points, proj, count, op.d(), op.n(), 0.0);
  DistortionReport rep;
  rep.pairs = r.pairs;
  if (r.pairs > 0) {
    rep.min_ratio = r.min_ratio;
    rep.max_ratio = r.max_ratio;
  }
  rep.ok = rep.min_ratio >= kDistortionLow && rep.max_ratio <= kDistortionHigh;
  return rep;
}

void write_operator(std::ostream& os, const MeasurementOperator& op) {
  os << "d=" << op.d() << " n=" << op.n() << " seed=" << op.seed() << '\n';
  const auto basis = BasisSpec::trig(std::max<std::size_t>(op.d(), 2));
  for (std::size_t i = 0; i < op.n(); ++i) {
    std::vector<double> row(op.row(i).begin(), op.row(i).end());
    row.resize(basis.ambient_dim, 0.0);
    write_signal(os, Signal(basis, std::move(row)));
  }
}

MeasurementOperator read_operator(std::istream& is) {
  std::string line;
  SAMENT_REQUIRE(static_cast<bool>(std::getline(is, line)), "operator file is empty");
  std::istringstream hs(line);
  std::string td, tn, ts, extra;
  hs >> td >> tn >> ts;
  SAMENT_REQUIRE(td.rfind("d=", 0) == 0 && tn.rfind("n=", 0) == 0 && ts.rfind("seed=", 0) == 0 && !(hs >> extra),
                 "malformed operator header: " + line);
  std::size_t d = 0, n = 0;
  std::uint64_t seed = 0;
  try {
    std::size_t pos = 0;
    d = std::stoull(td.substr(2), &pos);
    SAMENT_REQUIRE(pos == td.size() - 2, "bad d");
    n = std::stoull(tn.substr(2), &pos);
    SAMENT_REQUIRE(pos == tn.size() - 2, "bad n");
    seed = std::stoull(ts.substr(5), &pos);
    SAMENT_REQUIRE(pos == ts.size() - 5, "bad seed");
  } catch (const std::logic_error&) {
    throw UsageError("malformed operator header: " + line);
  }
  SAMENT_REQUIRE(n >= 1 && n <= d, "operator header needs 1 <= n <= d");
  std::vector<double> frame;
  frame.reserve(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const Signal r = read_signal(is);
    SAMENT_REQUIRE(r.size() == std::max<std::size_t>(d, 2), "operator row has wrong dimension");
    frame.insert(frame.end(), r.coeffs().begin(), r.coeffs().begin() + static_cast<std::ptrdiff_t>(d));
  }
  return MeasurementOperator(d, n, seed, std::move(frame));
}

}  // namespace sament
