#include "sament/reconstructor.hpp"

#include <algorithm>
#include <cmath>

#include "sament/errors.hpp"
#include "sament/kernels.hpp"

namespace sament {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double prefix_distance(const Signal& x, const Signal& y, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}

double vec_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// <target, projected atom> for every (config, atom).
std::vector<double> lin_terms(const PreparedSampler& s, std::span<const double> target) {
  const std::size_t n = s.n();
  const auto proj = s.projected_atoms();
  std::vector<double> lin(proj.size() / n);
  const long long K = static_cast<long long>(lin.size());
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < K; ++k) lin[static_cast<std::size_t>(k)] = dot(proj.data() + k * n, target.data(), n);
  return lin;
}

kernels::ScanResult scan_net(const PreparedSampler& s, std::span<const double> y, const Signal* truth) {
  const EpsilonNet& net = s.net();
  const std::size_t A = net.num_atoms();
  const std::uint64_t C = net.num_configs();
  const auto R = net.coefficients().size();
  SAMENT_ASSERT(R.has_value(), "coefficient set too large to scan");

  const auto lin_p = lin_terms(s, y);
  std::vector<double> ym, lin_m, lin_a;
  double const_m = 0.0, const_a = 0.0;
  if (truth) {
    ym = apply(s.op(), *truth);
    lin_m = lin_terms(s, ym);
    const_m = dot(ym.data(), ym.data(), ym.size());
    const std::size_t d = s.d();
    const std::span<const double> xd = truth->coeffs().first(d);
    lin_a.resize(C * A);
    net.project_atoms(xd, 1, d, 0, C, lin_a);
    const_a = dot(xd.data(), xd.data(), d);
  }

  kernels::ScanRequest req;
  req.configs = C;
  req.atoms = A;
  req.first_config = 0;
  req.set_size = *R;
  req.primary = {s.projected_gram(), lin_p, dot(y.data(), y.data(), y.size())};
  if (truth) {
    req.star = true;
    req.star_measured = {s.projected_gram(), lin_m, const_m};
    req.star_ambient = {s.geometry().gram(), lin_a, const_a};
    // below this the quadratic forms cannot resolve the pair; such centers
    // coincide with x~ for every purpose of the error chain
    req.skip_below = 1e-9 * (1.0 + const_a);
  }

  const std::size_t block = std::max<std::size_t>(1, s.geometry().options().row_block);
  std::vector<double> rows;
  kernels::ScanResult total;
  for (std::uint64_t r0 = 0; r0 < *R; r0 += block) {
    const std::size_t cnt = static_cast<std::size_t>(std::min<std::uint64_t>(block, *R - r0));
    rows.resize(cnt * A);
    net.coefficients().rows(r0, cnt, rows);
    req.first_row = r0;
    req.row_count = cnt;
    req.rows = rows;
    total.merge(kernels::scan_parallel(req));
  }
  SAMENT_ASSERT(total.best_index < s.net_size(), "scan found no center");
  return total;
}

ReconstructionOutcome finish_outcome(const PreparedSampler& s, std::span<const double> y, double delta,
                                     std::uint64_t index, const Signal& center) {
  ReconstructionOutcome o;
  o.index = index;
  const auto yj = apply(s.op(), center);
  o.projected_distance = vec_distance(y, yj);
  o.acceptance_radius = 2.0 * s.eps1() + std::sqrt(static_cast<double>(s.n())) * delta * s.op().scale();
  o.within_ball = o.projected_distance <= o.acceptance_radius;
  return o;
}

}  // namespace

NetGeometry::NetGeometry(const ClassSpec& spec, double eps, const TailDecayModel& tail, BasisSpec basis,
                         const PrepareOptions& opt)
    : eps_(eps), eps1_(eps / 6.0), tail_(tail), opt_(opt) {
  SAMENT_REQUIRE(eps > 0.0 && std::isfinite(eps), "eps must be positive");
  d_ = truncation_dimension(tail, eps1_, basis.ambient_dim);
  net_ = build_net(spec, eps1_, basis, opt.net);
  const auto M = net_->size();
  SAMENT_REQUIRE(M.has_value(), "net too large to index");
  M_ = *M;

  const std::uint64_t C = net_->num_configs();
  const std::size_t A = net_->num_atoms();
  gram_.assign(C * A * A, 0.0);
  const long long CC = static_cast<long long>(C);
#pragma omp parallel
  {
    std::vector<double> buf(A * d_);
#pragma omp for schedule(dynamic, 16)
    for (long long c = 0; c < CC; ++c) {
      net_->atoms(static_cast<std::uint64_t>(c), d_, buf);
      double* g = gram_.data() + static_cast<std::size_t>(c) * A * A;
      for (std::size_t a = 0; a < A; ++a)
        for (std::size_t b = 0; b <= a; ++b) g[a * A + b] = g[b * A + a] = dot(&buf[a * d_], &buf[b * d_], d_);
    }
  }
}

double NetGeometry::ln_points() const { return std::log(static_cast<double>(M_) + 1.0); }

PreparedSampler::PreparedSampler(std::shared_ptr<const NetGeometry> geometry, double p, std::uint64_t operator_seed)
    : geo_(std::move(geometry)),
      p_(p),
      n_required_(required_measurements_log(p, geo_->ln_points(), geo_->options().jl_constant)),
      clamped_(n_required_ >= geo_->d()),
      op_(random_subspace(geo_->d(), std::min(n_required_, geo_->d()), operator_seed)) {
  const EpsilonNet& net = geo_->net();
  const std::uint64_t C = net.num_configs();
  const std::size_t A = net.num_atoms(), n = op_.n(), d = op_.d();
  SAMENT_REQUIRE(static_cast<double>(C) * static_cast<double>(A) * static_cast<double>(n) <=
                     geo_->options().max_projected_values,
                 "projected net does not fit the memory budget");
  proj_.resize(C * A * n);
  net.project_atoms(op_.frame(), n, d, 0, C, proj_);
  const double sc = op_.scale();
  for (double& v : proj_) v *= sc;
  gram_n_.assign(C * A * A, 0.0);
  const long long CC = static_cast<long long>(C);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < CC; ++c) {
    const double* base = proj_.data() + static_cast<std::size_t>(c) * A * n;
    double* g = gram_n_.data() + static_cast<std::size_t>(c) * A * A;
    for (std::size_t a = 0; a < A; ++a)
      for (std::size_t b = 0; b <= a; ++b) g[a * A + b] = g[b * A + a] = dot(base + a * n, base + b * n, n);
  }
}

std::vector<double> PreparedSampler::projected_center(std::uint64_t index) const {
  const CenterPoint pt = net().point(index);
  const std::size_t A = net().num_atoms(), n = op_.n();
  std::vector<double> y(n, 0.0);
  const double* base = proj_.data() + pt.config * A * n;
  for (std::size_t a = 0; a < A; ++a)
    for (std::size_t i = 0; i < n; ++i) y[i] += pt.coeffs[a] * base[a * n + i];
  return y;
}

PreparedSampler preprocess(const ClassSpec& spec, double eps, double p, const TailDecayModel& tail, BasisSpec basis,
                           std::uint64_t operator_seed, const PrepareOptions& opt) {
  SAMENT_REQUIRE(p > 0.0 && p < 1.0, "probability p must lie in (0, 1)");
  auto geo = std::make_shared<const NetGeometry>(spec, eps, tail, basis, opt);
  return PreparedSampler(std::move(geo), p, operator_seed);
}

std::vector<double> measure(const PreparedSampler& s, const Signal& x, double delta, Rng& rng) {
  SAMENT_REQUIRE(delta >= 0.0 && std::isfinite(delta), "delta must be non-negative");
  SAMENT_REQUIRE(x.basis() == s.net().basis(), "signal basis differs from the sampler basis");
  auto y = apply(s.op(), x);
  if (delta > 0.0) {
    const double a = delta * s.op().scale();
    for (double& v : y) v += uniform(rng, -a, a);
  }
  return y;
}

ReconstructionOutcome reconstruct(const PreparedSampler& s, std::span<const double> y, double delta) {
  SAMENT_REQUIRE(y.size() == s.n(), "measurement vector has wrong length");
  const auto res = scan_net(s, y, nullptr);
  return finish_outcome(s, y, delta, res.best_index, s.net().center(res.best_index));
}

ReconstructionOutcome reconstruct(const PreparedSampler& s, std::span<const double> y, double delta,
                                  const Signal& truth, StarDiagnostics& star) {
  SAMENT_REQUIRE(y.size() == s.n(), "measurement vector has wrong length");
  SAMENT_REQUIRE(truth.basis() == s.net().basis(), "signal basis differs from the sampler basis");
  const auto res = scan_net(s, y, &truth);
  const Signal center = s.net().center(res.best_index);
  auto o = finish_outcome(s, y, delta, res.best_index, center);
  o.ambient_error = distance(truth, center);
  o.guarantee_met = *o.ambient_error <= s.eps();

  const std::size_t d = s.d();
  const auto yx = apply(s.op(), truth);
  auto exact_ratio = [&](const Signal& c) {
    const double amb = prefix_distance(truth, c, d);
    if (amb == 0.0) return 1.0;
    return vec_distance(yx, apply(s.op(), c)) / amb;
  };
  const Signal nearest = s.net().center(res.ambient_index);
  star.nearest_index = res.ambient_index;
  star.nearest_distance = prefix_distance(truth, nearest, d);
  star.chosen_ratio = exact_ratio(center);
  star.nearest_ratio = exact_ratio(nearest);
  auto& dr = star.distortion;
  dr.pairs = res.pairs;
  dr.min_ratio = std::min({res.pairs ? res.min_ratio : 1.0, star.chosen_ratio, star.nearest_ratio});
  dr.max_ratio = std::max({res.pairs ? res.max_ratio : 1.0, star.chosen_ratio, star.nearest_ratio});
  dr.ok = dr.min_ratio >= kDistortionLow && dr.max_ratio <= kDistortionHigh;
  return o;
}

GuaranteeReport verify_guarantee(const PreparedSampler& s, const Signal& x, const ReconstructionOutcome& outcome) {
  const Signal c = s.net().center(outcome.index);
  const std::size_t d = s.d();
  GuaranteeReport r;
  r.tail_truth = tail_norm(x, d);
  r.middle = prefix_distance(x, c, d);
  r.tail_center = tail_norm(c, d);
  r.total = distance(x, c);
  r.tail_truth_ok = r.tail_truth <= s.eps1();
  r.middle_ok = r.middle <= 4.0 * s.eps1();
  r.tail_center_ok = r.tail_center <= s.eps1();
  r.guarantee_met = r.total <= s.eps();
  return r;
}

}  // namespace sament
