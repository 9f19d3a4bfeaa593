#include "sament/net.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "sament/errors.hpp"
#include "sament/kernels.hpp"
#include "sament/piecewise.hpp"

namespace sament {

namespace {

constexpr double kPi = std::numbers::pi;

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void copy_prefix(const Signal& x, std::size_t len, double* out) {
  std::copy_n(x.coeffs().begin(), len, out);
}

/// s jump positions on a P-point grid; configurations are ordered s-tuples.
struct JumpGrid {
  int s = 0;
  std::uint64_t P = 1;

  std::optional<std::uint64_t> configs() const {
    std::optional<std::uint64_t> n = 1;
    for (int i = 0; i < s; ++i) n = checked_mul(n, P);
    return n;
  }

  std::vector<std::uint64_t> decode(std::uint64_t config) const {
    std::vector<std::uint64_t> idx(static_cast<std::size_t>(s));
    for (std::size_t i = idx.size(); i-- > 0;) {
      idx[i] = config % P;
      config /= P;
    }
    std::sort(idx.begin(), idx.end());
    return idx;
  }

  std::vector<double> positions(std::uint64_t config) const {
    std::vector<double> x;
    for (auto i : decode(config)) x.push_back(grid_position(i, P));
    return x;
  }

  std::uint64_t nearest(double b) const {
    const double cell = std::floor((b + kPi) / (2.0 * kPi / static_cast<double>(P)));
    if (!(cell > 0.0)) return 0;
    return std::min(static_cast<std::uint64_t>(cell), P - 1);
  }

  /// Designated configuration of sorted breakpoints (at most s of them).
  std::uint64_t encode(std::span<const double> b) const {
    SAMENT_REQUIRE(static_cast<int>(b.size()) <= s, "member has more jumps than the class allows");
    std::vector<std::uint64_t> idx;
    for (double x : b) idx.push_back(nearest(x));
    while (static_cast<int>(idx.size()) < s) idx.push_back(idx.empty() ? 0 : idx.back());
    std::sort(idx.begin(), idx.end());
    std::uint64_t c = 0;
    for (auto i : idx) c = c * P + i;
    return c;
  }

  std::vector<NetFactor> factors() const {
    std::vector<NetFactor> f;
    for (int i = 0; i < s; ++i)
      f.push_back({"position[" + std::to_string(i) + "]", std::log2(static_cast<double>(P)),
                   2.0 * kPi / static_cast<double>(P)});
    return f;
  }
};

/// Index of the member piece whose arc contains t.
std::size_t piece_at(std::span<const double> breakpoints, double t) {
  return static_cast<std::size_t>(std::upper_bound(breakpoints.begin(), breakpoints.end(), t) - breakpoints.begin());
}

/// Distinct breakpoints and the indices of non-degenerate arcs.
void collapse_arcs(const std::vector<double>& positions, std::vector<double>& breakpoints,
                   std::vector<std::size_t>& kept) {
  const auto arcs = arcs_of(positions);
  breakpoints.clear();
  kept.clear();
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (!(arcs[i].second > arcs[i].first)) continue;
    if (!kept.empty()) breakpoints.push_back(arcs[i].first);
    kept.push_back(i);
  }
}

std::uint64_t position_count(double h_pos) {
  const double P = std::ceil(2.0 * kPi / h_pos * (1.0 - 1e-12));
  SAMENT_REQUIRE(P < 4.0e9, "jump position grid too fine (eps1 too small)");
  return static_cast<std::uint64_t>(std::max(1.0, P));
}

// ---------------------------------------------------------------- smooth

class SmoothNet final : public EpsilonNet {
 public:
  SmoothNet(const ClassSpec& spec, double eps1, BasisSpec basis, const NetOptions& opt)
      : EpsilonNet(spec, basis, eps1), s_(*spec.as<SmoothSpec>()) {
    const double tail = eps1 * opt.budget_split;
    std::size_t J = 1;
    const double guess = std::ceil(std::pow(s_.K / tail, 1.0 / s_.k)) - 1.0;
    if (guess > 1.0) J = static_cast<std::size_t>(std::min(guess, 1e9));
    while (J > 1 && s_.K * std::pow(static_cast<double>(J), -s_.k) <= tail) --J;
    while (s_.K * std::pow(static_cast<double>(J + 1), -s_.k) > tail && J < basis.ambient_dim) ++J;
    J_ = std::min(J, basis.ambient_dim);
    h_ = 2.0 * eps1 * (1.0 - opt.budget_split) / std::sqrt(static_cast<double>(J_));
    std::vector<double> w(J_);
    for (std::size_t j = 0; j < J_; ++j) w[j] = std::pow(static_cast<double>(j + 1), s_.k);
    lattice_ = std::make_shared<EllipsoidLattice>(std::move(w), h_, s_.K, opt.lattice_resolution);
    finish(1, {}, lattice_);
  }

  void atoms(std::uint64_t, std::size_t len, std::span<double> out) const override {
    std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(J_ * len), 0.0);
    for (std::size_t j = 0; j < J_ && j < len; ++j) out[j * len + j] = 1.0;
  }

  void project_atoms(std::span<const double> rows, std::size_t r, std::size_t len, std::uint64_t begin,
                     std::uint64_t end, std::span<double> out) const override {
    for (std::uint64_t c = begin; c < end; ++c)
      for (std::size_t a = 0; a < J_; ++a)
        for (std::size_t i = 0; i < r; ++i)
          out[((c - begin) * J_ + a) * r + i] = a < len ? rows[i * len + a] : 0.0;
  }

  CenterPoint encode(const Member& m) const override {
    const auto c = m.signal.coeffs();
    return {0, lattice_->round(c.subspan(0, J_))};
  }

  Member center_member(const CenterPoint& p) const override {
    Member m;
    m.signal = center(p);
    return m;
  }

  MembershipTolerance center_tolerance() const override {
    return {0.0, s_.K * (lattice_->rho() - 1.0) * (1.0 + 1e-9), 0.0};
  }

 private:
  SmoothSpec s_;
  std::size_t J_ = 1;
  double h_ = 0.0;
  std::shared_ptr<EllipsoidLattice> lattice_;
};

// ---------------------------------------------------------------- piecewise C^k

class PiecewiseCkNet final : public EpsilonNet {
 public:
  PiecewiseCkNet(const ClassSpec& spec, double eps1, BasisSpec basis, const NetOptions& opt)
      : EpsilonNet(spec, basis, eps1), s_(*spec.as<PiecewiseCkSpec>()) {
    grid_.s = s_.s;
    if (s_.s > 0) {
      const double jump = eps1 * opt.budget_split;
      h_pos_ = jump * jump / (s_.s * (2.0 * s_.A) * (2.0 * s_.A));
      grid_.P = position_count(h_pos_);
      const double delta = kPi / static_cast<double>(grid_.P);
      const double ext = s_.k >= 1 ? s_.K2 * std::expm1(delta) : 0.0;
      SAMENT_REQUIRE((2.0 * s_.A + ext) * (2.0 * s_.A + ext) <= 2.0 * (2.0 * s_.A) * (2.0 * s_.A),
                     "piecewise_ck: K2 too large for this eps1 (jump extension bound fails)");
      ext_ = ext;
    }
    const double eps_q = eps1 * (1.0 - opt.budget_split);
    std::vector<GridAxis> axes;
    double fact = 1.0;
    for (int m = 0; m <= s_.k; ++m) {
      if (m > 0) fact *= m;
      const double v = std::pow(kPi, m) / (fact * std::sqrt(2.0 * m + 1.0));
      steps_.push_back(2.0 * eps_q / ((s_.k + 1) * std::sqrt(2.0 * kPi) * v));
    }
    for (int p = 0; p <= s_.s; ++p)
      for (int m = 0; m <= s_.k; ++m)
        axes.push_back(ProductGrid::axis_for_step("piece[" + std::to_string(p) + "].d" + std::to_string(m),
                                                  m == 0 ? s_.A : s_.K2, steps_[static_cast<std::size_t>(m)]));
    grid_coeffs_ = std::make_shared<ProductGrid>(std::move(axes));
    finish(grid_.configs(), grid_.factors(), grid_coeffs_);
  }

  void atoms(std::uint64_t config, std::size_t len, std::span<double> out) const override {
    const auto arcs = arcs_of(grid_.positions(config));
    const std::size_t K1 = static_cast<std::size_t>(s_.k + 1);
    for (std::size_t p = 0; p < arcs.size(); ++p) {
      const auto [lo, hi] = arcs[p];
      double fact = 1.0;
      for (std::size_t m = 0; m < K1; ++m) {
        if (m > 0) fact *= static_cast<double>(m);
        PolynomialPiece mono{0.5 * (lo + hi), std::vector<double>(m + 1, 0.0)};
        mono.coeffs[m] = 1.0 / fact;
        const Signal a = analyze_polynomial_on_interval(mono, lo, hi, basis());
        copy_prefix(a, len, out.data() + (p * K1 + m) * len);
      }
    }
  }

  void project_atoms(std::span<const double> rows, std::size_t r, std::size_t len, std::uint64_t begin,
                     std::uint64_t end, std::span<double> out) const override {
    if (s_.k != 0) {
      EpsilonNet::project_atoms(rows, r, len, begin, end, out);
      return;
    }
    // indicator atoms: differences of the step bank <row, 1_[-pi, x_p)>
    const std::size_t P = static_cast<std::size_t>(grid_.P);
    std::vector<double> bank(r * P);
    kernels::step_bank_fft(rows, r, len, P, bank);
    std::vector<double> full(r);
    for (std::size_t i = 0; i < r; ++i) full[i] = rows[i * len] * std::sqrt(2.0 * kPi);
    const std::size_t A = num_atoms();
    const long long n = static_cast<long long>(end - begin);
#pragma omp parallel for schedule(static)
    for (long long cc = 0; cc < n; ++cc) {
      const std::uint64_t c = begin + static_cast<std::uint64_t>(cc);
      const auto idx = grid_.decode(c);
      for (std::size_t p = 0; p < A; ++p) {
        double* o = out.data() + (static_cast<std::size_t>(cc) * A + p) * r;
        for (std::size_t i = 0; i < r; ++i) {
          const double hi = p < idx.size() ? bank[i * P + idx[p]] : full[i];
          const double lo = p == 0 ? 0.0 : bank[i * P + idx[p - 1]];
          o[i] = hi - lo;
        }
      }
    }
  }

  CenterPoint encode(const Member& m) const override {
    SAMENT_REQUIRE(m.poly_pieces.size() == m.breakpoints.size() + 1, "member lacks piecewise structure");
    const std::uint64_t config = grid_.encode(m.breakpoints);
    const auto arcs = arcs_of(grid_.positions(config));
    const std::size_t K1 = static_cast<std::size_t>(s_.k + 1);
    std::vector<double> target(arcs.size() * K1, 0.0);
    for (std::size_t p = 0; p < arcs.size(); ++p) {
      const auto [lo, hi] = arcs[p];
      if (!(hi > lo)) continue;
      const double mid = 0.5 * (lo + hi);
      const auto& piece = m.poly_pieces[piece_at(m.breakpoints, mid)];
      for (std::size_t d = 0; d < K1; ++d) target[p * K1 + d] = piece.derivative(static_cast<int>(d), mid);
    }
    return {config, grid_coeffs_->round(target)};
  }

  Member center_member(const CenterPoint& pt) const override {
    const auto positions = grid_.positions(pt.config);
    const auto arcs = arcs_of(positions);
    std::vector<std::size_t> kept;
    Member m;
    collapse_arcs(positions, m.breakpoints, kept);
    const std::size_t K1 = static_cast<std::size_t>(s_.k + 1);
    for (std::size_t p : kept) {
      PolynomialPiece piece{0.5 * (arcs[p].first + arcs[p].second), {}};
      double fact = 1.0;
      for (std::size_t d = 0; d < K1; ++d) {
        if (d > 0) fact *= static_cast<double>(d);
        piece.coeffs.push_back(pt.coeffs[p * K1 + d] / fact);
      }
      m.poly_pieces.push_back(std::move(piece));
    }
    m.signal = analyze_piecewise(PiecewiseDescription{m.breakpoints, m.poly_pieces, false}, basis());
    return m;
  }

  MembershipTolerance center_tolerance() const override {
    // coefficient rounding moves any derivative by at most sum_m (h_m/2) pi^m/m! <= e^pi max(h_m/2)
    double q = 0.0;
    for (double h : steps_) q = std::max(q, 0.5 * h);
    return {h_pos_ * (1.0 + 1e-9), q * std::exp(kPi) + ext_ + 1e-12, 0.0};
  }

 private:
  PiecewiseCkSpec s_;
  JumpGrid grid_;
  double h_pos_ = 0.0;
  double ext_ = 0.0;
  std::vector<double> steps_;
  std::shared_ptr<ProductGrid> grid_coeffs_;
};

// ---------------------------------------------------------------- piecewise analytic

class PiecewiseAnalyticNet final : public EpsilonNet {
 public:
  PiecewiseAnalyticNet(const ClassSpec& spec, double eps1, BasisSpec basis, const NetOptions& opt)
      : EpsilonNet(spec, basis, eps1), s_(*spec.as<PiecewiseAnalyticSpec>()) {
    grid_.s = s_.kappa;
    if (s_.kappa > 0) {
      double S = 0.0;
      for (std::size_t i = 0; i < basis.ambient_dim; ++i)
        S += s_.K * std::exp(-s_.eta * static_cast<double>(i + 1)) *
             (i == 0 ? 1.0 / std::sqrt(2.0 * kPi) : 1.0 / std::sqrt(kPi));
      const double jump = eps1 * opt.budget_split;
      h_pos_ = jump * jump / (s_.kappa * (2.0 * S) * (2.0 * S));
      grid_.P = position_count(h_pos_);
    }
    const double eps_q = eps1 * (1.0 - opt.budget_split);
    const double pieces = s_.kappa + 1.0;
    const double tau = eps_q / std::sqrt(2.0 * pieces);
    const double e = 1.0 - std::exp(-s_.eta);
    const double J = std::ceil(std::log(s_.K / (e * tau)) / s_.eta);
    J_ = static_cast<std::size_t>(std::clamp(J, 1.0, static_cast<double>(basis.ambient_dim)));
    const double h = eps_q * std::sqrt(2.0) / std::sqrt(pieces * static_cast<double>(J_));
    std::vector<GridAxis> axes;
    for (int p = 0; p <= s_.kappa; ++p)
      for (std::size_t j = 0; j < J_; ++j)
        axes.push_back(ProductGrid::axis_for_step("piece[" + std::to_string(p) + "].c" + std::to_string(j + 1),
                                                  s_.K * std::exp(-s_.eta * static_cast<double>(j + 1)), h));
    grid_coeffs_ = std::make_shared<ProductGrid>(std::move(axes));
    finish(grid_.configs(), grid_.factors(), grid_coeffs_);
  }

  void atoms(std::uint64_t config, std::size_t len, std::span<double> out) const override {
    const auto arcs = arcs_of(grid_.positions(config));
    for (std::size_t p = 0; p < arcs.size(); ++p) {
      for (std::size_t j = 0; j < J_; ++j) {
        std::vector<double> g(j + 1, 0.0);
        g[j] = 1.0;
        const Signal a = analyze_trig_on_interval(g, arcs[p].first, arcs[p].second, basis());
        copy_prefix(a, len, out.data() + (p * J_ + j) * len);
      }
    }
  }

  CenterPoint encode(const Member& m) const override {
    SAMENT_REQUIRE(m.trig_pieces.size() == m.breakpoints.size() + 1, "member lacks piecewise structure");
    const std::uint64_t config = grid_.encode(m.breakpoints);
    const auto arcs = arcs_of(grid_.positions(config));
    std::vector<double> target(arcs.size() * J_, 0.0);
    for (std::size_t p = 0; p < arcs.size(); ++p) {
      if (!(arcs[p].second > arcs[p].first)) continue;
      const auto& g = m.trig_pieces[piece_at(m.breakpoints, 0.5 * (arcs[p].first + arcs[p].second))];
      for (std::size_t j = 0; j < J_ && j < g.size(); ++j) target[p * J_ + j] = g[j];
    }
    return {config, grid_coeffs_->round(target)};
  }

  Member center_member(const CenterPoint& pt) const override {
    const auto positions = grid_.positions(pt.config);
    std::vector<std::size_t> kept;
    Member m;
    collapse_arcs(positions, m.breakpoints, kept);
    for (std::size_t p : kept)
      m.trig_pieces.emplace_back(pt.coeffs.begin() + static_cast<std::ptrdiff_t>(p * J_),
                                 pt.coeffs.begin() + static_cast<std::ptrdiff_t>((p + 1) * J_));
    m.signal = analyze_trig_pieces(m.breakpoints, m.trig_pieces, basis());
    return m;
  }

  MembershipTolerance center_tolerance() const override { return {h_pos_ * (1.0 + 1e-9), 1e-12, 0.0}; }

 private:
  PiecewiseAnalyticSpec s_;
  JumpGrid grid_;
  double h_pos_ = 0.0;
  std::size_t J_ = 1;
  std::shared_ptr<ProductGrid> grid_coeffs_;
};

// ---------------------------------------------------------------- warped

class WarpedNet final : public EpsilonNet {
 public:
  WarpedNet(const ClassSpec& spec, double eps1, BasisSpec basis, const NetOptions& opt)
      : EpsilonNet(spec, basis, eps1), w_(*spec.as<WarpedSpec>()) {
    base_ = plan_net(*w_.base, eps1 / 2.0, basis, opt);
    a_ = warp_amplitudes(w_);
    const auto& sm = *w_.base->as<SmoothSpec>();
    double lf = 0.0;
    for (std::size_t i = 0; i < basis.ambient_dim; ++i) {
      const double om = static_cast<double>(frequency_of(i));
      lf += om * om / (kPi * std::pow(static_cast<double>(i + 1), 2.0 * sm.k));
    }
    const double L_f = sm.K * std::sqrt(lf);
    const double L_tau = std::sqrt(std::inner_product(a_.begin(), a_.end(), a_.begin(), 0.0));
    const double h_tau = eps1 / (2.0 * L_f * L_tau * std::sqrt(2.0 * kPi * w_.s_warp));
    G_ = static_cast<std::uint64_t>(std::max(1.0, std::ceil(1.0 / h_tau * (1.0 - 1e-12))));
    std::optional<std::uint64_t> tau_configs = 1;
    std::vector<NetFactor> f;
    for (int i = 0; i < w_.s_warp; ++i) {
      tau_configs = checked_mul(tau_configs, G_);
      f.push_back({"tau[" + std::to_string(i) + "]", std::log2(static_cast<double>(G_)), 1.0 / G_});
    }
    tau_configs_ = tau_configs.value_or(0);
    base_configs_ = base_->num_configs();
    // base configuration factors only; the coefficient set reports its own
    const auto& blog = base_->construction_log();
    const std::size_t base_cfg_factors = blog.size() - base_->coefficients().factors().size();
    for (std::size_t i = 0; i < base_cfg_factors; ++i) {
      auto x = blog[i];
      x.name = "base." + x.name;
      f.push_back(std::move(x));
    }
    SAMENT_REQUIRE(tau_configs.has_value(), "warped: tau grid too large");
    finish(checked_mul(tau_configs, base_configs_), std::move(f), base_->coefficients_ptr());
  }

  void atoms(std::uint64_t config, std::size_t len, std::span<double> out) const override {
    const std::size_t D = basis().ambient_dim;
    const std::size_t A = num_atoms();
    std::vector<double> buf(A * D);
    base_->atoms(config % base_configs_, D, buf);
    const auto tau = tau_of(config / base_configs_);
    for (std::size_t a = 0; a < A; ++a) {
      const Signal atom(basis(), std::vector<double>(buf.begin() + static_cast<std::ptrdiff_t>(a * D),
                                                     buf.begin() + static_cast<std::ptrdiff_t>((a + 1) * D)));
      copy_prefix(warp_signal(atom, a_, tau), len, out.data() + a * len);
    }
  }

  CenterPoint encode(const Member& m) const override {
    SAMENT_REQUIRE(m.base != nullptr && m.params.size() == a_.size(), "member lacks warp structure");
    CenterPoint bp = base_->encode(*m.base);
    std::uint64_t t = 0;
    for (double tau : m.params) {
      const double cell = std::floor(tau * static_cast<double>(G_));
      t = t * G_ + std::min<std::uint64_t>(cell > 0.0 ? static_cast<std::uint64_t>(cell) : 0, G_ - 1);
    }
    return {t * base_configs_ + bp.config, std::move(bp.coeffs)};
  }

  Member center_member(const CenterPoint& pt) const override {
    auto base = std::make_shared<Member>(base_->center_member({pt.config % base_configs_, pt.coeffs}));
    Member m;
    m.params = tau_of(pt.config / base_configs_);
    m.signal = warp_signal(base->signal, a_, m.params);
    m.base = std::move(base);
    return m;
  }

  MembershipTolerance center_tolerance() const override { return base_->center_tolerance(); }

  std::uint64_t tau_grid() const { return G_; }

 private:
  std::vector<double> tau_of(std::uint64_t t) const {
    std::vector<double> tau(a_.size());
    for (std::size_t i = tau.size(); i-- > 0;) {
      tau[i] = (static_cast<double>(t % G_) + 0.5) / static_cast<double>(G_);
      t /= G_;
    }
    return tau;
  }

  WarpedSpec w_;
  std::unique_ptr<EpsilonNet> base_;
  std::vector<double> a_;
  std::uint64_t G_ = 1;
  std::uint64_t tau_configs_ = 1;
  std::uint64_t base_configs_ = 1;
};

// ---------------------------------------------------------------- additive span

class AdditiveSpanNet final : public EpsilonNet {
 public:
  AdditiveSpanNet(const ClassSpec& spec, double eps1, BasisSpec basis, const NetOptions& opt)
      : EpsilonNet(spec, basis, eps1), sp_(*spec.as<AdditiveSpanSpec>()) {
    base_ = plan_net(*sp_.base, eps1 / 2.0, basis, opt);
    const std::size_t r = sp_.g.size();
    double gmax = 0.0, lambda = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      gmax = std::max(gmax, norm(sp_.g[i]));
      double row = 0.0;
      for (std::size_t j = 0; j < r; ++j) row += std::abs(inner(sp_.g[i], sp_.g[j]));
      lambda = std::max(lambda, row);
    }
    SAMENT_REQUIRE(gmax > 0.0, "additive_span: all fixed functions are zero");
    const double rd = static_cast<double>(r);
    const double step = std::min(eps1 / (2.0 * std::sqrt(rd) * gmax), eps1 / std::sqrt(rd * lambda));
    std::vector<GridAxis> axes;
    for (std::size_t i = 0; i < r; ++i)
      axes.push_back(ProductGrid::axis_for_step("beta[" + std::to_string(i) + "]", sp_.B, step));
    auto coeffs = std::make_shared<ConcatSet>(base_->coefficients_ptr(), std::make_shared<ProductGrid>(std::move(axes)),
                                              "base.", "");
    std::vector<NetFactor> f;
    for (auto x : base_->construction_log()) {
      x.name = "base." + x.name;
      f.push_back(std::move(x));
    }
    // the coefficient set lists the base coefficient factors again; keep only configuration factors here
    const std::size_t coeff_factors = base_->coefficients().factors().size();
    f.resize(f.size() - coeff_factors);
    base_configs_ = base_->num_configs();
    finish(base_configs_, std::move(f), std::move(coeffs));
  }

  void atoms(std::uint64_t config, std::size_t len, std::span<double> out) const override {
    const std::size_t Ab = base_->num_atoms();
    base_->atoms(config, len, out.subspan(0, Ab * len));
    for (std::size_t i = 0; i < sp_.g.size(); ++i) copy_prefix(sp_.g[i], len, out.data() + (Ab + i) * len);
  }

  void project_atoms(std::span<const double> rows, std::size_t r, std::size_t len, std::uint64_t begin,
                     std::uint64_t end, std::span<double> out) const override {
    const std::size_t Ab = base_->num_atoms();
    const std::size_t A = num_atoms();
    std::vector<double> tmp((end - begin) * Ab * r);
    base_->project_atoms(rows, r, len, begin, end, tmp);
    std::vector<double> gp(sp_.g.size() * r);
    for (std::size_t k = 0; k < sp_.g.size(); ++k)
      for (std::size_t i = 0; i < r; ++i) gp[k * r + i] = dot(rows.data() + i * len, sp_.g[k].coeffs().data(), len);
    for (std::uint64_t c = 0; c < end - begin; ++c) {
      std::copy_n(tmp.data() + c * Ab * r, Ab * r, out.data() + c * A * r);
      std::copy(gp.begin(), gp.end(), out.data() + (c * A + Ab) * r);
    }
  }

  CenterPoint encode(const Member& m) const override {
    SAMENT_REQUIRE(m.base != nullptr && m.params.size() == sp_.g.size(), "member lacks span structure");
    CenterPoint bp = base_->encode(*m.base);
    std::vector<double> target = bp.coeffs;
    target.insert(target.end(), m.params.begin(), m.params.end());
    // base part is already on its set; rounding is idempotent there
    return {bp.config, coefficients().round(target)};
  }

  Member center_member(const CenterPoint& pt) const override {
    const std::size_t Ab = base_->num_atoms();
    auto base = std::make_shared<Member>(base_->center_member(
        {pt.config, std::vector<double>(pt.coeffs.begin(), pt.coeffs.begin() + static_cast<std::ptrdiff_t>(Ab))}));
    Member m;
    m.params.assign(pt.coeffs.begin() + static_cast<std::ptrdiff_t>(Ab), pt.coeffs.end());
    Signal s = base->signal;
    for (std::size_t i = 0; i < sp_.g.size(); ++i) s = axpy(s, m.params[i], sp_.g[i]);
    m.signal = std::move(s);
    m.base = std::move(base);
    return m;
  }

  MembershipTolerance center_tolerance() const override { return base_->center_tolerance(); }

 private:
  AdditiveSpanSpec sp_;
  std::unique_ptr<EpsilonNet> base_;
  std::uint64_t base_configs_ = 1;
};

}  // namespace

double grid_position(std::uint64_t i, std::uint64_t P) {
  return -kPi + (static_cast<double>(i) + 0.5) * 2.0 * kPi / static_cast<double>(P);
}

EpsilonNet::EpsilonNet(const ClassSpec& spec, BasisSpec basis, double eps1)
    : spec_(spec), basis_(basis), eps1_(eps1) {
  SAMENT_REQUIRE(std::isfinite(eps1) && eps1 > 0.0, "eps1 must be a positive number");
  validate(spec, basis);
  spec_string_ = canonical(spec);
}

void EpsilonNet::finish(std::optional<std::uint64_t> configs, std::vector<NetFactor> config_factors,
                        std::shared_ptr<const CoefficientSet> coeffs) {
  configs_ = configs;
  coeffs_ = std::move(coeffs);
  log_ = std::move(config_factors);
  for (auto f : coeffs_->factors()) log_.push_back(std::move(f));
}

std::uint64_t EpsilonNet::num_configs() const {
  SAMENT_REQUIRE(configs_.has_value(), "net has too many configurations to enumerate");
  return *configs_;
}

double EpsilonNet::log2_size() const {
  double s = 0.0;
  for (const auto& f : log_) s += f.log2_count;
  return s;
}

std::optional<std::uint64_t> EpsilonNet::size() const { return checked_mul(configs_, coeffs_->size()); }

void EpsilonNet::project_atoms(std::span<const double> rows, std::size_t r, std::size_t len, std::uint64_t begin,
                               std::uint64_t end, std::span<double> out) const {
  SAMENT_REQUIRE(len <= basis_.ambient_dim && rows.size() >= r * len, "project_atoms: bad row matrix");
  const std::size_t A = num_atoms();
  SAMENT_REQUIRE(out.size() >= (end - begin) * A * r, "project_atoms: output too short");
  const long long n = static_cast<long long>(end - begin);
#pragma omp parallel
  {
    std::vector<double> buf(A * len);
#pragma omp for schedule(dynamic, 4)
    for (long long cc = 0; cc < n; ++cc) {
      atoms(begin + static_cast<std::uint64_t>(cc), len, buf);
      for (std::size_t a = 0; a < A; ++a)
        for (std::size_t i = 0; i < r; ++i)
          out[(static_cast<std::size_t>(cc) * A + a) * r + i] = dot(rows.data() + i * len, buf.data() + a * len, len);
    }
  }
}

std::uint64_t EpsilonNet::index_of(const CenterPoint& p) const {
  const auto total = size();
  SAMENT_REQUIRE(total.has_value(), "net too large to index");
  SAMENT_REQUIRE(p.config < num_configs(), "configuration out of range");
  return p.config * *coeffs_->size() + coeffs_->index_of(p.coeffs);
}

CenterPoint EpsilonNet::point(std::uint64_t index) const {
  const auto total = size();
  SAMENT_REQUIRE(total.has_value(), "net too large to index");
  SAMENT_REQUIRE(index < *total, "center index out of range");
  const std::uint64_t S = *coeffs_->size();
  CenterPoint p{index / S, std::vector<double>(num_atoms())};
  coeffs_->row(index % S, p.coeffs);
  return p;
}

Signal EpsilonNet::center(const CenterPoint& p) const {
  const std::size_t D = basis_.ambient_dim;
  const std::size_t A = num_atoms();
  SAMENT_REQUIRE(p.coeffs.size() == A, "center coefficient vector has wrong length");
  std::vector<double> buf(A * D);
  atoms(p.config, D, buf);
  std::vector<double> c(D, 0.0);
  for (std::size_t a = 0; a < A; ++a) {
    if (p.coeffs[a] == 0.0) continue;
    for (std::size_t i = 0; i < D; ++i) c[i] += p.coeffs[a] * buf[a * D + i];
  }
  return Signal(basis_, std::move(c));
}

std::unique_ptr<EpsilonNet> plan_net(const ClassSpec& spec, double eps1, BasisSpec basis, const NetOptions& opt) {
  SAMENT_REQUIRE(opt.budget_split > 0.0 && opt.budget_split < 1.0, "budget_split must be in (0, 1)");
  validate(spec, basis);
  if (spec.as<SmoothSpec>()) return std::make_unique<SmoothNet>(spec, eps1, basis, opt);
  if (spec.as<PiecewiseCkSpec>()) return std::make_unique<PiecewiseCkNet>(spec, eps1, basis, opt);
  if (spec.as<PiecewiseAnalyticSpec>()) return std::make_unique<PiecewiseAnalyticNet>(spec, eps1, basis, opt);
  if (spec.as<WarpedSpec>()) return std::make_unique<WarpedNet>(spec, eps1, basis, opt);
  return std::make_unique<AdditiveSpanNet>(spec, eps1, basis, opt);
}

std::unique_ptr<EpsilonNet> build_net(const ClassSpec& spec, double eps1, BasisSpec basis, const NetOptions& opt) {
  SAMENT_REQUIRE(opt.max_net_size >= 1.0, "max_net_size must be >= 1");
  auto net = plan_net(spec, eps1, basis, opt);
  const double budget = std::log2(opt.max_net_size);
  if (net->log2_size() > budget + 1e-12) throw BudgetExceededError(net->log2_size(), opt.max_net_size);
  return net;
}

}  // namespace sament
