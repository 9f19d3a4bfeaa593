#include "sament/members.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sament/errors.hpp"

namespace sament {

namespace {

constexpr double kPi = std::numbers::pi;

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

PolynomialPiece derivative_piece(const PolynomialPiece& p, int l) {
  PolynomialPiece d{p.origin, {}};
  for (int m = l; m <= p.degree(); ++m) {
    double fall = 1.0;
    for (int q = 0; q < l; ++q) fall *= static_cast<double>(m - q);
    d.coeffs.push_back(p.coeffs[static_cast<std::size_t>(m)] * fall);
  }
  if (d.coeffs.empty()) d.coeffs.push_back(0.0);
  return d;
}

MembershipResult fail(std::string why) { return {false, std::move(why)}; }

MembershipResult check_breakpoints(std::span<const double> b, int max_count, double rho1, double slack) {
  if (static_cast<int>(b.size()) > max_count)
    return fail(std::to_string(b.size()) + " jumps, at most " + std::to_string(max_count) + " allowed");
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i > 0 && !(b[i] > b[i - 1])) return fail("breakpoints not increasing");
    if (i > 0 && b[i] - b[i - 1] < rho1 - slack) return fail("jump gap below rho1");
    if (b[i] + kPi < rho1 / 2 - slack || kPi - b[i] < rho1 / 2 - slack)
      return fail("jump closer than rho1/2 to the seam");
  }
  return {};
}

MembershipResult check_signal(const Signal& have, const Signal& want) {
  const double err = distance(have, want);
  if (err > 1e-9 * std::max(1.0, norm(want)))
    return fail("signal differs from its parameters by " + std::to_string(err));
  return {};
}

struct Sampler {
  BasisSpec basis;
  Rng& rng;

  Member operator()(const SmoothSpec& s) const {
    const std::size_t D = basis.ambient_dim;
    double harmonic = 0.0;
    for (std::size_t j = 1; j <= D; ++j) harmonic += 1.0 / static_cast<double>(j);
    std::vector<double> c(D);
    for (std::size_t i = 0; i < D; ++i) {
      const double j = static_cast<double>(i + 1);
      c[i] = s.K * std::pow(j, -s.k) * uniform(rng, -1.0, 1.0) / std::sqrt(j * harmonic);
    }
    if (uniform(rng, 0.0, 1.0) < 0.5) {
      // push half of the draws onto the boundary of the body
      const double e = std::sqrt(sobolev_energy(c, s.k));
      if (e > 0.0)
        for (double& v : c) v *= s.K / e;
    }
    return Member{Signal(basis, std::move(c)), {}, {}, {}, {}, nullptr};
  }

  Member operator()(const PiecewiseCkSpec& s) const {
    Member m;
    m.breakpoints = sample_breakpoints(s.s, s.rho1, rng);
    for (const auto& [lo, hi] : arcs_of(m.breakpoints)) {
      PolynomialPiece p{0.5 * (lo + hi), {}};
      double fact = 1.0;
      for (int d = 0; d <= s.k; ++d) {
        if (d > 0) fact *= d;
        const double bound = d == 0 ? s.A : s.K2;
        p.coeffs.push_back(uniform(rng, -bound, bound) / fact);
      }
      double lam = 1.0;
      const double sup0 = polynomial_sup_abs(p, lo, hi);
      if (sup0 > s.A) lam = std::min(lam, s.A / sup0);
      for (int d = 1; d <= s.k; ++d) {
        const double sup = polynomial_sup_abs(derivative_piece(p, d), lo, hi);
        if (sup > s.K2) lam = std::min(lam, s.K2 / sup);
      }
      for (double& c : p.coeffs) c *= lam;
      m.poly_pieces.push_back(std::move(p));
    }
    m.signal = analyze_piecewise(PiecewiseDescription{m.breakpoints, m.poly_pieces, false}, basis);
    return m;
  }

  Member operator()(const PiecewiseAnalyticSpec& s) const {
    Member m;
    m.breakpoints = sample_breakpoints(s.kappa, s.rho1, rng);
    const std::size_t support = analytic_support(s, basis.ambient_dim);
    for (std::size_t piece = 0; piece <= m.breakpoints.size(); ++piece) {
      std::vector<double> g(support);
      for (std::size_t i = 0; i < support; ++i)
        g[i] = s.K * std::exp(-s.eta * static_cast<double>(i + 1)) * uniform(rng, -1.0, 1.0);
      m.trig_pieces.push_back(std::move(g));
    }
    m.signal = analyze_trig_pieces(m.breakpoints, m.trig_pieces, basis);
    return m;
  }

  Member operator()(const WarpedSpec& s) const {
    auto base = std::make_shared<Member>(sample_member(*s.base, basis, rng));
    Member m;
    for (int i = 0; i < s.s_warp; ++i) m.params.push_back(uniform(rng, 0.0, 1.0));
    m.signal = warp_signal(base->signal, warp_amplitudes(s), m.params);
    m.base = std::move(base);
    return m;
  }

  Member operator()(const AdditiveSpanSpec& s) const {
    auto base = std::make_shared<Member>(sample_member(*s.base, basis, rng));
    Member m;
    std::vector<double> acc(base->signal.coeffs().begin(), base->signal.coeffs().end());
    for (const auto& g : s.g) {
      const double beta = uniform(rng, -s.B, s.B);
      m.params.push_back(beta);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += beta * g[i];
    }
    m.signal = Signal(basis, std::move(acc));
    m.base = std::move(base);
    return m;
  }
};

struct Checker {
  const Member& m;
  const MembershipTolerance& tol;

  MembershipResult operator()(const SmoothSpec& s) const {
    const double e = std::sqrt(sobolev_energy(m.signal.coeffs(), s.k));
    if (e > s.K * (1.0 + 1e-12) + tol.value) return fail("outside the coefficient ellipsoid");
    return {};
  }

  MembershipResult operator()(const PiecewiseCkSpec& s) const {
    if (auto r = check_breakpoints(m.breakpoints, s.s, s.rho1, tol.position); !r) return r;
    const auto arcs = arcs_of(m.breakpoints);
    if (m.poly_pieces.size() != arcs.size()) return fail("piece count does not match jump count");
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      const auto& p = m.poly_pieces[i];
      const auto [lo, hi] = arcs[i];
      if (p.degree() > s.k) return fail("piece degree above k");
      if (polynomial_sup_abs(p, lo, hi) > s.A * (1.0 + 1e-12) + tol.value)
        return fail("piece exceeds level bound A");
      for (int d = 1; d <= p.degree(); ++d)
        if (polynomial_sup_abs(derivative_piece(p, d), lo, hi) > s.K2 * (1.0 + 1e-12) + tol.value)
          return fail("piece derivative exceeds K2");
    }
    return check_signal(
        m.signal, analyze_piecewise(PiecewiseDescription{m.breakpoints, m.poly_pieces, false}, m.signal.basis()));
  }

  MembershipResult operator()(const PiecewiseAnalyticSpec& s) const {
    if (auto r = check_breakpoints(m.breakpoints, s.kappa, s.rho1, tol.position); !r) return r;
    if (m.trig_pieces.size() != m.breakpoints.size() + 1) return fail("piece count does not match jump count");
    for (const auto& g : m.trig_pieces)
      for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(g[i]) > s.K * std::exp(-s.eta * static_cast<double>(i + 1)) * (1.0 + 1e-12) + tol.value)
          return fail("piece coefficient exceeds K exp(-eta j)");
    return check_signal(m.signal, analyze_trig_pieces(m.breakpoints, m.trig_pieces, m.signal.basis()));
  }

  MembershipResult operator()(const WarpedSpec& s) const {
    if (!m.base) return fail("warped member without base");
    if (m.params.size() != static_cast<std::size_t>(s.s_warp)) return fail("tau has wrong dimension");
    for (double t : m.params)
      if (t < -tol.param || t > 1.0 + tol.param) return fail("tau outside [0,1]");
    if (auto r = check_member(*s.base, *m.base, tol); !r) return fail("base: " + r.reason);
    return check_signal(m.signal, warp_signal(m.base->signal, warp_amplitudes(s), m.params));
  }

  MembershipResult operator()(const AdditiveSpanSpec& s) const {
    if (!m.base) return fail("span member without base");
    if (m.params.size() != s.g.size()) return fail("beta has wrong dimension");
    for (double b : m.params)
      if (std::abs(b) > s.B + tol.param) return fail("beta outside [-B, B]");
    if (auto r = check_member(*s.base, *m.base, tol); !r) return fail("base: " + r.reason);
    Signal want = m.base->signal;
    for (std::size_t i = 0; i < s.g.size(); ++i) want = axpy(want, m.params[i], s.g[i]);
    return check_signal(m.signal, want);
  }
};

}  // namespace

double sobolev_energy(std::span<const double> c, int k) {
  double e = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double w = ipow(static_cast<double>(i + 1), k) * c[i];
    e += w * w;
  }
  return e;
}

std::vector<double> sample_breakpoints(int count, double rho1, Rng& rng) {
  SAMENT_REQUIRE(count >= 0, "negative jump count");
  const double free_len = 2.0 * kPi - count * rho1;
  SAMENT_REQUIRE(count == 0 || free_len > 0.0, "infeasible jump configuration: count * rho1 >= 2 pi");
  std::vector<double> u(static_cast<std::size_t>(count));
  for (double& v : u) v = uniform(rng, 0.0, free_len);
  std::sort(u.begin(), u.end());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] += -kPi + rho1 / 2 + static_cast<double>(i) * rho1;
  return u;
}

std::vector<std::pair<double, double>> arcs_of(std::span<const double> b) {
  std::vector<std::pair<double, double>> out;
  double lo = -kPi;
  for (double x : b) {
    out.emplace_back(lo, x);
    lo = x;
  }
  out.emplace_back(lo, kPi);
  return out;
}

std::size_t analytic_support(const PiecewiseAnalyticSpec& s, std::size_t ambient_dim) {
  // beyond this index the envelope is below 1e-17 K and cannot move a double
  const double cut = std::ceil(std::log(1e17) / s.eta);
  return static_cast<std::size_t>(std::min<double>(cut, static_cast<double>(ambient_dim)));
}

Signal analyze_trig_pieces(std::span<const double> breakpoints, const std::vector<std::vector<double>>& pieces,
                           BasisSpec basis) {
  const auto arcs = arcs_of(breakpoints);
  SAMENT_REQUIRE(arcs.size() == pieces.size(), "piece count does not match jump count");
  std::vector<double> acc(basis.ambient_dim, 0.0);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Signal part = analyze_trig_on_interval(pieces[i], arcs[i].first, arcs[i].second, basis);
    for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += part[q];
  }
  return Signal(basis, std::move(acc));
}

Signal warp_signal(const Signal& f, std::span<const double> a, std::span<const double> tau) {
  const std::size_t D = f.size();
  std::size_t n = 1;
  while (n < 2 * D + 2) n *= 2;
  std::size_t last = 0;
  for (std::size_t i = 0; i < D; ++i)
    if (f[i] != 0.0) last = i + 1;
  std::vector<double> ts(n);
  for (std::size_t i = 0; i < n; ++i)
    ts[i] = warp(a, tau, -kPi + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n));
  std::vector<double> trimmed(f.coeffs().begin(), f.coeffs().begin() + static_cast<std::ptrdiff_t>(std::max<std::size_t>(last, 2)));
  const auto tb = BasisSpec::trig(trimmed.size());
  const Signal ft(tb, std::move(trimmed));
  return analyze_samples(synthesize(ft, ts), f.basis());
}

Member sample_member(const ClassSpec& spec, BasisSpec basis, Rng& rng) {
  validate(spec, basis);
  return std::visit(Sampler{basis, rng}, spec.v);
}

Signal sample_signal(const ClassSpec& spec, BasisSpec basis, Rng& rng) {
  return sample_member(spec, basis, rng).signal;
}

MembershipResult check_member(const ClassSpec& spec, const Member& m, const MembershipTolerance& tol) {
  return std::visit(Checker{m, tol}, spec.v);
}

}  // namespace sament
