#include "sament/piecewise.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <string>

#include "sament/errors.hpp"

namespace sament {

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);
const double kInvSqrtPi = 1.0 / std::sqrt(kPi);

using cplx = std::complex<double>;

/// e^{i f t} for f = 1, 2, ... by rotation with periodic resync.
class Rotor {
 public:
  explicit Rotor(double t) : t_(t), step_(std::polar(1.0, t)), cur_(step_) {}
  /// value for the current frequency, then advance
  cplx next() {
    const cplx out = cur_;
    ++f_;
    cur_ = (f_ % 64 == 0) ? std::polar(1.0, static_cast<double>(f_) * t_) : cur_ * step_;
    return out;
  }

 private:
  double t_;
  cplx step_;
  cplx cur_;
  std::size_t f_ = 1;
};

double circular_gap(double a, double b) {
  const double d = std::fmod(std::abs(b - a), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

}  // namespace

double PolynomialPiece::value(double t) const { return derivative(0, t); }

double PolynomialPiece::derivative(int l, double t) const {
  const double u = t - origin;
  double acc = 0.0;
  for (int m = degree(); m >= l; --m) {
    double fall = 1.0;
    for (int q = 0; q < l; ++q) fall *= static_cast<double>(m - q);
    acc = acc * u + coeffs[static_cast<std::size_t>(m)] * fall;
  }
  return acc;
}

std::vector<std::pair<double, double>> PiecewiseDescription::intervals() const {
  std::vector<std::pair<double, double>> out;
  const auto& b = breakpoints;
  if (b.empty()) {
    out.emplace_back(-kPi, kPi);
    return out;
  }
  if (periodic) {
    for (std::size_t i = 0; i + 1 < b.size(); ++i) out.emplace_back(b[i], b[i + 1]);
    out.emplace_back(b.back(), b.front() + 2.0 * kPi);
  } else {
    out.emplace_back(-kPi, b.front());
    for (std::size_t i = 0; i + 1 < b.size(); ++i) out.emplace_back(b[i], b[i + 1]);
    out.emplace_back(b.back(), kPi);
  }
  return out;
}

double PiecewiseDescription::evaluate(double t) const {
  // map into [-pi, pi)
  double u = std::fmod(t + kPi, 2.0 * kPi);
  if (u < 0) u += 2.0 * kPi;
  u -= kPi;
  const auto iv = intervals();
  for (std::size_t i = 0; i < iv.size(); ++i) {
    const auto [lo, hi] = iv[i];
    if (u >= lo && u < hi) return pieces[i].value(u);
    if (hi > kPi && u + 2.0 * kPi >= lo && u + 2.0 * kPi < hi) return pieces[i].value(u + 2.0 * kPi);
  }
  return pieces.back().value(u);
}

void validate(const PiecewiseDescription& desc, double min_gap) {
  const auto& b = desc.breakpoints;
  for (double x : b) SAMENT_REQUIRE(x > -kPi && x < kPi, "breakpoint outside (-pi, pi)");
  for (std::size_t i = 1; i < b.size(); ++i)
    SAMENT_REQUIRE(b[i] > b[i - 1], "breakpoints must be strictly increasing");
  const std::size_t want = b.empty() ? 1 : (desc.periodic ? b.size() : b.size() + 1);
  SAMENT_REQUIRE(desc.pieces.size() == want,
                 "expected " + std::to_string(want) + " pieces, got " +
                     std::to_string(desc.pieces.size()));
  for (const auto& p : desc.pieces) {
    SAMENT_REQUIRE(!p.coeffs.empty(), "empty polynomial piece");
    SAMENT_REQUIRE(p.degree() <= kMaxPieceDegree,
                   "piece degree " + std::to_string(p.degree()) + " above supported maximum " +
                       std::to_string(kMaxPieceDegree));
  }
  if (min_gap > 0.0 && b.size() >= 2) {
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j)
        SAMENT_REQUIRE(circular_gap(b[i], b[j]) >= min_gap, "breakpoints closer than min gap");
  }
}

Signal analyze_polynomial_on_interval(const PolynomialPiece& piece, double lo, double hi,
                                      BasisSpec basis) {
  SAMENT_REQUIRE(piece.degree() <= kMaxPieceDegree, "piece degree above supported maximum");
  SAMENT_REQUIRE(hi >= lo, "interval must satisfy lo <= hi");
  const std::size_t dim = basis.ambient_dim;
  std::vector<double> c(dim, 0.0);
  const int deg = piece.degree();

  // constant term: integral of the polynomial itself
  {
    double acc = 0.0;
    const double u0 = lo - piece.origin, u1 = hi - piece.origin;
    double p0 = u0, p1 = u1;
    for (int m = 0; m <= deg; ++m) {
      acc += piece.coeffs[static_cast<std::size_t>(m)] * (p1 - p0) / (m + 1);
      p0 *= u0;
      p1 *= u1;
    }
    c[0] = acc * kInvSqrt2Pi;
  }

  // int_lo^hi p(t) e^{ift} dt = sum_l (-1)^l (if)^{-(l+1)} [p^(l)(hi) e^{if hi} - p^(l)(lo) e^{if lo}]
  std::vector<double> dhi(static_cast<std::size_t>(deg) + 1), dlo(dhi.size());
  for (int l = 0; l <= deg; ++l) {
    dhi[static_cast<std::size_t>(l)] = piece.derivative(l, hi);
    dlo[static_cast<std::size_t>(l)] = piece.derivative(l, lo);
  }
  Rotor rhi(hi), rlo(lo);
  for (std::size_t f = 1; 2 * f - 1 < dim; ++f) {
    const cplx ehi = rhi.next(), elo = rlo.next();
    const cplx inv_if(0.0, -1.0 / static_cast<double>(f));
    cplx w = inv_if;  // (-1)^l (if)^{-(l+1)}
    cplx acc = 0.0;
    for (int l = 0; l <= deg; ++l) {
      acc += w * (dhi[static_cast<std::size_t>(l)] * ehi - dlo[static_cast<std::size_t>(l)] * elo);
      w *= -inv_if;
    }
    c[2 * f - 1] = acc.real() * kInvSqrtPi;
    if (2 * f < dim) c[2 * f] = acc.imag() * kInvSqrtPi;
  }
  return Signal(basis, std::move(c));
}

Signal analyze_piecewise(const PiecewiseDescription& desc, BasisSpec basis) {
  validate(desc);
  const auto iv = desc.intervals();
  std::vector<double> acc(basis.ambient_dim, 0.0);
  for (std::size_t i = 0; i < iv.size(); ++i) {
    const Signal part = analyze_polynomial_on_interval(desc.pieces[i], iv[i].first, iv[i].second, basis);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += part[k];
  }
  return Signal(basis, std::move(acc));
}

void indicator_coefficients(double lo, double hi, std::span<double> out) {
  const std::size_t d = out.size();
  if (d == 0) return;
  out[0] = (hi - lo) * kInvSqrt2Pi;
  Rotor rhi(hi), rlo(lo);
  for (std::size_t f = 1; 2 * f - 1 < d; ++f) {
    const cplx ehi = rhi.next(), elo = rlo.next();
    const double inv = kInvSqrtPi / static_cast<double>(f);
    // int e^{ift} = (e^{if hi} - e^{if lo}) / (if)
    out[2 * f - 1] = (ehi.imag() - elo.imag()) * inv;
    if (2 * f < d) out[2 * f] = (elo.real() - ehi.real()) * inv;
  }
}

Signal analyze_trig_on_interval(std::span<const double> g, double lo, double hi, BasisSpec basis) {
  SAMENT_REQUIRE(g.size() <= basis.ambient_dim, "trig coefficient vector longer than ambient_dim");
  SAMENT_REQUIRE(hi >= lo, "interval must satisfy lo <= hi");
  const std::size_t dim = basis.ambient_dim;
  std::size_t gmax = 0;
  for (std::size_t j = 0; j < g.size(); ++j) gmax = std::max(gmax, frequency_of(j));
  const std::size_t qmax = gmax + frequency_of(dim - 1) + 1;

  // C[q] = int cos(q t), S[q] = int sin(q t) over [lo, hi]
  std::vector<double> C(qmax + 1), S(qmax + 1);
  C[0] = hi - lo;
  S[0] = 0.0;
  Rotor rhi(hi), rlo(lo);
  for (std::size_t q = 1; q <= qmax; ++q) {
    const cplx ehi = rhi.next(), elo = rlo.next();
    const double inv = 1.0 / static_cast<double>(q);
    C[q] = (ehi.imag() - elo.imag()) * inv;
    S[q] = (elo.real() - ehi.real()) * inv;
  }
  auto Cs = [&](long q) { return C[static_cast<std::size_t>(std::labs(q))]; };
  auto Ss = [&](long q) { return q >= 0 ? S[static_cast<std::size_t>(q)] : -S[static_cast<std::size_t>(-q)]; };
  auto norm_of = [](std::size_t i) { return i == 0 ? kInvSqrt2Pi : kInvSqrtPi; };

  std::vector<double> c(dim, 0.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g[j] == 0.0) continue;
    const long a = static_cast<long>(frequency_of(j));
    const bool sa = is_sine(j);
    const double nj = norm_of(j) * g[j];
    for (std::size_t l = 0; l < dim; ++l) {
      const long b = static_cast<long>(frequency_of(l));
      const bool sb = is_sine(l);
      double v;
      if (!sa && !sb) {
        v = 0.5 * (Cs(a - b) + Cs(a + b));
      } else if (sa && sb) {
        v = 0.5 * (Cs(a - b) - Cs(a + b));
      } else if (sa && !sb) {
        v = 0.5 * (Ss(a + b) + Ss(a - b));
      } else {
        v = 0.5 * (Ss(a + b) + Ss(b - a));
      }
      c[l] += nj * norm_of(l) * v;
    }
  }
  return Signal(basis, std::move(c));
}

Signal analyze_samples(std::span<const double> values, BasisSpec basis) {
  const std::size_t n = values.size();
  const std::size_t dim = basis.ambient_dim;
  SAMENT_REQUIRE(n > dim, "need more samples than ambient_dim");
  std::vector<double> in(values.begin(), values.end());
  fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
  fftw_plan plan;
  {
    static std::mutex planner;
    std::lock_guard lock(planner);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);

  std::vector<double> c(dim, 0.0);
  const double w = 2.0 * kPi / static_cast<double>(n);
  c[0] = w * out[0][0] * kInvSqrt2Pi;
  for (std::size_t f = 1; 2 * f - 1 < dim; ++f) {
    // int g e^{-ift} ~ w * (-1)^f * X_f   (t_n = -pi + 2 pi n / N)
    const double sgn = (f % 2 == 0) ? 1.0 : -1.0;
    const double re = w * sgn * out[f][0], im = w * sgn * out[f][1];
    c[2 * f - 1] = re * kInvSqrtPi;
    if (2 * f < dim) c[2 * f] = -im * kInvSqrtPi;
  }
  {
    static std::mutex planner;
    std::lock_guard lock(planner);
    fftw_destroy_plan(plan);
  }
  fftw_free(out);
  return Signal(basis, std::move(c));
}

double polynomial_sup_abs(const PolynomialPiece& p, double lo, double hi) {
  double best = std::max(std::abs(p.value(lo)), std::abs(p.value(hi)));
  const int deg = p.degree();
  if (deg <= 1) return best;
  if (deg <= 3) {
    // roots of p'(u) = a + b u + c u^2 in local coordinate u = t - origin
    const double a = p.coeffs[1];
    const double b = 2.0 * p.coeffs[2];
    const double c = deg == 3 ? 3.0 * p.coeffs[3] : 0.0;
    std::vector<double> roots;
    if (c == 0.0) {
      if (b != 0.0) roots.push_back(-a / b);
    } else {
      const double disc = b * b - 4.0 * a * c;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (b + std::copysign(sq, b));
        if (q != 0.0) roots.push_back(q / c);
        if (q != 0.0) roots.push_back(a / q);
        else roots.push_back(0.0);
      }
    }
    for (double u : roots) {
      const double t = u + p.origin;
      if (t > lo && t < hi) best = std::max(best, std::abs(p.value(t)));
    }
    return best;
  }
  // dense fallback for higher degree
  constexpr int kGrid = 4096;
  for (int i = 1; i < kGrid; ++i)
    best = std::max(best, std::abs(p.value(lo + (hi - lo) * i / kGrid)));
  return best;
}

}  // namespace sament
