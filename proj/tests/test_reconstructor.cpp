#include <cmath>

#include "doctest.h"
#include "sament/errors.hpp"
#include "sament/members.hpp"
#include "sament/reconstructor.hpp"

using namespace sament;

namespace {

ClassSpec step_class() { return ClassSpec{PiecewiseCkSpec{0, 1, 1.0, 0.5, 1.0}}; }

TailDecayModel unit_tail() {
  TailDecayModel t;
  t.C = t.C_fit = 1.0;
  t.beta = 0.5;
  t.R = 1.0;
  return t;
}

TailDecayModel fitted_tail(const ClassSpec& spec, BasisSpec b) {
  Rng rng(stream_seed(1, "tail"));
  return fit_tail_model(spec, b, TailFitOptions{}, rng);
}

double norm_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_SUITE("reconstructor") {

TEST_CASE("truncation dimension from the tail model") {
  CHECK(truncation_dimension(unit_tail(), 0.1, 4096) == 100);
  CHECK(truncation_dimension(unit_tail(), 1.0, 4096) == 1);
  CHECK(truncation_dimension(unit_tail(), 2.0, 4096) == 1);
  CHECK_THROWS_AS(truncation_dimension(unit_tail(), 0.001, 4096), AmbientTooSmallError);
  try {
    (void)truncation_dimension(unit_tail(), 0.01, 4096);
    FAIL("expected AmbientTooSmallError");
  } catch (const AmbientTooSmallError& e) {
    CHECK(e.required_dim() == 10000);
  }
  TailDecayModel flat;
  flat.R = 1.0;
  CHECK(truncation_dimension(flat, 0.1, 64) == 1);
}

TEST_CASE("clamped sampler: n = d and the projection is an isometry") {
  const auto b = BasisSpec::trig(512);
  PrepareOptions opt;
  opt.net.max_net_size = 1e8;
  const auto s = preprocess(step_class(), 0.6, 0.5, unit_tail(), b, 11, opt);
  CHECK(s.d() == 100);
  CHECK(s.eps1() == 0.6 / 6.0);
  CHECK(s.n_required() == required_measurements_log(0.5, std::log(static_cast<double>(s.net_size()) + 1.0)));
  CHECK(s.n_required() > 100);
  CHECK(s.clamped());
  CHECK(s.n() == 100);
  Rng rng(4);
  const std::size_t m = 40, d = s.d();
  std::vector<double> pts;
  for (std::size_t i = 0; i < m; ++i) {
    const auto x = s.net().center(std::uniform_int_distribution<std::uint64_t>(0, s.net_size() - 1)(rng));
    pts.insert(pts.end(), x.coeffs().begin(), x.coeffs().begin() + static_cast<std::ptrdiff_t>(d));
  }
  const auto r = distortion_ok(s.op(), pts, m);
  CHECK(r.ok);
  CHECK(r.min_ratio == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.max_ratio == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("unclamped sampler arithmetic") {
  const auto b = BasisSpec::trig(4096);
  TailDecayModel t = unit_tail();
  t.beta = 0.15;
  const auto s = preprocess(step_class(), 1.8, 0.5, t, b, 12);
  CHECK(s.d() == static_cast<std::size_t>(std::ceil(std::pow(1.0 / 0.3, 1.0 / 0.15))));
  CHECK(s.n() == s.n_required());
  CHECK_FALSE(s.clamped());
  CHECK(s.n() == static_cast<std::size_t>(std::ceil(40.0 * std::log(static_cast<double>(s.net_size()) + 1.0))));
}

TEST_CASE("projected centers agree with projecting the center signal") {
  const auto b = BasisSpec::trig(1024);
  const auto spec = step_class();
  const auto s = preprocess(spec, 1.8, 0.5, fitted_tail(spec, b), b, 13);
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto j = std::uniform_int_distribution<std::uint64_t>(0, s.net_size() - 1)(rng);
    const auto a = s.projected_center(j);
    const auto e = apply(s.op(), s.net().center(j));
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(e[k]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("decoding exact center measurements") {
  const auto b = BasisSpec::trig(1024);
  const auto spec = step_class();
  const auto s = preprocess(spec, 1.8, 0.5, fitted_tail(spec, b), b, 14);
  Rng rng(6);
  for (int i = 0; i < 5; ++i) {
    const auto j = std::uniform_int_distribution<std::uint64_t>(0, s.net_size() - 1)(rng);
    const Signal x = s.net().center(j);
    const auto y = measure(s, x, 0.0, rng);
    const auto o = reconstruct(s, y);
    CHECK(o.projected_distance <= 1e-12);
    CHECK(o.within_ball);
    CHECK(distance(s.net().center(o.index), x) <= 1e-12);
    StarDiagnostics st;
    const auto o2 = reconstruct(s, y, 0.0, x, st);
    CHECK(o2.index == o.index);
    CHECK(*o2.guarantee_met);
    const auto g = verify_guarantee(s, x, o2);
    CHECK(g.tail_truth_ok);
    CHECK(g.middle_ok);
    CHECK(g.tail_center_ok);
    CHECK(g.guarantee_met);
  }
}

TEST_CASE("zero signal decodes to a zero center") {
  const auto b = BasisSpec::trig(1024);
  const auto spec = step_class();
  const auto s = preprocess(spec, 1.8, 0.5, fitted_tail(spec, b), b, 15);
  const Signal zero = Signal::zero(b);
  Rng rng(1);
  const auto y = measure(s, zero, 0.0, rng);
  for (double v : y) CHECK(v == 0.0);
  StarDiagnostics st;
  const auto o = reconstruct(s, y, 0.0, zero, st);
  CHECK(*o.ambient_error == 0.0);
  CHECK(verify_guarantee(s, zero, o).total == 0.0);
}

TEST_CASE("measurement noise stays inside its box and widens the acceptance radius") {
  const auto b = BasisSpec::trig(1024);
  const auto spec = step_class();
  const auto s = preprocess(spec, 1.8, 0.5, fitted_tail(spec, b), b, 16);
  Rng rng(7);
  const Signal x = sample_signal(spec, b, rng);
  const auto exact = apply(s.op(), x);
  const double delta = s.eps() / (4.0 * std::sqrt(static_cast<double>(s.d())));
  const auto noisy = measure(s, x, delta, rng);
  for (std::size_t i = 0; i < exact.size(); ++i) CHECK(std::abs(noisy[i] - exact[i]) <= delta * s.op().scale());
  const auto o = reconstruct(s, noisy, delta);
  CHECK(o.acceptance_radius ==
        doctest::Approx(2.0 * s.eps1() + std::sqrt(static_cast<double>(s.n())) * delta * s.op().scale()));
  CHECK_THROWS_AS(measure(s, x, -1.0, rng), UsageError);
  CHECK_THROWS_AS(reconstruct(s, std::vector<double>(s.n() + 1)), UsageError);
}

TEST_CASE("decoding is deterministic") {
  const auto b = BasisSpec::trig(1024);
  const auto spec = step_class();
  const auto tail = fitted_tail(spec, b);
  const auto s1 = preprocess(spec, 1.8, 0.5, tail, b, 17);
  const auto s2 = preprocess(spec, 1.8, 0.5, tail, b, 17);
  Rng rng(8);
  const Signal x = sample_signal(spec, b, rng);
  const auto y1 = apply(s1.op(), x), y2 = apply(s2.op(), x);
  CHECK(y1 == y2);
  const auto o1 = reconstruct(s1, y1), o2 = reconstruct(s2, y2);
  CHECK(o1.index == o2.index);
  CHECK(o1.projected_distance == o2.projected_distance);
}

TEST_CASE("proof chain: distortion and tails imply the guarantee") {
  const auto b = BasisSpec::trig(1024);
  const auto spec = step_class();
  const auto tail = fitted_tail(spec, b);
  auto geo = std::make_shared<const NetGeometry>(spec, 1.8, tail, b);
  int premises = 0, met = 0;
  const int T = 30;
  for (int t = 0; t < T; ++t) {
    const PreparedSampler s(geo, 0.5, stream_seed(3, "W", static_cast<std::uint64_t>(t)));
    Rng rng(stream_seed(3, "x", static_cast<std::uint64_t>(t)));
    const Signal x = sample_signal(spec, b, rng);
    const auto y = measure(s, x, 0.0, rng);
    StarDiagnostics st;
    const auto o = reconstruct(s, y, 0.0, x, st);
    const auto g = verify_guarantee(s, x, o);
    CHECK(st.nearest_distance <= s.eps1());
    CHECK(o.projected_distance <= std::sqrt(static_cast<double>(s.n())) * norm_of(y) + 1.0);
    const bool prem = st.distortion.ok && g.tail_truth_ok && g.tail_center_ok;
    premises += prem;
    met += *o.guarantee_met;
    if (prem) {
      CHECK(o.within_ball);
      CHECK(g.middle_ok);
      CHECK(*o.guarantee_met);
    }
  }
  CHECK(premises >= T / 2);
  CHECK(met >= T / 2);
}

}  // TEST_SUITE
