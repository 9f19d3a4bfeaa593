#include <sstream>

#include "doctest.h"
#include "sament/errors.hpp"
#include "sament/experiment.hpp"
#include "sament/net_io.hpp"

using namespace sament;

namespace {

Json small_run() {
  return Json{{"class", "piecewise_ck(k=0;s=1;A=1)"}, {"ambient_dim", 1024}, {"eps", 1.8},
              {"trials", 6},                          {"seed", 42},         {"tail_samples", 40}};
}

ExperimentConfig load(const Json& j) {
  ConfigReader r(j, "test");
  auto c = read_experiment_config(r);
  r.finish();
  return c;
}

std::string csv_of(const ExperimentResult& r) {
  std::ostringstream os;
  write_trials_csv(os, r.summary, r.trials);
  return os.str();
}

}  // namespace

TEST_SUITE("experiment_cli") {

TEST_CASE("config reader defaults, types and unknown keys") {
  const auto c = load(small_run());
  CHECK(c.p == 0.5);
  CHECK(c.mode == TrialMode::FixedX);
  CHECK(c.cls.ambient_dim == 1024);
  CHECK(canonical(c.cls.spec) == "piecewise_ck(k=0;s=1;K2=1;rho1=0.5;A=1)");

  auto j = small_run();
  j["epsilon"] = 0.5;
  CHECK_THROWS_AS(load(j), UsageError);
  j = small_run();
  j["trials"] = 2.5;
  CHECK_THROWS_AS(load(j), UsageError);
  j = small_run();
  j["trials"] = 0;
  CHECK_THROWS_AS(load(j), UsageError);
  j = small_run();
  j.erase("eps");
  CHECK_THROWS_AS(load(j), UsageError);
  j = small_run();
  j["mode"] = "sideways";
  CHECK_THROWS_AS(load(j), UsageError);
  j = small_run();
  j["delta"] = 0.01;
  j["noise_factor"] = 0.25;
  CHECK_THROWS_AS(load(j), UsageError);
  CHECK_THROWS_AS(ConfigReader(Json::array(), "x"), UsageError);
  CHECK_THROWS_AS(ConfigReader::from_file("/nonexistent/config.json"), UsageError);
}

TEST_CASE("class spec strings round-trip through canonical form") {
  const auto b = BasisSpec::trig(512);
  for (const char* s : {"smooth(k=2;K=32)", "piecewise_ck(k=1;s=2;K2=1;rho1=0.5;A=1)",
                        "piecewise_analytic(kappa=1;eta=1;K=1;rho1=0.5)",
                        "warped(base=smooth(k=2;K=1);s_warp=2;w=0.5)",
                        "additive_span(base=smooth(k=1;K=1);g=hat;r=3;B=0.5)"}) {
    CAPTURE(std::string(s));
    const auto spec = parse_class_spec(s, b);
    CHECK(parse_class_spec(canonical(spec), b).v.index() == spec.v.index());
    CHECK(canonical(parse_class_spec(canonical(spec), b)) == canonical(spec));
  }
  CHECK_THROWS_AS(parse_class_spec("smooth(k=2;q=1)", b), UsageError);
  CHECK_THROWS_AS(parse_class_spec("smooth(k=2;k=3)", b), UsageError);
  CHECK_THROWS_AS(parse_class_spec("circle(r=1)", b), UsageError);
  CHECK_THROWS_AS(parse_class_spec("smooth(k=2", b), UsageError);
}

TEST_CASE("wilson interval") {
  const auto [lo, hi] = wilson_interval(50, 100);
  CHECK(lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(hi == doctest::Approx(0.5962).epsilon(1e-3));
  const auto [l0, h0] = wilson_interval(0, 10);
  CHECK(l0 == 0.0);
  CHECK(h0 == doctest::Approx(0.2775).epsilon(1e-3));
  const auto [l1, h1] = wilson_interval(10, 10);
  CHECK(h1 == 1.0);
  CHECK(l1 == doctest::Approx(0.7225).epsilon(1e-3));
  for (int k = 0; k <= 17; ++k) {
    const auto [a, b] = wilson_interval(k, 17);
    CHECK(a <= k / 17.0);
    CHECK(b >= k / 17.0);
  }
  CHECK_THROWS_AS(wilson_interval(3, 2), UsageError);
}

TEST_CASE("single trial on a net center succeeds") {
  Json j{{"class", "piecewise_ck(k=0;s=1;A=1)"}, {"eps", 0.6}, {"M_max", 1e8}, {"trials", 1}, {"truth", "center"}};
  for (const char* mode : {"fixed-x", "fixed-W"}) {
    j["mode"] = mode;
    const auto r = run_experiment(load(j));
    CHECK_FALSE(r.summary.clamped);
    CHECK(r.summary.success_rate == 1.0);
    CHECK(r.trials[0].projected_distance <= 1e-12);
    CHECK(r.summary.theorem_bound_ok);
  }
}

TEST_CASE("runs are reproducible and independent of the worker count") {
  for (const char* mode : {"fixed-x", "fixed-W"}) {
    auto j = small_run();
    j["mode"] = mode;
    const auto cfg = load(j);
    const auto a = run_experiment(cfg, 1);
    const auto b = run_experiment(cfg, 1);
    const auto c = run_experiment(cfg, 3);
    CHECK(csv_of(a) == csv_of(b));
    CHECK(csv_of(a) == csv_of(c));
    CHECK(summary_json(a.summary).dump(2) == summary_json(c.summary).dump(2));
    CHECK(a.summary.implication_violations == 0);
    CHECK(a.summary.ci_low <= a.summary.success_rate);
    CHECK(a.summary.ci_high >= a.summary.success_rate);
    j["seed"] = 43;
    CHECK(csv_of(run_experiment(load(j))) != csv_of(a));
  }
}

TEST_CASE("trial csv layout") {
  const auto r = run_experiment(load(small_run()));
  std::istringstream is(csv_of(r));
  std::string line;
  std::getline(is, line);
  CHECK(line ==
        "seed,class_id,eps,p,d,n,M,clamped,delta,projected_distance,within_ball,ambient_error,guarantee_met,"
        "distortion_ok");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 13);
  }
  CHECK(rows == 6);
}

TEST_CASE("noise factor sets delta and the lower-bound diagnostic") {
  auto j = small_run();
  j["noise_factor"] = 0.25;
  j["trials"] = 2;
  const auto r = run_experiment(load(j));
  const auto& s = r.summary;
  CHECK(s.delta == doctest::Approx(0.25 * 1.8 / std::sqrt(static_cast<double>(s.d))));
  REQUIRE(s.lower_bound.has_value());
  CHECK(*s.lower_bound_ok == (static_cast<double>(s.n) >= *s.lower_bound));
  CHECK(s.premises == 0);
}

TEST_CASE("jl check") {
  ConfigReader r(Json{{"d", 128}, {"m", 16}, {"seeds", 12}, {"seed", 9}}, "test");
  const auto cfg = read_jl_config(r);
  r.finish();
  const auto a = run_jl_check(cfg, 1);
  const auto b = run_jl_check(cfg, 2);
  CHECK(a.n == required_measurements(0.5, 16));
  CHECK(a.successes == b.successes);
  CHECK(jl_json(a).dump() == jl_json(b).dump());
  CHECK(a.rate >= 0.5);
  CHECK(a.worst_min <= a.worst_max);
}

TEST_CASE("entropy scan recovers the smooth k=1 rate") {
  ConfigReader r(Json{{"class", "smooth(k=1;K=4)"}, {"model", "power"}}, "test");
  const auto cfg = read_entropy_config(r);
  r.finish();
  const auto s = run_entropy_scan(cfg);
  CHECK(s.H.size() == 4);
  CHECK(s.fit.monotone);
  CHECK(s.fit.exponent() == doctest::Approx(1.0).epsilon(0.2));
  std::ostringstream os;
  write_entropy_csv(os, s);
  CHECK(os.str().rfind("eps,M,H,model,fit_a,fit_b,fit_c,r_squared\n", 0) == 0);
}

TEST_CASE("tailfit report") {
  ConfigReader r(Json{{"class", "piecewise_ck(k=0;s=1)"}, {"ambient_dim", 1024}, {"samples", 40},
                      {"validation_samples", 40}},
                 "test");
  const auto cfg = read_tailfit_config(r);
  r.finish();
  const auto rep = run_tailfit(cfg);
  CHECK(rep.fit_check.violations == 0);
  CHECK(rep.model.beta > 0.3);
  CHECK(rep.model.beta < 0.8);
  const auto j = tailfit_json(rep);
  CHECK(j.at("reference_beta") == 1.0);
  CHECK(j.at("beta_minus_reference").get<double>() == doctest::Approx(rep.model.beta - 1.0));
}

TEST_CASE("net file round trip") {
  const auto b = BasisSpec::trig(64);
  const auto spec = parse_class_spec("piecewise_ck(k=0;s=1)", b);
  const auto net = build_net(spec, 1.0, b);
  std::stringstream ss;
  write_net(ss, *net);
  const auto f = read_net(ss);
  CHECK(f.eps1 == 1.0);
  CHECK(f.M == *net->size());
  CHECK(f.spec == canonical(spec));
  REQUIRE(f.centers.size() == f.M);
  for (std::uint64_t i = 0; i < f.M; i += 7) CHECK(distance(f.centers[i], net->center(i)) == 0.0);
  std::stringstream tiny;
  CHECK_THROWS_AS(write_net(tiny, *net, 10.0), UsageError);
}

}  // TEST_SUITE
