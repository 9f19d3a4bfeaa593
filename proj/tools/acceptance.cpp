// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "sament/entropy.hpp"
#include "sament/errors.hpp"
#include "sament/experiment.hpp"
#include "sament/rng.hpp"

using namespace sament;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, auto... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

struct Artifacts {
  std::string dir;

  void write(const std::string& name, const std::string& text) const {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    std::ofstream(std::filesystem::path(dir) / name, std::ios::binary) << text;
  }
};

std::string experiment_csv(const ExperimentResult& r) {
  std::ostringstream os;
  write_trials_csv(os, r.summary, r.trials);
  return os.str();
}

std::string experiment_text(const ExperimentResult& r) {
  return experiment_csv(r) + summary_json(r.summary).dump(2);
}

ExperimentConfig step_config(TrialMode mode, double noise_factor) {
  Json j{{"class", "piecewise_ck(k=0;s=1;A=1)"},
         {"eps", 0.6},
         {"p", 0.5},
         {"trials", 100},
         {"mode", to_string(mode)},
         {"noise_factor", noise_factor},
         {"M_max", 1e8},
         {"seed", 1}};
  ConfigReader r(j, "acceptance");
  auto c = read_experiment_config(r);
  r.finish();
  return c;
}

// Exact trials on a cheap clamped configuration; they add to the implication count.
ExperimentConfig extra_config() {
  ConfigReader r(Json{{"class", "piecewise_ck(k=0;s=1;A=1)"},
                      {"ambient_dim", 1024},
                      {"eps", 1.8},
                      {"trials", 100},
                      {"mode", "fixed-W"},
                      {"seed", 1}},
                 "acceptance");
  auto c = read_experiment_config(r);
  r.finish();
  return c;
}

EntropyScanConfig scan_config(const std::string& cls, GrowthModel model) {
  ConfigReader r(Json{{"class", cls}, {"model", to_string(model)}}, "acceptance");
  auto c = read_entropy_config(r);
  r.finish();
  return c;
}

TailFitConfig tailfit_config() {
  ConfigReader r(Json{{"class", "piecewise_ck(k=1;s=2)"}, {"seed", 1}}, "acceptance");
  auto c = read_tailfit_config(r);
  r.finish();
  return c;
}

std::string jl_text(const JlCheckResult& r) {
  std::ostringstream os;
  write_jl_csv(os, r);
  return os.str() + jl_json(r).dump(2);
}

std::string scan_text(const EntropyScan& s) {
  std::ostringstream os;
  write_entropy_csv(os, s);
  return os.str() + entropy_json(s).dump(2);
}

void log(const std::string& s) { std::fprintf(stderr, "[acceptance] %s\n", s.c_str()); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  Artifacts art;
  int jobs = 1;
  app.add_option("--out", art.dir, "directory for plot-ready CSV/JSON of every run");
  app.add_option("--jobs", jobs, "worker threads for trials")->check(CLI::NonNegativeNumber);
  CLI11_PARSE(app, argc, argv);

  Verdict v[10];
  std::vector<const ExperimentSummary*> runs;

  try {
    // 1: JL distortion at the prescribed measurement count.
    log("jl check");
    auto t0 = Clock::now();
    const JlCheckResult jl = run_jl_check(JlCheckConfig{}, jobs);
    const double jl_time = seconds_since(t0);
    art.write("c1_jl.csv", [&] { std::ostringstream os; write_jl_csv(os, jl); return os.str(); }());
    art.write("c1_jl.json", jl_json(jl).dump(2));
    v[1] = {jl.n == 167 && jl.rate >= 0.5 && jl_time < 60.0,
            format("n=%zu success %d/%d = %.3f (need >= 0.5), %.1f s (limit 60)", jl.n, jl.successes, jl.cfg.seeds,
                   jl.rate, jl_time)};

    // 2: end-to-end reconstruction, both trial framings.
    ExperimentResult exact[2], noisy[2], extra, rerun;
    const TrialMode modes[2] = {TrialMode::FixedX, TrialMode::FixedW};
    t0 = Clock::now();
    for (int m = 0; m < 2; ++m) {
      log("reconstruction, exact, " + to_string(modes[m]));
      exact[m] = run_experiment(step_config(modes[m], 0.0), jobs);
      art.write("c2_" + to_string(modes[m]) + "_trials.csv", experiment_csv(exact[m]));
      art.write("c2_" + to_string(modes[m]) + "_summary.json", summary_json(exact[m].summary).dump(2));
    }
    const double c2_time = seconds_since(t0);
    {
      bool ok = c2_time < 180.0;
      std::string d;
      for (const auto& r : exact) {
        const auto& s = r.summary;
        ok = ok && s.success_rate >= 0.5 && s.ci_low >= 0.4;
        d += format("%s %d/%d = %.3f ci_low %.3f; ", to_string(s.mode).c_str(), s.successes, s.trials,
                    s.success_rate, s.ci_low);
        runs.push_back(&s);
      }
      v[2] = {ok, d + format("d=%zu n=%zu M=%llu, %.1f s (limit 180)", exact[0].summary.d, exact[0].summary.n,
                             static_cast<unsigned long long>(exact[0].summary.M), c2_time)};
    }

    // 7: bounded noise on the same seeds.
    {
      bool ok = true;
      std::string d;
      for (int m = 0; m < 2; ++m) {
        log("reconstruction, noisy, " + to_string(modes[m]));
        noisy[m] = run_experiment(step_config(modes[m], 0.25), jobs);
        art.write("c7_" + to_string(modes[m]) + "_trials.csv", experiment_csv(noisy[m]));
        art.write("c7_" + to_string(modes[m]) + "_summary.json", summary_json(noisy[m].summary).dump(2));
        runs.push_back(&noisy[m].summary);
        const double drop = exact[m].summary.success_rate - noisy[m].summary.success_rate;
        ok = ok && drop <= 0.10 + 1e-12;
        d += format("%s exact %.3f noisy %.3f drop %.1f pts; ", to_string(modes[m]).c_str(),
                    exact[m].summary.success_rate, noisy[m].summary.success_rate, 100.0 * drop);
      }
      v[7] = {ok, d + format("delta=%.3g (limit 10 pts)", noisy[0].summary.delta)};
    }

    // Extra exact trials on a clamped configuration for the implication count.
    log("reconstruction, exact, clamped D=1024");
    {
      extra = run_experiment(extra_config(), jobs);
      art.write("c3_clamped_trials.csv", experiment_csv(extra));
      art.write("c3_clamped_summary.json", summary_json(extra.summary).dump(2));
      runs.push_back(&extra.summary);
    }

    // 5: tail model fitting.
    log("tail fit");
    const TailFitReport tail = run_tailfit(tailfit_config());
    art.write("c5_tailfit.json", tailfit_json(tail).dump(2));
    v[5] = {tail.model.beta >= 0.4 && tail.model.beta <= 0.6 && tail.validation.violations == 0 &&
                tail.validation.norm_violations == 0,
            format("beta=%.4f (band [0.4, 0.6], reference %.1f, difference %+.4f), validation violations %llu of %llu",
                   tail.model.beta, tail.reference_beta, tail.model.beta - tail.reference_beta,
                   static_cast<unsigned long long>(tail.validation.violations),
                   static_cast<unsigned long long>(tail.validation.points))};

    // 6: entropy growth of the constructed nets.
    log("entropy scans");
    t0 = Clock::now();
    const EntropyScan k1 = run_entropy_scan(scan_config("smooth(k=1;K=4)", GrowthModel::Power));
    const EntropyScan k2 = run_entropy_scan(scan_config("smooth(k=2;K=32)", GrowthModel::Power));
    const EntropyScan pa =
        run_entropy_scan(scan_config("piecewise_analytic(kappa=1;eta=1;K=1)", GrowthModel::LogSquare));
    const double c6_time = seconds_since(t0);
    art.write("c6_smooth_k1.csv", [&] { std::ostringstream os; write_entropy_csv(os, k1); return os.str(); }());
    art.write("c6_smooth_k2.csv", [&] { std::ostringstream os; write_entropy_csv(os, k2); return os.str(); }());
    art.write("c6_analytic.csv", [&] { std::ostringstream os; write_entropy_csv(os, pa); return os.str(); }());
    const bool k1_ok = std::abs(k1.fit.exponent() - 1.0) <= 0.2;
    const bool k2_ok = std::abs(k2.fit.exponent() - 0.5) <= 0.1;
    v[6] = {k1_ok && k2_ok && pa.fit.r_squared >= 0.95 && c6_time < 120.0,
            format("k=1 exponent %.3f (target 1 +-20%%), k=2 exponent %.3f (target 0.5 +-20%%), analytic "
                   "logsquare R^2 %.4f (need >= 0.95), %.2f s",
                   k1.fit.exponent(), k2.fit.exponent(), pa.fit.r_squared, c6_time)};

    // 8: greedy cover against the exhaustive optimum.
    log("cover oracles");
    {
      Rng rng = make_stream(1, "cover");
      int violations = 0;
      std::string rows = "set,points,dim,eps,exhaustive,greedy\n";
      for (int t = 0; t < 50; ++t) {
        const auto count = std::uniform_int_distribution<std::size_t>(1, 15)(rng);
        const auto dim = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
        std::vector<double> buf(count * dim);
        for (auto& x : buf) x = uniform(rng, 0.0, 1.0);
        const PointSet ps{buf, count, dim};
        const double eps = uniform(rng, 0.05, 0.6);
        const auto ex = exhaustive_min_cover(ps, eps);
        const auto gr = greedy_cover(ps, eps);
        violations += !(ex <= gr && gr <= 2 * ex);
        rows += format("%d,%zu,%zu,%.17g,%zu,%zu\n", t, ps.count, ps.dim, eps, ex, gr);
      }
      art.write("c8_covers.csv", rows);
      v[8] = {violations == 0, format("%d violations over 50 sets", violations)};
    }

    // 9: byte-identical reruns.
    log("determinism reruns");
    {
      int same = 0, total = 0;
      auto cmp = [&](const std::string& a, const std::string& b) {
        ++total;
        same += a == b;
      };
      cmp(jl_text(jl), jl_text(run_jl_check(JlCheckConfig{}, jobs)));
      rerun = run_experiment(step_config(TrialMode::FixedW, 0.0), jobs);
      runs.push_back(&rerun.summary);
      cmp(experiment_text(exact[1]), experiment_text(rerun));
      cmp(experiment_text(extra), experiment_text(run_experiment(extra_config(), jobs)));
      cmp(tailfit_json(tail).dump(2), tailfit_json(run_tailfit(tailfit_config())).dump(2));
      cmp(scan_text(k1), scan_text(run_entropy_scan(scan_config("smooth(k=1;K=4)", GrowthModel::Power))));
      cmp(scan_text(pa), scan_text(run_entropy_scan(
                             scan_config("piecewise_analytic(kappa=1;eta=1;K=1)", GrowthModel::LogSquare))));
      v[9] = {same == total, format("%d of %d reruns byte-identical", same, total)};
    }

    // 3: no trial meets every premise yet misses the guarantee.
    {
      int trials = 0, premises = 0, violations = 0;
      for (const auto* s : runs) {
        trials += s->trials;
        premises += s->premises;
        violations += s->implication_violations;
      }
      v[3] = {trials >= 500 && violations == 0,
              format("%d trials in %zu runs, %d with all premises, %d violations", trials, runs.size(), premises,
                     violations)};
    }

    // 4: measurement-count bookkeeping.
    {
      int bound_fail = 0, noisy_runs = 0, lower_fail = 0;
      double worst_margin = INFINITY;
      for (const auto* s : runs) {
        bound_fail += !s->theorem_bound_ok;
        if (s->delta > 0.0) {
          ++noisy_runs;
          lower_fail += !s->lower_bound_ok.value_or(false);
          worst_margin = std::min(worst_margin, static_cast<double>(s->n) - s->lower_bound.value_or(INFINITY));
        }
      }
      v[4] = {bound_fail == 0 && lower_fail == 0 && noisy_runs > 0,
              format("upper bound failures %d of %zu preprocess runs; %d of %d noisy runs below the lower bound "
                     "(smallest n - bound %.1f)",
                     bound_fail, runs.size(), lower_fail, noisy_runs, worst_margin)};
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
    return 2;
  }

  bool all = true;
  Json report = Json::array();
  for (int c = 1; c <= 9; ++c) {
    std::printf("criterion %d: %s  %s\n", c, v[c].pass ? "PASS" : "FAIL", v[c].detail.c_str());
    report.push_back({{"criterion", c}, {"pass", v[c].pass}, {"detail", v[c].detail}});
    all = all && v[c].pass;
  }
  art.write("acceptance.json", report.dump(2));
  return all ? 0 : 1;
}
