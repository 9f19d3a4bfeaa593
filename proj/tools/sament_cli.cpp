#include <omp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "sament/errors.hpp"
#include "sament/experiment.hpp"
#include "sament/kernels.hpp"
#include "sament/net_io.hpp"

using namespace sament;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  int jobs = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("config", c.config, "JSON config file")->required();
  cmd->add_option("--seed", c.seed, "master seed (overrides the config)");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--jobs", c.jobs, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
}

ConfigReader load(const Common& c) {
  Json j = read_config_file(c.config);
  if (c.seed) j["seed"] = *c.seed;
  return ConfigReader(std::move(j), c.config);
}

std::filesystem::path out_file(const Common& c, const char* name) {
  std::filesystem::create_directories(c.out);
  return std::filesystem::path(c.out) / name;
}

std::ofstream open_out(const Common& c, const char* name) {
  const auto p = out_file(c, name);
  std::ofstream os(p, std::ios::binary);
  if (!os) throw UsageError("cannot write '" + p.string() + "'");
  return os;
}

void emit_json(const Common& c, const char* name, const Json& j) {
  if (c.out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  open_out(c, name) << j.dump(2) << "\n";
}

void cmd_net_build(const Common& c) {
  auto r = load(c);
  const auto cfg = read_net_build_config(r);
  r.finish();
  const auto net = build_net(cfg.cls.spec, cfg.eps1, cfg.cls.basis(), cfg.net);
  std::printf("net %s eps1=%g M=%s log2M=%.4f\n", net->spec_string().c_str(), cfg.eps1,
              net->size() ? std::to_string(*net->size()).c_str() : "overflow", net->log2_size());
  if (!c.out.empty()) {
    auto os = open_out(c, "net.txt");
    write_net(os, *net, cfg.max_values);
  }
  emit_json(c, "net.json", net_json(*net));
}

void cmd_jl_check(const Common& c) {
  auto r = load(c);
  const auto cfg = read_jl_config(r);
  r.finish();
  const auto res = run_jl_check(cfg, c.jobs);
  std::printf("jl d=%zu m=%zu n=%zu: %d/%d draws inside [0.5, 2] (rate %.4f, 95%% CI [%.4f, %.4f])\n", cfg.d,
              cfg.m, res.n, res.successes, cfg.seeds, res.rate, res.ci_low, res.ci_high);
  if (!c.out.empty()) {
    auto os = open_out(c, "jl.csv");
    write_jl_csv(os, res);
  }
  emit_json(c, "jl.json", jl_json(res));
}

void cmd_experiment_run(const Common& c) {
  auto r = load(c);
  const auto cfg = read_experiment_config(r);
  r.finish();
  const auto res = run_experiment(cfg, c.jobs);
  const auto& s = res.summary;
  std::printf("%s %s eps=%g d=%zu n=%zu M=%llu clamped=%d: %d/%d guarantee met (rate %.4f, 95%% CI [%.4f, %.4f])\n",
              s.class_id.c_str(), to_string(s.mode).c_str(), s.eps, s.d, s.n,
              static_cast<unsigned long long>(s.M), s.clamped, s.successes, s.trials, s.success_rate, s.ci_low,
              s.ci_high);
  std::fprintf(stderr, "wall time %.2f s\n", s.wall_seconds);
  if (!c.out.empty()) {
    auto os = open_out(c, "trials.csv");
    write_trials_csv(os, s, res.trials);
  }
  emit_json(c, "summary.json", summary_json(s));
}

void cmd_entropy_scan(const Common& c) {
  auto r = load(c);
  const auto cfg = read_entropy_config(r);
  r.finish();
  const auto s = run_entropy_scan(cfg);
  write_entropy_csv(std::cout, s);
  if (!c.out.empty()) {
    auto os = open_out(c, "entropy.csv");
    write_entropy_csv(os, s);
  }
  emit_json(c, "entropy.json", entropy_json(s));
}

void cmd_tailfit(const Common& c) {
  auto r = load(c);
  const auto cfg = read_tailfit_config(r);
  r.finish();
  const auto rep = run_tailfit(cfg);
  std::printf("tail %s beta=%.4f C=%.4f R=%.4f validation violations=%llu/%llu (reference beta %g)\n",
              rep.class_id.c_str(), rep.model.beta, rep.model.C, rep.model.R,
              static_cast<unsigned long long>(rep.validation.violations),
              static_cast<unsigned long long>(rep.validation.points), rep.reference_beta);
  emit_json(c, "tailfit.json", tailfit_json(rep));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sampling-entropy reconstruction experiments"};
  app.require_subcommand(1);
  Common c;
  std::function<void(const Common&)> action;

  auto* net = app.add_subcommand("net", "epsilon nets")->require_subcommand(1);
  auto* net_build = net->add_subcommand("build", "construct a net and write it out");
  add_common(net_build, c);
  net_build->callback([&] { action = cmd_net_build; });

  auto* jl = app.add_subcommand("jl", "random projections")->require_subcommand(1);
  auto* jl_check = jl->add_subcommand("check", "empirical all-pairs distortion rate");
  add_common(jl_check, c);
  jl_check->callback([&] { action = cmd_jl_check; });

  auto* ex = app.add_subcommand("experiment", "reconstruction trials")->require_subcommand(1);
  auto* ex_run = ex->add_subcommand("run", "run seeded reconstruction trials");
  add_common(ex_run, c);
  ex_run->callback([&] { action = cmd_experiment_run; });

  auto* en = app.add_subcommand("entropy", "metric entropy of constructed nets")->require_subcommand(1);
  auto* en_scan = en->add_subcommand("scan", "net sizes over eps and a growth fit");
  add_common(en_scan, c);
  en_scan->callback([&] { action = cmd_entropy_scan; });

  auto* tf = app.add_subcommand("tailfit", "fit the coefficient tail model");
  add_common(tf, c);
  tf->callback([&] { action = cmd_tailfit; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (c.jobs > 0) kernels::set_threads(c.jobs);
    action(c);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
  return 0;
}
