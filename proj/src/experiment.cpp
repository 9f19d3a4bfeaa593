#include "sament/experiment.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>

#include "sament/errors.hpp"
#include "sament/jl.hpp"
#include "sament/members.hpp"
#include "sament/net.hpp"

namespace sament {

namespace {

constexpr double kZ95 = 1.959963984540054;

// Runs body(i) for i in [0, count) on `jobs` threads and rethrows the first
// exception (by index) after all workers finish.
template <class F>
void parallel_for(std::size_t count, int jobs, F&& body) {
  if (jobs == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  const long long n = static_cast<long long>(count);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for num_threads(threads) schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

const char* tf(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------- config reader

ConfigReader::ConfigReader(Json obj, std::string origin) : obj_(std::move(obj)), origin_(std::move(origin)) {
  SAMENT_REQUIRE(obj_.is_object(), origin_ + ": top level must be a JSON object");
}

Json read_config_file(const std::string& path) {
  std::ifstream is(path);
  SAMENT_REQUIRE(is.good(), "cannot open config file '" + path + "'");
  try {
    return Json::parse(is, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

ConfigReader ConfigReader::from_file(const std::string& path) { return ConfigReader(read_config_file(path), path); }

bool ConfigReader::has(const std::string& key) const { return obj_.contains(key); }

void ConfigReader::bad(const std::string& key, const std::string& what) const {
  throw UsageError(origin_ + ": key '" + key + "' " + what);
}

const Json& ConfigReader::get(const std::string& key) {
  used_.insert(key);
  return obj_.at(key);
}

double ConfigReader::number(const std::string& key, std::optional<double> fallback) {
  if (!has(key)) {
    if (!fallback) bad(key, "is required");
    used_.insert(key);
    return *fallback;
  }
  const Json& v = get(key);
  if (!v.is_number()) bad(key, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(key, "must be finite");
  return x;
}

std::int64_t ConfigReader::integer(const std::string& key, std::optional<std::int64_t> fallback) {
  if (!has(key)) {
    if (!fallback) bad(key, "is required");
    used_.insert(key);
    return *fallback;
  }
  const Json& v = get(key);
  if (!v.is_number_integer()) bad(key, "must be an integer");
  return v.get<std::int64_t>();
}

std::uint64_t ConfigReader::seed(const std::string& key, std::uint64_t fallback) {
  if (!has(key)) {
    used_.insert(key);
    return fallback;
  }
  const Json& v = get(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    bad(key, "must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string ConfigReader::text(const std::string& key, std::optional<std::string> fallback) {
  if (!has(key)) {
    if (!fallback) bad(key, "is required");
    used_.insert(key);
    return *fallback;
  }
  const Json& v = get(key);
  if (!v.is_string()) bad(key, "must be a string");
  return v.get<std::string>();
}

bool ConfigReader::flag(const std::string& key, bool fallback) {
  if (!has(key)) {
    used_.insert(key);
    return fallback;
  }
  const Json& v = get(key);
  if (!v.is_boolean()) bad(key, "must be true or false");
  return v.get<bool>();
}

std::vector<double> ConfigReader::numbers(const std::string& key, std::optional<std::vector<double>> fallback) {
  if (!has(key)) {
    if (!fallback) bad(key, "is required");
    used_.insert(key);
    return *fallback;
  }
  const Json& v = get(key);
  if (!v.is_array()) bad(key, "must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) bad(key, "must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

void ConfigReader::finish() const {
  for (const auto& [k, v] : obj_.items())
    if (!used_.count(k)) throw UsageError(origin_ + ": unknown key '" + k + "'");
}

// ---------------------------------------------------------------- shared pieces

std::string to_string(TrialMode m) { return m == TrialMode::FixedX ? "fixed-x" : "fixed-W"; }

TrialMode parse_trial_mode(const std::string& s) {
  if (s == "fixed-x" || s == "fixed-x-random-W") return TrialMode::FixedX;
  if (s == "fixed-W" || s == "fixed-W-random-x") return TrialMode::FixedW;
  throw UsageError("unknown mode '" + s + "' (expected fixed-x or fixed-W)");
}

ClassConfig read_class_config(ConfigReader& r) {
  ClassConfig c;
  const auto dim = r.integer("ambient_dim", static_cast<std::int64_t>(kDefaultAmbientDim));
  SAMENT_REQUIRE(dim >= 2 && dim <= (1 << 22), "ambient_dim must be in [2, 2^22]");
  c.ambient_dim = static_cast<std::size_t>(dim);
  c.class_text = r.text("class");
  c.spec = parse_class_spec(c.class_text, c.basis());
  return c;
}

NetOptions read_net_options(ConfigReader& r) {
  NetOptions o;
  o.max_net_size = r.number("M_max", o.max_net_size);
  o.budget_split = r.number("budget_split", o.budget_split);
  o.lattice_resolution = static_cast<int>(r.integer("lattice_resolution", o.lattice_resolution));
  SAMENT_REQUIRE(o.max_net_size >= 1.0, "M_max must be at least 1");
  SAMENT_REQUIRE(o.budget_split > 0.0 && o.budget_split < 1.0, "budget_split must lie in (0, 1)");
  SAMENT_REQUIRE(o.lattice_resolution >= 1 && o.lattice_resolution <= 256, "lattice_resolution must be in [1, 256]");
  return o;
}

TailDecayModel experiment_tail_model(const ClassSpec& spec, BasisSpec basis, int samples, std::uint64_t seed) {
  Rng rng = make_stream(seed, "tail");
  TailFitOptions opt;
  opt.n_samples = samples;
  return fit_tail_model(spec, basis, opt, rng);
}

std::pair<double, double> wilson_interval(int successes, int trials) {
  SAMENT_REQUIRE(trials >= 1 && successes >= 0 && successes <= trials, "invalid binomial counts");
  const double n = trials, ph = successes / n, z2 = kZ95 * kZ95;
  const double centre = (ph + z2 / (2 * n)) / (1 + z2 / n);
  const double half = kZ95 * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, std::min(ph, centre - half)), std::min(1.0, std::max(ph, centre + half))};
}

// ---------------------------------------------------------------- experiment

ExperimentConfig read_experiment_config(ConfigReader& r) {
  ExperimentConfig c;
  c.cls = read_class_config(r);
  c.eps = r.number("eps");
  c.p = r.number("p", c.p);
  c.delta = r.number("delta", c.delta);
  c.noise_factor = r.number("noise_factor", c.noise_factor);
  c.trials = static_cast<int>(r.integer("trials", c.trials));
  c.seed = r.seed("seed", c.seed);
  c.mode = parse_trial_mode(r.text("mode", to_string(c.mode)));
  c.truth = r.text("truth", c.truth);
  c.jl_constant = r.number("jl_constant", c.jl_constant);
  c.tail_samples = static_cast<int>(r.integer("tail_samples", c.tail_samples));
  c.net = read_net_options(r);
  SAMENT_REQUIRE(c.eps > 0.0, "eps must be positive");
  SAMENT_REQUIRE(c.p > 0.0 && c.p < 1.0, "p must lie in (0, 1)");
  SAMENT_REQUIRE(c.delta >= 0.0 && c.noise_factor >= 0.0, "delta and noise_factor must be non-negative");
  SAMENT_REQUIRE(!(c.delta > 0.0 && c.noise_factor > 0.0), "give either delta or noise_factor, not both");
  SAMENT_REQUIRE(c.trials >= 1, "trials must be at least 1");
  SAMENT_REQUIRE(c.truth == "sample" || c.truth == "center", "truth must be sample or center");
  SAMENT_REQUIRE(c.jl_constant > 0.0, "jl_constant must be positive");
  SAMENT_REQUIRE(c.tail_samples >= 10, "tail_samples must be at least 10");
  return c;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs) {
  const auto t0 = std::chrono::steady_clock::now();
  const BasisSpec basis = cfg.cls.basis();
  const ClassSpec& spec = cfg.cls.spec;

  ExperimentResult res;
  ExperimentSummary& s = res.summary;
  s.class_id = canonical(spec);
  s.mode = cfg.mode;
  s.seed = cfg.seed;
  s.eps = cfg.eps;
  s.p = cfg.p;
  s.jl_constant = cfg.jl_constant;
  s.trials = cfg.trials;
  s.tail = experiment_tail_model(spec, basis, cfg.tail_samples, cfg.seed);

  PrepareOptions po;
  po.jl_constant = cfg.jl_constant;
  po.net = cfg.net;
  const auto geo = std::make_shared<const NetGeometry>(spec, cfg.eps, s.tail, basis, po);
  s.eps1 = geo->eps1();
  s.d = geo->d();
  s.M = geo->net_size();
  s.H = geo->net().log2_size();
  s.n_required = required_measurements_log(cfg.p, geo->ln_points(), cfg.jl_constant);
  s.n = std::min(s.n_required, s.d);
  s.clamped = s.n_required >= s.d;
  s.delta = cfg.noise_factor > 0.0 ? cfg.noise_factor * cfg.eps / std::sqrt(static_cast<double>(s.d)) : cfg.delta;

  auto draw_truth = [&](Rng& rng) {
    if (cfg.truth == "center")
      return geo->net().center(std::uniform_int_distribution<std::uint64_t>(0, geo->net_size() - 1)(rng));
    return sample_signal(spec, basis, rng);
  };

  std::shared_ptr<const PreparedSampler> fixed_sampler;
  Signal fixed_x;
  if (cfg.mode == TrialMode::FixedW) {
    fixed_sampler = std::make_shared<const PreparedSampler>(geo, cfg.p, stream_seed(cfg.seed, "W", 0));
  } else {
    Rng xr = make_stream(cfg.seed, "x", 0);
    fixed_x = draw_truth(xr);
  }

  res.trials.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(res.trials.size(), jobs, [&](std::size_t t) {
    TrialRecord& rec = res.trials[t];
    rec.trial = t;
    std::shared_ptr<const PreparedSampler> sampler = fixed_sampler;
    Signal x;
    if (cfg.mode == TrialMode::FixedX) {
      rec.seed = stream_seed(cfg.seed, "W", t);
      sampler = std::make_shared<const PreparedSampler>(geo, cfg.p, rec.seed);
      x = fixed_x;
    } else {
      rec.seed = stream_seed(cfg.seed, "x", t);
      Rng xr(rec.seed);
      x = draw_truth(xr);
    }
    Rng nr = make_stream(cfg.seed, "noise", t);
    const auto y = measure(*sampler, x, s.delta, nr);
    StarDiagnostics st;
    const auto o = reconstruct(*sampler, y, s.delta, x, st);
    const auto g = verify_guarantee(*sampler, x, o);
    rec.index = o.index;
    rec.projected_distance = o.projected_distance;
    rec.within_ball = o.within_ball;
    rec.ambient_error = *o.ambient_error;
    rec.guarantee_met = *o.guarantee_met;
    rec.distortion_ok = st.distortion.ok;
    rec.distortion_min = st.distortion.min_ratio;
    rec.distortion_max = st.distortion.max_ratio;
    rec.nearest_distance = st.nearest_distance;
    rec.tail_truth = g.tail_truth;
    rec.middle = g.middle;
    rec.tail_center = g.tail_center;
    rec.tails_ok = g.tail_truth_ok && g.tail_center_ok;
    rec.premises = rec.distortion_ok && s.delta == 0.0 && rec.tails_ok;
  });

  double sum = 0.0;
  for (const auto& r : res.trials) {
    s.successes += r.guarantee_met;
    s.within_ball += r.within_ball;
    sum += r.ambient_error;
    s.max_error = std::max(s.max_error, r.ambient_error);
    s.distortion_failures += !r.distortion_ok;
    s.premises += r.premises;
    s.implication_violations += r.premises && !r.guarantee_met;
  }
  s.mean_error = sum / cfg.trials;
  s.success_rate = static_cast<double>(s.successes) / cfg.trials;
  std::tie(s.ci_low, s.ci_high) = wilson_interval(s.successes, cfg.trials);
  s.theorem_bound_ok = theorem_bound_check(s.n, cfg.p, s.H);
  if (s.delta > 0.0 && s.delta < 1.0) {
    const double H_eps = plan_net(spec, cfg.eps, basis, cfg.net)->log2_size();
    s.lower_bound = measurement_lower_bound(H_eps, s.delta);
    s.lower_bound_ok = static_cast<double>(s.n) >= *s.lower_bound;
  }
  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

void write_trials_csv(std::ostream& os, const ExperimentSummary& s, const std::vector<TrialRecord>& rows) {
  os << "seed,class_id,eps,p,d,n,M,clamped,delta,projected_distance,within_ball,ambient_error,guarantee_met,"
        "distortion_ok\n";
  for (const auto& r : rows) {
    os << r.seed << ',' << s.class_id << ',' << fmt17(s.eps) << ',' << fmt17(s.p) << ',' << s.d << ',' << s.n << ','
       << s.M << ',' << tf(s.clamped) << ',' << fmt17(s.delta) << ',' << fmt17(r.projected_distance) << ','
       << tf(r.within_ball) << ',' << fmt17(r.ambient_error) << ',' << tf(r.guarantee_met) << ','
       << tf(r.distortion_ok) << '\n';
  }
}

Json summary_json(const ExperimentSummary& s) {
  Json j;
  j["class_id"] = s.class_id;
  j["mode"] = to_string(s.mode);
  j["seed"] = s.seed;
  j["eps"] = s.eps;
  j["eps1"] = s.eps1;
  j["p"] = s.p;
  j["delta"] = s.delta;
  j["jl_constant"] = s.jl_constant;
  j["d"] = s.d;
  j["n"] = s.n;
  j["n_required"] = s.n_required;
  j["M"] = s.M;
  j["H_eps1"] = s.H;
  j["clamped"] = s.clamped;
  j["tail_model"] = {{"C", s.tail.C}, {"C_fit", s.tail.C_fit}, {"beta", s.tail.degenerate() ? Json() : Json(s.tail.beta)},
                     {"R", s.tail.R}};
  j["trials"] = s.trials;
  j["successes"] = s.successes;
  j["success_rate"] = s.success_rate;
  j["success_ci95"] = {s.ci_low, s.ci_high};
  j["within_ball"] = s.within_ball;
  j["mean_ambient_error"] = s.mean_error;
  j["max_ambient_error"] = s.max_error;
  j["distortion_failures"] = s.distortion_failures;
  j["implication_premises"] = s.premises;
  j["implication_violations"] = s.implication_violations;
  j["theorem_bound_ok"] = s.theorem_bound_ok;
  j["measurement_lower_bound"] = s.lower_bound ? Json(*s.lower_bound) : Json();
  j["lower_bound_ok"] = s.lower_bound_ok ? Json(*s.lower_bound_ok) : Json();
  return j;
}

// ---------------------------------------------------------------- jl check

JlCheckConfig read_jl_config(ConfigReader& r) {
  JlCheckConfig c;
  c.d = static_cast<std::size_t>(r.integer("d", static_cast<std::int64_t>(c.d)));
  c.m = static_cast<std::size_t>(r.integer("m", static_cast<std::int64_t>(c.m)));
  c.p = r.number("p", c.p);
  c.seeds = static_cast<int>(r.integer("seeds", c.seeds));
  c.jl_constant = r.number("jl_constant", c.jl_constant);
  c.n = static_cast<std::size_t>(r.integer("n", 0));
  c.seed = r.seed("seed", c.seed);
  SAMENT_REQUIRE(c.d >= 1 && c.d <= (1u << 16), "d must be in [1, 65536]");
  SAMENT_REQUIRE(c.m >= 2 && c.m <= 100000, "m must be in [2, 100000]");
  SAMENT_REQUIRE(c.seeds >= 1, "seeds must be at least 1");
  return c;
}

JlCheckResult run_jl_check(const JlCheckConfig& cfg, int jobs) {
  JlCheckResult r;
  r.cfg = cfg;
  r.n = cfg.n > 0 ? cfg.n : required_measurements(cfg.p, cfg.m, cfg.jl_constant);
  SAMENT_REQUIRE(r.n <= cfg.d, "measurement count " + std::to_string(r.n) + " exceeds d = " + std::to_string(cfg.d));
  Rng rng = make_stream(cfg.seed, "points");
  std::normal_distribution<double> g;
  std::vector<double> pts(cfg.m * cfg.d);
  for (std::size_t i = 0; i < cfg.m; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < cfg.d; ++k) {
      const double v = g(rng);
      pts[i * cfg.d + k] = v;
      s += v * v;
    }
    const double inv = 1.0 / std::sqrt(s);
    for (std::size_t k = 0; k < cfg.d; ++k) pts[i * cfg.d + k] *= inv;
  }
  r.draws.resize(static_cast<std::size_t>(cfg.seeds));
  parallel_for(r.draws.size(), jobs, [&](std::size_t t) {
    r.draws[t] = distortion_ok(random_subspace(cfg.d, r.n, stream_seed(cfg.seed, "W", t)), pts, cfg.m);
  });
  for (const auto& d : r.draws) {
    r.successes += d.ok;
    r.worst_min = std::min(r.worst_min, d.min_ratio);
    r.worst_max = std::max(r.worst_max, d.max_ratio);
  }
  r.rate = static_cast<double>(r.successes) / cfg.seeds;
  std::tie(r.ci_low, r.ci_high) = wilson_interval(r.successes, cfg.seeds);
  return r;
}

Json jl_json(const JlCheckResult& r) {
  Json j;
  j["d"] = r.cfg.d;
  j["m"] = r.cfg.m;
  j["p"] = r.cfg.p;
  j["jl_constant"] = r.cfg.jl_constant;
  j["n"] = r.n;
  j["seed"] = r.cfg.seed;
  j["draws"] = r.cfg.seeds;
  j["successes"] = r.successes;
  j["success_rate"] = r.rate;
  j["success_ci95"] = {r.ci_low, r.ci_high};
  j["worst_min_ratio"] = r.worst_min;
  j["worst_max_ratio"] = r.worst_max;
  return j;
}

void write_jl_csv(std::ostream& os, const JlCheckResult& r) {
  os << "draw,seed,min_ratio,max_ratio,ok\n";
  for (std::size_t t = 0; t < r.draws.size(); ++t)
    os << t << ',' << stream_seed(r.cfg.seed, "W", t) << ',' << fmt17(r.draws[t].min_ratio) << ','
       << fmt17(r.draws[t].max_ratio) << ',' << tf(r.draws[t].ok) << '\n';
}

// ---------------------------------------------------------------- entropy scan

EntropyScanConfig read_entropy_config(ConfigReader& r) {
  EntropyScanConfig c;
  c.cls = read_class_config(r);
  c.eps_values = r.numbers("eps_values", c.eps_values);
  c.model = parse_growth_model(r.text("model", to_string(c.model)));
  c.net = read_net_options(r);
  (void)r.seed("seed", 0);  // accepted for a uniform CLI; the scan is deterministic
  for (double e : c.eps_values) SAMENT_REQUIRE(e > 0.0, "eps_values must be positive");
  return c;
}

EntropyScan run_entropy_scan(const EntropyScanConfig& cfg) {
  EntropyScan s;
  s.class_id = canonical(cfg.cls.spec);
  for (double e : cfg.eps_values) {
    const auto net = plan_net(cfg.cls.spec, e, cfg.cls.basis(), cfg.net);
    s.eps.push_back(e);
    s.H.push_back(net->log2_size());
    s.M.push_back(net->size());
  }
  s.fit = fit_growth(s.eps, s.H, cfg.model);
  return s;
}

void write_entropy_csv(std::ostream& os, const EntropyScan& s) {
  os << "eps,M,H,model,fit_a,fit_b,fit_c,r_squared\n";
  const auto& p = s.fit.params;
  for (std::size_t i = 0; i < s.eps.size(); ++i) {
    os << fmt17(s.eps[i]) << ',' << (s.M[i] ? std::to_string(*s.M[i]) : fmt17(std::exp2(s.H[i]))) << ','
       << fmt17(s.H[i]) << ',' << to_string(s.fit.model) << ',' << fmt17(p[0]) << ',' << fmt17(p[1]) << ','
       << (p.size() > 2 ? fmt17(p[2]) : "") << ',' << fmt17(s.fit.r_squared) << '\n';
  }
}

Json entropy_json(const EntropyScan& s) {
  Json j;
  j["class_id"] = s.class_id;
  j["eps"] = s.eps;
  j["H"] = s.H;
  j["model"] = to_string(s.fit.model);
  j["params"] = s.fit.params;
  if (s.fit.model == GrowthModel::Power) j["exponent"] = s.fit.exponent();
  j["r_squared"] = s.fit.r_squared;
  j["monotone"] = s.fit.monotone;
  return j;
}

// ---------------------------------------------------------------- tail fit

TailFitConfig read_tailfit_config(ConfigReader& r) {
  TailFitConfig c;
  c.cls = read_class_config(r);
  c.samples = static_cast<int>(r.integer("samples", c.samples));
  c.validation_samples = static_cast<int>(r.integer("validation_samples", c.validation_samples));
  for (double d : r.numbers("dims", std::vector<double>{})) {
    SAMENT_REQUIRE(d >= 1 && d == std::floor(d), "dims must be positive integers");
    c.dims.push_back(static_cast<std::size_t>(d));
  }
  c.c_safety = r.number("c_safety", c.c_safety);
  c.reference_beta = r.number("reference_beta", c.reference_beta);
  c.seed = r.seed("seed", c.seed);
  SAMENT_REQUIRE(c.samples >= 10, "samples must be at least 10");
  SAMENT_REQUIRE(c.validation_samples >= 1, "validation_samples must be at least 1");
  return c;
}

TailFitReport run_tailfit(const TailFitConfig& cfg) {
  TailFitReport r;
  r.class_id = canonical(cfg.cls.spec);
  r.reference_beta = cfg.reference_beta;
  const BasisSpec basis = cfg.cls.basis();
  r.dims = cfg.dims.empty() ? default_tail_dims(basis.ambient_dim) : cfg.dims;
  Rng fit_rng = make_stream(cfg.seed, "tail");
  std::vector<Signal> fit;
  for (int i = 0; i < cfg.samples; ++i) fit.push_back(sample_signal(cfg.cls.spec, basis, fit_rng));
  r.model = fit_tail_model(fit, r.dims, cfg.c_safety);
  r.fit_check = check_tail_model(r.model, fit, r.dims);
  Rng val_rng = make_stream(cfg.seed, "tail_validation");
  std::vector<Signal> val;
  for (int i = 0; i < cfg.validation_samples; ++i) val.push_back(sample_signal(cfg.cls.spec, basis, val_rng));
  r.validation = check_tail_model(r.model, val, r.dims);
  return r;
}

Json tailfit_json(const TailFitReport& r) {
  auto check = [](const TailCheck& c) {
    return Json{{"points", c.points},
                {"violations", c.violations},
                {"norm_violations", c.norm_violations},
                {"worst_ratio", c.worst_ratio}};
  };
  Json j;
  j["class_id"] = r.class_id;
  j["dims"] = r.dims;
  j["beta"] = r.model.degenerate() ? Json() : Json(r.model.beta);
  j["C"] = r.model.C;
  j["C_fit"] = r.model.C_fit;
  j["R"] = r.model.R;
  j["r_squared"] = r.model.r_squared;
  j["fit_check"] = check(r.fit_check);
  j["validation"] = check(r.validation);
  j["reference_beta"] = r.reference_beta;
  j["beta_minus_reference"] = r.model.degenerate() ? Json() : Json(r.model.beta - r.reference_beta);
  return j;
}

// ---------------------------------------------------------------- net build

NetBuildConfig read_net_build_config(ConfigReader& r) {
  NetBuildConfig c;
  c.cls = read_class_config(r);
  c.eps1 = r.number("eps1");
  c.net = read_net_options(r);
  c.max_values = r.number("max_values", c.max_values);
  (void)r.seed("seed", 0);  // nets are deterministic
  SAMENT_REQUIRE(c.eps1 > 0.0, "eps1 must be positive");
  return c;
}

Json net_json(const EpsilonNet& net) {
  Json j;
  j["class_id"] = net.spec_string();
  j["ambient_dim"] = net.basis().ambient_dim;
  j["eps1"] = net.radius();
  j["M"] = net.size() ? Json(*net.size()) : Json();
  j["log2_M"] = net.log2_size();
  j["atoms"] = net.num_atoms();
  Json log = Json::array();
  for (const auto& f : net.construction_log())
    log.push_back({{"factor", f.name}, {"log2_count", f.log2_count}, {"step", f.step}});
  j["construction"] = log;
  return j;
}

}  // namespace sament
