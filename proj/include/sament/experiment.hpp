#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "sament/class_spec.hpp"
#include "sament/entropy.hpp"
#include "sament/reconstructor.hpp"
#include "sament/tail_model.hpp"

namespace sament {

using Json = nlohmann::ordered_json;

/// Flat JSON object; every key must be consumed, leftovers are usage errors.
class ConfigReader {
 public:
  explicit ConfigReader(Json obj, std::string origin = "config");
  static ConfigReader from_file(const std::string& path);

  bool has(const std::string& key) const;
  double number(const std::string& key, std::optional<double> fallback = std::nullopt);
  std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt);
  std::uint64_t seed(const std::string& key, std::uint64_t fallback);
  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt);
  bool flag(const std::string& key, bool fallback);
  std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt);
  /// Throws UsageError naming any key that was never read.
  void finish() const;

 private:
  const Json& get(const std::string& key);
  [[noreturn]] void bad(const std::string& key, const std::string& what) const;

  Json obj_;
  std::string origin_;
  std::set<std::string> used_;
};

enum class TrialMode { FixedX, FixedW };

std::string to_string(TrialMode m);
TrialMode parse_trial_mode(const std::string& s);

/// Shared by all subcommands.
struct ClassConfig {
  std::string class_text;
  std::size_t ambient_dim = kDefaultAmbientDim;
  ClassSpec spec;
  BasisSpec basis() const { return BasisSpec::trig(ambient_dim); }
};

ClassConfig read_class_config(ConfigReader& r);
NetOptions read_net_options(ConfigReader& r);

struct ExperimentConfig {
  ClassConfig cls;
  double eps = 0.6;
  double p = 0.5;
  double delta = 0.0;
  /// When > 0, delta = noise_factor * eps / sqrt(d) (d known after preprocessing).
  double noise_factor = 0.0;
  int trials = 100;
  std::uint64_t seed = 1;
  TrialMode mode = TrialMode::FixedX;
  /// "sample" draws x from the class, "center" picks a random net center.
  std::string truth = "sample";
  double jl_constant = 20.0;
  int tail_samples = 100;
  NetOptions net;
};

ExperimentConfig read_experiment_config(ConfigReader& r);

struct TrialRecord {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;  ///< seed of the stream redrawn in this trial
  std::uint64_t index = 0;
  double projected_distance = 0.0;
  bool within_ball = false;
  double ambient_error = 0.0;
  bool guarantee_met = false;
  bool distortion_ok = false;
  double distortion_min = 0.0;
  double distortion_max = 0.0;
  double nearest_distance = 0.0;
  double tail_truth = 0.0;
  double middle = 0.0;
  double tail_center = 0.0;
  bool tails_ok = false;
  /// distortion_ok, exact measurements and both tails within eps1.
  bool premises = false;
};

struct ExperimentSummary {
  std::string class_id;
  TrialMode mode = TrialMode::FixedX;
  std::uint64_t seed = 0;
  double eps = 0.0, eps1 = 0.0, p = 0.0, delta = 0.0, jl_constant = 20.0;
  std::size_t d = 0, n = 0, n_required = 0;
  std::uint64_t M = 0;
  double H = 0.0;  ///< log2 M of the eps1 net
  bool clamped = false;
  TailDecayModel tail;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0, ci_low = 0.0, ci_high = 0.0;
  int within_ball = 0;
  double mean_error = 0.0, max_error = 0.0;
  int distortion_failures = 0;
  int premises = 0;
  int implication_violations = 0;
  bool theorem_bound_ok = false;
  std::optional<double> lower_bound;  ///< only with noisy measurements
  std::optional<bool> lower_bound_ok;
  double wall_seconds = 0.0;  ///< not part of the JSON (kept reproducible)
};

struct ExperimentResult {
  ExperimentSummary summary;
  std::vector<TrialRecord> trials;
};

/// `jobs` worker threads over trials (0: runtime default). Results do not depend on it.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs = 1);

/// Wilson score interval at 95%.
std::pair<double, double> wilson_interval(int successes, int trials);

void write_trials_csv(std::ostream& os, const ExperimentSummary& s, const std::vector<TrialRecord>& rows);
Json summary_json(const ExperimentSummary& s);

// ---- jl check

struct JlCheckConfig {
  std::size_t d = 512;
  std::size_t m = 64;
  double p = 0.5;
  int seeds = 200;
  double jl_constant = 20.0;
  std::size_t n = 0;  ///< 0: required_measurements(p, m)
  std::uint64_t seed = 1;
};

JlCheckConfig read_jl_config(ConfigReader& r);

struct JlCheckResult {
  JlCheckConfig cfg;
  std::size_t n = 0;
  int successes = 0;
  double rate = 0.0, ci_low = 0.0, ci_high = 0.0;
  double worst_min = 1.0, worst_max = 1.0;
  std::vector<DistortionReport> draws;
};

JlCheckResult run_jl_check(const JlCheckConfig& cfg, int jobs = 1);
Json jl_json(const JlCheckResult& r);
void write_jl_csv(std::ostream& os, const JlCheckResult& r);

// ---- entropy scan

struct EntropyScanConfig {
  ClassConfig cls;
  std::vector<double> eps_values{0.4, 0.2, 0.1, 0.05};
  GrowthModel model = GrowthModel::Power;
  NetOptions net;
};

EntropyScanConfig read_entropy_config(ConfigReader& r);

struct EntropyScan {
  std::string class_id;
  std::vector<double> eps;
  std::vector<double> H;
  std::vector<std::optional<std::uint64_t>> M;
  GrowthFit fit;
};

/// Nets are planned, not enumerated, so the scan is limited only by counting.
EntropyScan run_entropy_scan(const EntropyScanConfig& cfg);
void write_entropy_csv(std::ostream& os, const EntropyScan& s);
Json entropy_json(const EntropyScan& s);

// ---- tail fit

struct TailFitConfig {
  ClassConfig cls;
  int samples = 2000;  ///< C is a sample maximum: a fresh draw exceeds it with odds ~ 1 / samples
  int validation_samples = 100;
  std::vector<std::size_t> dims;
  double c_safety = 1.1;
  double reference_beta = 1.0;
  std::uint64_t seed = 1;
};

TailFitConfig read_tailfit_config(ConfigReader& r);

struct TailFitReport {
  std::string class_id;
  TailDecayModel model;
  std::vector<std::size_t> dims;
  TailCheck fit_check;
  TailCheck validation;
  double reference_beta = 1.0;
};

TailFitReport run_tailfit(const TailFitConfig& cfg);
Json tailfit_json(const TailFitReport& r);

/// Tail model used by experiments: `samples` draws from the "tail" stream of `seed`.
TailDecayModel experiment_tail_model(const ClassSpec& spec, BasisSpec basis, int samples, std::uint64_t seed);

/// printf("%.17g").
std::string fmt17(double v);

/// Parses a JSON config file (comments allowed); UsageError if unreadable.
Json read_config_file(const std::string& path);

// ---- net build

struct NetBuildConfig {
  ClassConfig cls;
  double eps1 = 0.1;
  NetOptions net;
  double max_values = 5e7;  ///< refuse to write more stored coefficients than this
};

NetBuildConfig read_net_build_config(ConfigReader& r);
Json net_json(const EpsilonNet& net);

}  // namespace sament
