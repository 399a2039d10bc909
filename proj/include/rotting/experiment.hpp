#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotting/instance.hpp"
#include "rotting/oracle.hpp"
#include "rotting/policy.hpp"

namespace rotting {

/// Bad experiment description: unknown policy or key, invalid value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Instance families

/// Two arms: mu_0 = 0; mu_1 = L/2 for n < T/4 and -L/2 afterwards.
RottingInstance build_two_arm(double L, std::size_t horizon, double sigma = 1.0);

/// Gap values of the ten-arm family: 10^-3 ... 10^1 in ratio sqrt(10).
std::vector<double> ten_arm_gaps();

/// Ten arms: arm 0 constant 0; arm k in 1..9 drops from +gap_k to -gap_k
/// after 1000 pulls. sigma = 1, L = 20.
RottingInstance build_ten_arm(double sigma = 1.0);

struct StepSpec {
  double high = 0.0;
  double low = 0.0;
  PullCount change_at = 0;
};

struct InstanceSpec {
  std::string family = "two_arm";  // two_arm | ten_arm | constant | step
  std::optional<double> L;
  double sigma = 1.0;
  std::vector<double> means;   // constant
  std::vector<StepSpec> steps; // step

  RottingInstance build(std::size_t horizon) const;
  std::string label() const;

 private:
  RottingInstance build_unchecked(std::size_t horizon) const;
};

// ---------------------------------------------------------------------------
// Policies

struct PolicySpec {
  std::string name;
  std::string label;  // defaults to name
  std::map<std::string, double> params;

  const std::string& display() const { return label.empty() ? name : label; }
};

/// Registered names: fewa, eff-fewa, wswa, ucb1, sw-ucb, d-ucb, greedy-last,
/// oracle, round-robin. Unknown names or parameters raise ConfigError.
std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const RottingInstance& instance);

std::vector<std::string> registered_policies();

// ---------------------------------------------------------------------------
// Single runs

struct EpisodeOptions {
  std::uint64_t seed = 0;
  std::uint64_t run_id = 0;
  /// Rounds at which cumulative regret is recorded; sorted, within [1, T].
  std::vector<std::size_t> checkpoints;
  bool keep_trace = false;
  /// Optional precomputed oracle_cumulative(instance, T).
  const std::vector<double>* oracle_curve = nullptr;
  /// Draw every arm's T rewards before the loop and time the loop as a
  /// whole. Rewards are identical to the lazy mode.
  bool presample = false;
};

struct EpisodeResult {
  std::vector<ArmIndex> trace;
  /// Regret against the horizon-t oracle at each checkpoint.
  std::vector<double> checkpoint_regret;
  RegretReport report;
  /// Time spent inside the policy (select + observe), in seconds. With
  /// presampling this is the whole loop, which only adds table lookups.
  double seconds = 0.0;
  std::optional<std::size_t> statistic_count;
};

/// Runs T rounds of select/observe. Rewards of arm i come from the stream
/// (seed, run_id, i + 1), so the n-th pull of an arm sees the same noise
/// whatever policy is being run.
EpisodeResult run_episode(const PolicySpec& spec, const RottingInstance& instance,
                          std::size_t horizon, const EpisodeOptions& options);

// ---------------------------------------------------------------------------
// Experiments

struct SweepSpec {
  double L_min = 0.01;
  double L_max = 10.0;
  std::size_t count = 20;
  std::vector<double> extra;  // merged into the grid

  std::vector<double> grid() const;
};

struct ExperimentConfig {
  std::string name = "experiment";
  InstanceSpec instance;
  std::vector<PolicySpec> policies;
  std::size_t horizon = 10000;
  std::size_t runs = 100;
  std::uint64_t seed = 42;
  std::vector<std::size_t> checkpoints;  // empty: geometric default grid
  std::size_t threads = 0;               // 0: hardware concurrency
  std::string out_dir = "out";
  std::optional<SweepSpec> sweep;

  /// Checks invariants (runs >= 1, checkpoints sorted in [1, T] and ending at
  /// T, non-empty policy list); throws ConfigError.
  void validate() const;
  std::vector<std::size_t> resolved_checkpoints() const;
};

/// About `points` geometrically spaced rounds in [1, T], always including T.
std::vector<std::size_t> geometric_checkpoints(std::size_t horizon, std::size_t points = 50);

struct ResultRow {
  std::uint64_t run_id = 0;
  std::string policy;
  std::string instance;
  std::size_t t = 0;
  double regret = 0.0;
  double seconds = 0.0;
  bool operator==(const ResultRow&) const = default;
};

struct PullRow {
  std::uint64_t run_id = 0;
  std::string policy;
  std::string instance;
  ArmIndex arm = 0;
  PullCount pulls = 0;
  PullCount oracle_pulls = 0;
  double arm_key = 0.0;     // mu_arm(0), the gap for the ten-arm family
  double arm_regret = 0.0;  // per-arm contribution at T
  bool operator==(const PullRow&) const = default;
};

struct SummaryRow {
  std::string policy;
  std::string instance;
  std::size_t t = 0;
  double mean = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
  double stderr_mean = 0.0;
  std::size_t runs = 0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  std::vector<PullRow> pulls;
  std::vector<SummaryRow> summary;

  /// Summary row of a policy at round t, if present.
  const SummaryRow* find(const std::string& policy, std::size_t t) const;
};

/// Linear-interpolation quantile (type 7) of an unsorted sample.
double quantile(std::vector<double> values, double q);

/// Per-(policy, instance, t) mean, 10%/90% quantiles and standard error.
/// Values are sorted before reduction, so the result does not depend on the
/// order of rows.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

/// Runs every (policy, run) pair on a worker pool and aggregates. Run r of
/// every policy uses stream id r. Errors are rethrown as std::runtime_error
/// naming the policy and run.
ResultTable monte_carlo(const ExperimentConfig& config);

struct SweepRow {
  std::string policy;
  double L = 0.0;
  double mean = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
  double stderr_mean = 0.0;
  std::size_t runs = 0;
};

/// Final-regret sweep over the L grid on the two-arm family.
std::vector<SweepRow> sweep_two_arm(const ExperimentConfig& config);

struct BenchRow {
  std::string policy;
  std::size_t runs = 0;
  double total_seconds = 0.0;
  double mean_seconds = 0.0;
  double mean_regret = 0.0;
  std::optional<std::size_t> statistic_count;  // at T, last run
};

/// Sequential single-thread timing of each policy (policy time only).
std::vector<BenchRow> bench_runtime(const ExperimentConfig& config);

}  // namespace rotting
