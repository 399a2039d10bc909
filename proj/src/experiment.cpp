#include "rotting/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "rotting/baselines.hpp"
#include "rotting/eff_fewa.hpp"
#include "rotting/fewa.hpp"
#include "rotting/rng.hpp"

namespace rotting {

// ---------------------------------------------------------------------------
// Instances

RottingInstance build_two_arm(double L, std::size_t horizon, double sigma) {
  if (!(L > 0.0)) throw ConfigError("two_arm: L must be > 0");
  if (horizon < 4) throw ConfigError("two_arm: horizon must be >= 4");
  const PullCount change_at = (horizon + 3) / 4;  // first n with n >= T/4
  return RottingInstance({Constant{0.0}, StepDrop{L / 2.0, -L / 2.0, change_at}}, sigma, L,
                         horizon);
}

std::vector<double> ten_arm_gaps() {
  std::vector<double> gaps;
  for (int k = 0; k < 9; ++k) gaps.push_back(std::pow(10.0, -3.0 + 0.5 * k));
  return gaps;
}

RottingInstance build_ten_arm(double sigma) {
  std::vector<MeanFunction> means{Constant{0.0}};
  for (double gap : ten_arm_gaps()) means.emplace_back(StepDrop{gap, -gap, 1000});
  return RottingInstance(std::move(means), sigma, 20.0);
}

RottingInstance InstanceSpec::build(std::size_t horizon) const {
  try {
    return build_unchecked(horizon);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("instance: ") + e.what());
  }
}

RottingInstance InstanceSpec::build_unchecked(std::size_t horizon) const {
  if (family == "two_arm") {
    if (!L) throw ConfigError("two_arm instance needs L");
    return build_two_arm(*L, horizon, sigma);
  }
  if (family == "ten_arm") return build_ten_arm(sigma);
  if (family == "constant") {
    if (means.empty()) throw ConfigError("constant instance needs means");
    std::vector<MeanFunction> fns;
    for (double m : means) fns.emplace_back(Constant{m});
    return RottingInstance(std::move(fns), sigma, L.value_or(1.0), horizon);
  }
  if (family == "step") {
    if (steps.empty()) throw ConfigError("step instance needs arms");
    if (!L) throw ConfigError("step instance needs L");
    std::vector<MeanFunction> fns;
    for (const auto& s : steps) fns.emplace_back(StepDrop{s.high, s.low, s.change_at});
    return RottingInstance(std::move(fns), sigma, *L, horizon);
  }
  throw ConfigError("unknown instance family '" + family + "'");
}

std::string InstanceSpec::label() const {
  std::ostringstream os;
  os << family;
  if (family == "two_arm" && L) os << "(L=" << *L << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// Policy registry

namespace {

struct ParamReader {
  const PolicySpec& spec;
  std::set<std::string> allowed;

  double get(const std::string& key, double fallback) {
    allowed.insert(key);
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
  }

  void finish() const {
    for (const auto& [key, value] : spec.params) {
      if (!allowed.count(key)) {
        throw ConfigError("policy '" + spec.name + "': unknown parameter '" + key + "'");
      }
    }
  }
};

std::size_t to_count(double v, const std::string& what) {
  if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError(what + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

std::vector<std::string> registered_policies() {
  return {"fewa", "eff-fewa", "wswa", "ucb1", "sw-ucb", "d-ucb", "greedy-last", "oracle",
          "round-robin"};
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const RottingInstance& instance) {
  ParamReader p{spec, {}};
  const std::size_t K = instance.arms();
  std::unique_ptr<Policy> out;
  try {
    if (spec.name == "fewa" || spec.name == "eff-fewa") {
      ConfidenceSchedule schedule{p.get("delta0", 1.0), p.get("alpha", 0.06)};
      const double sigma = p.get("sigma", instance.sigma());
      const double early = p.get("early_exit", 1.0);
      if (early != 0.0 && early != 1.0) throw ConfigError("early_exit must be 0 or 1");
      if (spec.name == "fewa") {
        out = std::make_unique<FewaPolicy>(K, sigma, schedule, early == 1.0);
      } else {
        out = std::make_unique<EffFewaPolicy>(K, sigma, schedule, early == 1.0);
      }
    } else if (spec.name == "wswa") {
      const double alpha = p.get("alpha", 0.2);
      const double sigma = p.get("sigma", instance.sigma());
      out = std::make_unique<WswaPolicy>(K, default_wswa_window(alpha, sigma));
    } else if (spec.name == "ucb1") {
      const double xi = p.get("xi", 1.0);
      out = std::make_unique<Ucb1Policy>(K, xi, p.get("sigma", instance.sigma()));
    } else if (spec.name == "sw-ucb") {
      const std::size_t tau = to_count(p.get("tau", 2000.0), "sw-ucb tau");
      const double xi = p.get("xi", 0.6);
      out = std::make_unique<SwUcbPolicy>(K, tau, xi, p.get("sigma", instance.sigma()));
    } else if (spec.name == "d-ucb") {
      const double gamma = p.get("gamma", 0.999);
      const double xi = p.get("xi", 0.6);
      out = std::make_unique<DUcbPolicy>(K, gamma, xi, p.get("sigma", instance.sigma()));
    } else if (spec.name == "greedy-last") {
      out = std::make_unique<GreedyLastPolicy>(K);
    } else if (spec.name == "oracle") {
      out = std::make_unique<OraclePolicy>(instance);
    } else if (spec.name == "round-robin") {
      out = std::make_unique<RoundRobin>(K);
    } else {
      throw ConfigError("unknown policy '" + spec.name + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  p.finish();
  return out;
}

// ---------------------------------------------------------------------------
// Episodes

EpisodeResult run_episode(const PolicySpec& spec, const RottingInstance& instance,
                          std::size_t horizon, const EpisodeOptions& options) {
  using Clock = std::chrono::steady_clock;
  auto policy = make_policy(spec, instance);

  std::vector<double> own_curve;
  const std::vector<double>* curve = options.oracle_curve;
  if (curve == nullptr || curve->size() < horizon + 1) {
    own_curve = oracle_cumulative(instance, horizon);
    curve = &own_curve;
  }

  std::vector<RngStream> streams;
  streams.reserve(instance.arms());
  for (ArmIndex i = 0; i < instance.arms(); ++i) streams.emplace_back(options.seed, options.run_id, i + 1);

  EpisodeResult result;
  if (options.keep_trace) result.trace.reserve(horizon);
  result.checkpoint_regret.reserve(options.checkpoints.size());

  Allocation pulls{std::vector<PullCount>(instance.arms(), 0)};
  double j_pi = 0.0;
  Clock::duration busy{};
  auto next_checkpoint = options.checkpoints.begin();
  auto record = [&](std::size_t t, ArmIndex arm) {
    if (options.keep_trace) result.trace.push_back(arm);
    while (next_checkpoint != options.checkpoints.end() && *next_checkpoint == t) {
      result.checkpoint_regret.push_back((*curve)[t] - j_pi);
      ++next_checkpoint;
    }
  };

  if (options.presample) {
    std::vector<std::vector<double>> means(instance.arms()), rewards(instance.arms());
    for (ArmIndex i = 0; i < instance.arms(); ++i) {
      means[i].reserve(horizon);
      rewards[i].reserve(horizon);
      for (PullCount n = 0; n < horizon; ++n) {
        means[i].push_back(instance.mean_at(i, n));
        rewards[i].push_back(sample_reward(instance, i, n, streams[i]));
      }
    }
    const auto t0 = Clock::now();
    for (std::size_t t = 1; t <= horizon; ++t) {
      const ArmIndex arm = policy->select(t);
      const PullCount n = pulls.pulls.at(arm)++;
      j_pi += means[arm][n];
      policy->observe(arm, rewards[arm][n]);
      record(t, arm);
    }
    busy = Clock::now() - t0;
  } else {
    for (std::size_t t = 1; t <= horizon; ++t) {
      const auto t0 = Clock::now();
      const ArmIndex arm = policy->select(t);
      const auto t1 = Clock::now();
      const PullCount n = pulls.pulls.at(arm)++;
      const double reward = sample_reward(instance, arm, n, streams[arm]);
      j_pi += instance.mean_at(arm, n);
      const auto t2 = Clock::now();
      policy->observe(arm, reward);
      busy += (t1 - t0) + (Clock::now() - t2);
      record(t, arm);
    }
  }
  result.seconds = std::chrono::duration<double>(busy).count();
  result.report = regret_report(instance, pulls, horizon);
  result.statistic_count = policy->statistic_count();
  return result;
}

// ---------------------------------------------------------------------------
// Experiment configuration

std::vector<double> SweepSpec::grid() const {
  if (!(L_min > 0.0) || !(L_max >= L_min) || count == 0) {
    throw ConfigError("sweep: need 0 < L_min <= L_max and count >= 1");
  }
  std::vector<double> out;
  if (count == 1) {
    out.push_back(L_min);
  } else {
    const double lo = std::log10(L_min);
    const double hi = std::log10(L_max);
    for (std::size_t k = 0; k < count; ++k) {
      out.push_back(std::pow(10.0, lo + (hi - lo) * static_cast<double>(k) /
                                           static_cast<double>(count - 1)));
    }
  }
  for (double e : extra) {
    if (!(e > 0.0)) throw ConfigError("sweep: extra L values must be > 0");
    out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> geometric_checkpoints(std::size_t horizon, std::size_t points) {
  std::vector<std::size_t> out;
  if (horizon == 0) return out;
  const double log_t = std::log(static_cast<double>(horizon));
  for (std::size_t k = 0; k < points; ++k) {
    const double frac = points == 1 ? 1.0 : static_cast<double>(k) / static_cast<double>(points - 1);
    out.push_back(std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(std::exp(frac * log_t))), 1, horizon));
  }
  out.push_back(horizon);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void ExperimentConfig::validate() const {
  if (runs == 0) throw ConfigError("runs must be >= 1");
  if (horizon == 0) throw ConfigError("horizon must be >= 1");
  if (policies.empty()) throw ConfigError("at least one policy is required");
  std::set<std::string> labels;
  for (const auto& p : policies) {
    if (!labels.insert(p.display()).second) {
      throw ConfigError("duplicate policy label '" + p.display() + "'");
    }
  }
  if (!checkpoints.empty()) {
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) ||
        std::adjacent_find(checkpoints.begin(), checkpoints.end()) != checkpoints.end()) {
      throw ConfigError("checkpoints must be strictly increasing");
    }
    if (checkpoints.front() < 1 || checkpoints.back() > horizon) {
      throw ConfigError("checkpoints must lie in [1, horizon]");
    }
  }
}

std::vector<std::size_t> ExperimentConfig::resolved_checkpoints() const {
  if (checkpoints.empty()) return geometric_checkpoints(horizon);
  auto out = checkpoints;
  if (out.back() != horizon) out.push_back(horizon);
  return out;
}

// ---------------------------------------------------------------------------
// Aggregation

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::domain_error("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

namespace {

SummaryRow reduce(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  SummaryRow s;
  s.runs = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    s.stderr_mean = std::sqrt(var / static_cast<double>(values.size()));
  }
  s.q10 = quantile(values, 0.1);
  s.q90 = quantile(values, 0.9);
  return s;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  std::map<std::tuple<std::string, std::string, std::size_t>, std::vector<double>> groups;
  std::vector<std::tuple<std::string, std::string, std::size_t>> order;
  for (const auto& r : rows) {
    auto key = std::make_tuple(r.policy, r.instance, r.t);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(r.regret);
  }
  std::vector<SummaryRow> out;
  out.reserve(order.size());
  for (const auto& key : order) {
    SummaryRow s = reduce(groups[key]);
    std::tie(s.policy, s.instance, s.t) = key;
    out.push_back(std::move(s));
  }
  return out;
}

const SummaryRow* ResultTable::find(const std::string& policy, std::size_t t) const {
  for (const auto& s : summary) {
    if (s.policy == policy && s.t == t) return &s;
  }
  return nullptr;
}

namespace {

std::size_t worker_count(std::size_t requested, std::size_t tasks) {
  std::size_t n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, tasks));
}

// Runs fn(task) for task in [0, tasks) on a pool; the first failure is
// rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t tasks, std::size_t threads, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= tasks || failed.load()) return;
      try {
        fn(task);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  const std::size_t n = worker_count(threads, tasks);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

struct RunGrid {
  std::vector<EpisodeResult> episodes;  // [policy * runs + run]
};

RunGrid run_all(const ExperimentConfig& config, const RottingInstance& instance,
                const std::vector<std::size_t>& checkpoints, std::size_t threads) {
  const auto curve = oracle_cumulative(instance, config.horizon);
  // Surface registry errors before spawning work.
  for (const auto& p : config.policies) make_policy(p, instance);

  RunGrid grid;
  grid.episodes.resize(config.policies.size() * config.runs);
  parallel_for(grid.episodes.size(), threads, [&](std::size_t task) {
    const std::size_t policy = task / config.runs;
    const std::size_t run = task % config.runs;
    EpisodeOptions opts;
    opts.seed = config.seed;
    opts.run_id = run;
    opts.checkpoints = checkpoints;
    opts.oracle_curve = &curve;
    try {
      grid.episodes[task] = run_episode(config.policies[policy], instance, config.horizon, opts);
    } catch (const std::exception& e) {
      throw std::runtime_error("policy '" + config.policies[policy].display() + "' run " +
                               std::to_string(run) + ": " + e.what());
    }
  });
  return grid;
}

}  // namespace

ResultTable monte_carlo(const ExperimentConfig& config) {
  config.validate();
  const auto instance = config.instance.build(config.horizon);
  const auto checkpoints = config.resolved_checkpoints();
  const auto grid = run_all(config, instance, checkpoints, config.threads);
  const std::string label = config.instance.label();

  ResultTable table;
  for (std::size_t p = 0; p < config.policies.size(); ++p) {
    const std::string& name = config.policies[p].display();
    for (std::size_t r = 0; r < config.runs; ++r) {
      const EpisodeResult& ep = grid.episodes[p * config.runs + r];
      for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        table.rows.push_back({r, name, label, checkpoints[c], ep.checkpoint_regret[c], ep.seconds});
      }
      for (ArmIndex i = 0; i < instance.arms(); ++i) {
        table.pulls.push_back({r, name, label, i, ep.report.policy.pulls[i],
                               ep.report.oracle.pulls[i], instance.mean_at(i, 0),
                               ep.report.per_arm_regret[i]});
      }
    }
  }
  table.summary = summarize(table.rows);
  return table;
}

std::vector<SweepRow> sweep_two_arm(const ExperimentConfig& config) {
  config.validate();
  if (!config.sweep) throw ConfigError("sweep section missing");
  if (config.instance.family != "two_arm") throw ConfigError("sweep requires the two_arm family");
  std::vector<SweepRow> out;
  for (double L : config.sweep->grid()) {
    ExperimentConfig c = config;
    c.instance.L = L;
    c.checkpoints = {config.horizon};
    const auto instance = c.instance.build(c.horizon);
    const auto grid = run_all(c, instance, c.checkpoints, c.threads);
    for (std::size_t p = 0; p < c.policies.size(); ++p) {
      std::vector<double> finals;
      for (std::size_t r = 0; r < c.runs; ++r) {
        finals.push_back(grid.episodes[p * c.runs + r].report.regret);
      }
      const SummaryRow s = reduce(std::move(finals));
      out.push_back({c.policies[p].display(), L, s.mean, s.q10, s.q90, s.stderr_mean, s.runs});
    }
  }
  return out;
}

std::vector<BenchRow> bench_runtime(const ExperimentConfig& config) {
  config.validate();
  const auto instance = config.instance.build(config.horizon);
  const auto curve = oracle_cumulative(instance, config.horizon);
  std::vector<BenchRow> out;
  for (const auto& spec : config.policies) {
    BenchRow row;
    row.policy = spec.display();
    row.runs = config.runs;
    double regret = 0.0;
    for (std::size_t r = 0; r < config.runs; ++r) {
      EpisodeOptions opts;
      opts.seed = config.seed;
      opts.run_id = r;
      opts.oracle_curve = &curve;
      opts.presample = true;
      const auto ep = run_episode(spec, instance, config.horizon, opts);
      row.total_seconds += ep.seconds;
      regret += ep.report.regret;
      row.statistic_count = ep.statistic_count;
    }
    row.mean_seconds = row.total_seconds / static_cast<double>(config.runs);
    row.mean_regret = regret / static_cast<double>(config.runs);
    out.push_back(row);
  }
  return out;
}

}  // namespace rotting
