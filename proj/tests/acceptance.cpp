// Acceptance run: one PASS/FAIL line per criterion, with timings.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "eff_reference.hpp"
#include "rotting/eff_fewa.hpp"
#include "rotting/experiment.hpp"
#include "rotting/oracle.hpp"
#include "support.hpp"

using namespace rotting;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out = body();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < limit_seconds;
  const bool pass = out.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s C%-2d %s: %s [%.1f s, limit %.0f s%s]\n", pass ? "PASS" : "FAIL", id, title,
              out.detail.c_str(), secs, limit_seconds, in_time ? "" : ", exceeded");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Random deterministic step instances shared by C1 and C2.
struct DeterministicCase {
  RottingInstance instance;
  double L;
};

std::vector<DeterministicCase> deterministic_suite() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> log_l(-1.0, 1.0);
  std::vector<DeterministicCase> out;
  for (int k = 0; k < 50; ++k) {
    const std::size_t K = 2 + k % 5;
    const double L = std::pow(10.0, log_l(rng));
    out.push_back({testing::random_step_instance(rng, K, L, 2000, 0.0), L});
  }
  return out;
}

EpisodeResult run_once(const PolicySpec& spec, const RottingInstance& inst, std::size_t T,
                       std::uint64_t seed, std::uint64_t run) {
  EpisodeOptions opts;
  opts.seed = seed;
  opts.run_id = run;
  return run_episode(spec, inst, T, opts);
}

ExperimentConfig two_arm_config(double L, std::vector<PolicySpec> policies, std::size_t runs) {
  ExperimentConfig c;
  c.instance.family = "two_arm";
  c.instance.L = L;
  c.instance.sigma = 1.0;
  c.policies = std::move(policies);
  c.horizon = 10000;
  c.runs = runs;
  c.seed = 42;
  c.checkpoints = {10000};
  c.threads = 0;
  return c;
}

}  // namespace

int main() {
  const auto suite = deterministic_suite();

  criterion(1, "greedy-last regret <= L(K-1), sigma = 0", 10.0, [&] {
    double worst = -1e300;
    bool ok = true;
    for (const auto& c : suite) {
      const auto ep = run_once({"greedy-last", "", {}}, c.instance, 2000, 1, 0);
      const double bound = c.L * static_cast<double>(c.instance.arms() - 1);
      worst = std::max(worst, ep.report.regret - bound);
      ok = ok && ep.report.regret <= bound + 1e-9;
    }
    return Outcome{ok, fmt("50 instances, max(regret - bound) = %.4g", worst)};
  });

  criterion(2, "FEWA(alpha=5) regret <= 2KL, sigma = 0", 30.0, [&] {
    double worst = -1e300;
    bool ok = true;
    for (const auto& c : suite) {
      const auto ep = run_once({"fewa", "", {{"alpha", 5.0}}}, c.instance, 2000, 1, 0);
      const double bound = 2.0 * static_cast<double>(c.instance.arms()) * c.L;
      worst = std::max(worst, ep.report.regret - bound);
      ok = ok && ep.report.regret <= bound + 1e-9;
    }
    return Outcome{ok, fmt("50 instances, max(regret - bound) = %.4g", worst)};
  });

  criterion(3, "stationary overpulls <= 1474 in >= 95 of 100 runs", 300.0, [&] {
    const RottingInstance inst({Constant{1.0}, Constant{0.0}}, 1.0, 1.0);
    const std::size_t cap = 1474;
    const double formula = 1.0 + 32.0 * 5.0 * std::log(10000.0);
    const auto h = h_plus_bound(inst, 10000, 5.0, 1.0, 1.0);
    std::size_t within = 0;
    PullCount most = 0;
    for (std::uint64_t r = 0; r < 100; ++r) {
      const auto ep = run_once({"fewa", "", {{"alpha", 5.0}, {"delta0", 1.0}}}, inst, 10000, 3, r);
      const PullCount n = ep.report.policy.pulls[1];
      most = std::max(most, n);
      if (n <= cap) ++within;
    }
    return Outcome{within >= 95, fmt("%zu/100 within cap (max pulls %zu; 1 + 32 alpha ln T = %.2f, h+ = %zu)",
                                     within, most, formula, h[1])};
  });

  criterion(4, "FEWA(alpha=5) mean regret <= 13 sigma (sqrt(KT) + K) sqrt(ln T) + 2KL", 1200.0, [&] {
    auto c = two_arm_config(1.0, {{"fewa", "FEWA(5)", {{"alpha", 5.0}}}}, 100);
    c.sweep = SweepSpec{};
    const auto rows = sweep_two_arm(c);
    const double K = 2.0, T = 10000.0;
    bool ok = rows.size() == 20;
    double min_slack = 1e300;
    double worst_mean = 0.0;
    for (const auto& r : rows) {
      const double bound = 13.0 * (std::sqrt(K * T) + K) * std::sqrt(std::log(T)) + 2.0 * K * r.L;
      min_slack = std::min(min_slack, bound - r.mean);
      worst_mean = std::max(worst_mean, r.mean);
      ok = ok && r.mean <= bound;
    }
    return Outcome{ok, fmt("%zu L values, largest mean regret %.2f, smallest slack %.1f", rows.size(),
                           worst_mean, min_slack)};
  });

  criterion(5, "FEWA(0.06) beats wSWA(0.2) at L = 4.24; worst L near 2 sqrt(K/T)", 1800.0, [&] {
    const auto at = monte_carlo(two_arm_config(
        4.24, {{"fewa", "FEWA(0.06)", {{"alpha", 0.06}}}, {"wswa", "wSWA(0.2)", {{"alpha", 0.2}}}}, 100));
    const auto* f = at.find("FEWA(0.06)", 10000);
    const auto* w = at.find("wSWA(0.2)", 10000);
    const double margin = 2.0 * (f->stderr_mean + w->stderr_mean);
    const bool order = w->mean - f->mean >= margin;

    auto c = two_arm_config(1.0, {{"fewa", "FEWA(0.06)", {{"alpha", 0.06}}}}, 100);
    c.sweep = SweepSpec{};
    const auto rows = sweep_two_arm(c);
    const auto worst = std::max_element(rows.begin(), rows.end(),
                                        [](const SweepRow& a, const SweepRow& b) { return a.mean < b.mean; });
    const double target = 2.0 * std::sqrt(2.0 / 10000.0);
    const bool near = worst->L >= target / 3.0 && worst->L <= target * 3.0;
    return Outcome{order && near,
                   fmt("L=4.24: FEWA %.2f +- %.2f vs wSWA %.2f +- %.2f (need gap >= %.2f) %s; "
                       "worst L = %.4g (regret %.2f), target %.4g, window [%.4g, %.4g] %s",
                       f->mean, f->stderr_mean, w->mean, w->stderr_mean, margin, order ? "ok" : "FAILED",
                       worst->L, worst->mean, target, target / 3.0, target * 3.0, near ? "ok" : "FAILED")};
  });

  criterion(6, "EFF-FEWA regret <= 1.5x FEWA, time <= 10% of FEWA (10 arms)", 2700.0, [&] {
    ExperimentConfig c;
    c.instance.family = "ten_arm";
    c.horizon = 10000;
    c.runs = 20;
    c.seed = 7;
    c.threads = 1;
    c.policies = {{"fewa", "FEWA", {{"alpha", 0.06}, {"early_exit", 0}}},
                  {"eff-fewa", "EFF-FEWA", {{"alpha", 0.06}, {"early_exit", 0}}}};
    const auto rows = bench_runtime(c);
    const double regret_ratio = rows[1].mean_regret / rows[0].mean_regret;
    const double time_ratio = rows[1].total_seconds / rows[0].total_seconds;

    c.policies = {{"fewa", "FEWA", {{"alpha", 0.06}}}, {"eff-fewa", "EFF-FEWA", {{"alpha", 0.06}}}};
    const auto fast = bench_runtime(c);
    std::printf("INFO C6 with lone-survivor exit: FEWA %.4f s, EFF-FEWA %.4f s per run, ratio %.1f%%\n",
                fast[0].mean_seconds, fast[1].mean_seconds,
                100.0 * fast[1].total_seconds / fast[0].total_seconds);
    return Outcome{regret_ratio <= 1.5 && time_ratio <= 0.10,
                   fmt("regret FEWA %.2f, EFF-FEWA %.2f (ratio %.3f); time per run %.4f s vs %.4f s "
                       "(ratio %.1f%%); EFF statistics at T: %zu",
                       rows[0].mean_regret, rows[1].mean_regret, regret_ratio, rows[0].mean_seconds,
                       rows[1].mean_seconds, 100.0 * time_ratio, rows[1].statistic_count.value_or(0))};
  });

  criterion(7, "regret identity and over/under-pull balance", 5.0, [&] {
    std::mt19937_64 rng(777);
    bool ok = true;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const std::size_t K = 2 + rng() % 5;
      const std::size_t T = 1 + rng() % 500;
      const auto inst = testing::random_table_instance(rng, K, 0.1 + 2.0 * (rng() % 100) / 100.0, 500, 1.0);
      std::vector<PullCount> pulls(K, 0);
      std::discrete_distribution<std::size_t> pick(K, 0.0, 1.0, [](double x) { return 0.05 + x * x; });
      for (std::size_t t = 0; t < T; ++t) ++pulls[pick(rng)];
      const auto r = regret_report(inst, Allocation{pulls}, T);
      const double err = std::abs(r.regret - r.regret_decomposed);
      const double rel = r.regret == 0.0 ? err : err / std::abs(r.regret);
      worst = std::max(worst, rel);
      std::size_t over = 0, under = 0;
      for (const auto& d : r.overpulled) over += d.count;
      for (const auto& d : r.underpulled) under += d.count;
      ok = ok && rel <= 1e-9 && over == under;
    }
    return Outcome{ok, fmt("1000 pairs, worst relative disagreement %.3g", worst)};
  });

  criterion(8, "greedy oracle equals brute-force optimum", 30.0, [&] {
    std::mt19937_64 rng(888);
    std::size_t mismatches = 0;
    for (int k = 0; k < 200; ++k) {
      const std::size_t K = 1 + rng() % 3;
      const std::size_t T = 1 + rng() % 10;
      const auto inst = testing::random_table_instance(rng, K, 1.0 + static_cast<double>(rng() % 4), 10, 0.0, true);
      const auto bf = brute_force_allocation(inst, T);
      if (bf.value != oracle_cumreward(inst, oracle_allocation(inst, T))) ++mismatches;
    }
    return Outcome{mismatches == 0, fmt("200 instances, %zu mismatches", mismatches)};
  });

  criterion(9, "EFF statistics equal their reference blocks; size <= 2K log2 t", 30.0, [&] {
    std::mt19937_64 rng(999);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::size_t checked = 0, bad_values = 0, bad_size = 0;
    auto verify = [&](const EffStatStore& store, ArmIndex arm, const std::vector<double>& samples) {
      const std::size_t N = samples.size();
      for (std::size_t j = 0; j < store.levels(arm); ++j) {
        const auto block = testing::eff_block(N, j);
        ++checked;
        if (store.current(arm, j) != testing::block_average(samples, block) ||
            store.level(arm, j).pending_count != block.pending) {
          ++bad_values;
        }
      }
      if (store.levels(arm) != static_cast<std::size_t>(std::floor(std::log2(N))) + 1) ++bad_values;
    };
    for (int s = 0; s < 500; ++s) {
      const std::size_t K = 2 + rng() % 4;
      const std::size_t length = 1 + rng() % 4096;
      const double skew = 1.0 + static_cast<double>(rng() % 5);
      std::discrete_distribution<ArmIndex> pick(K, 0.0, 1.0, [&](double x) { return std::pow(x, skew); });
      EffStatStore store(K);
      std::vector<std::vector<double>> samples(K);
      for (std::size_t t = 1; t <= length; ++t) {
        const ArmIndex arm = pick(rng);
        const double r = noise(rng);
        store.update(arm, r);
        samples[arm].push_back(r);
        verify(store, arm, samples[arm]);
        if (t >= 2 && static_cast<double>(store.statistic_count()) > 2.0 * K * std::log2(t)) ++bad_size;
      }
      for (ArmIndex i = 0; i < K; ++i) {
        if (!samples[i].empty()) verify(store, i, samples[i]);
      }
    }
    return Outcome{bad_values == 0 && bad_size == 0,
                   fmt("500 sequences, %zu statistics checked, %zu mismatches, %zu size violations",
                       checked, bad_values, bad_size)};
  });

  criterion(10, "stationary: FEWA(0.06) mean regret <= 2.5x UCB1", 600.0, [&] {
    ExperimentConfig c;
    c.instance.family = "constant";
    c.instance.means = {1.0, 0.0};
    c.instance.L = 1.0;
    c.policies = {{"fewa", "FEWA(0.06)", {{"alpha", 0.06}}}, {"ucb1", "UCB1", {}}};
    c.horizon = 10000;
    c.runs = 100;
    c.seed = 10;
    c.checkpoints = {10000};
    const auto table = monte_carlo(c);
    const double f = table.find("FEWA(0.06)", 10000)->mean;
    const double u = table.find("UCB1", 10000)->mean;
    return Outcome{f <= 2.5 * u, fmt("FEWA %.2f, UCB1 %.2f, ratio %.3f", f, u, f / u)};
  });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
