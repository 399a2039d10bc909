#include "rotting/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace rotting {

std::size_t Allocation::horizon() const {
  return std::accumulate(pulls.begin(), pulls.end(), std::size_t{0});
}

std::vector<ArmIndex> oracle_trace(const RottingInstance& instance, std::size_t horizon) {
  struct Entry {
    double value;
    ArmIndex arm;
  };
  // Top of the queue: largest value, then lowest arm index.
  auto worse = [](const Entry& a, const Entry& b) {
    return a.value < b.value || (a.value == b.value && a.arm > b.arm);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> queue(worse);
  std::vector<PullCount> pulls(instance.arms(), 0);
  for (ArmIndex i = 0; i < instance.arms(); ++i) queue.push({instance.mean_at(i, 0), i});

  std::vector<ArmIndex> trace;
  trace.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    const Entry top = queue.top();
    queue.pop();
    trace.push_back(top.arm);
    const PullCount n = ++pulls[top.arm];
    queue.push({instance.mean_at(top.arm, n), top.arm});
  }
  return trace;
}

Allocation oracle_allocation(const RottingInstance& instance, std::size_t horizon) {
  Allocation a{std::vector<PullCount>(instance.arms(), 0)};
  for (ArmIndex i : oracle_trace(instance, horizon)) ++a.pulls[i];
  return a;
}

std::vector<double> oracle_cumulative(const RottingInstance& instance, std::size_t horizon) {
  std::vector<double> j(horizon + 1, 0.0);
  std::vector<PullCount> pulls(instance.arms(), 0);
  const auto trace = oracle_trace(instance, horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    const ArmIndex arm = trace[t];
    j[t + 1] = j[t] + instance.mean_at(arm, pulls[arm]++);
  }
  return j;
}

double oracle_cumreward(const RottingInstance& instance, const Allocation& allocation) {
  if (allocation.pulls.size() != instance.arms()) {
    throw std::domain_error("allocation has " + std::to_string(allocation.pulls.size()) +
                            " arms, instance has " + std::to_string(instance.arms()));
  }
  double total = 0.0;
  for (ArmIndex i = 0; i < instance.arms(); ++i) {
    double arm_sum = 0.0;
    for (PullCount s = 0; s < allocation.pulls[i]; ++s) arm_sum += instance.mean_at(i, s);
    total += arm_sum;
  }
  return total;
}

RegretReport regret_report(const RottingInstance& instance, const Allocation& pi_allocation,
                           std::size_t horizon, std::optional<HPlusParams> h_plus) {
  if (pi_allocation.pulls.size() != instance.arms()) {
    throw std::domain_error("allocation arm count does not match instance");
  }
  if (pi_allocation.horizon() != horizon) {
    throw std::domain_error("allocation sums to " + std::to_string(pi_allocation.horizon()) +
                            ", horizon is " + std::to_string(horizon));
  }
  RegretReport r;
  r.horizon = horizon;
  r.oracle = oracle_allocation(instance, horizon);
  r.policy = pi_allocation;
  r.j_star = oracle_cumreward(instance, r.oracle);
  r.j_pi = oracle_cumreward(instance, pi_allocation);
  r.regret = r.j_star - r.j_pi;

  r.per_arm_regret.assign(instance.arms(), 0.0);
  double under = 0.0;
  double over = 0.0;
  r.mu_plus = -std::numeric_limits<double>::infinity();
  for (ArmIndex i = 0; i < instance.arms(); ++i) {
    const PullCount star = r.oracle.pulls[i];
    const PullCount pi = pi_allocation.pulls[i];
    r.mu_plus = std::max(r.mu_plus, instance.mean_at(i, pi));
    double part = 0.0;
    if (star > pi) {
      for (PullCount s = pi; s < star; ++s) part += instance.mean_at(i, s);
      r.underpulled.push_back({i, star - pi});
      under += part;
      r.per_arm_regret[i] = part;
    } else if (pi > star) {
      for (PullCount s = star; s < pi; ++s) part += instance.mean_at(i, s);
      r.overpulled.push_back({i, pi - star});
      over += part;
      r.per_arm_regret[i] = -part;
    }
  }
  r.regret_decomposed = under - over;

  if (h_plus) r.h_plus = h_plus_bound(instance, horizon, h_plus->alpha, h_plus->sigma, h_plus->delta0);
  return r;
}

BruteForceResult brute_force_allocation(const RottingInstance& instance, std::size_t horizon) {
  const std::size_t K = instance.arms();
  double sequences = 1.0;
  for (std::size_t t = 0; t < horizon; ++t) sequences *= static_cast<double>(K);
  if (sequences > 1e7) {
    throw std::length_error("brute force refused: K^T = " + std::to_string(sequences) +
                            " exceeds 1e7");
  }

  // prefix[i][n] = sum of the first n means of arm i, summed in pull order.
  std::vector<std::vector<double>> prefix(K, std::vector<double>(horizon + 1, 0.0));
  for (ArmIndex i = 0; i < K; ++i) {
    for (PullCount s = 0; s < horizon; ++s) prefix[i][s + 1] = prefix[i][s] + instance.mean_at(i, s);
  }

  BruteForceResult best;
  best.value = -std::numeric_limits<double>::infinity();
  std::vector<PullCount> counts(K, 0);
  auto visit = [&](auto&& self, ArmIndex arm, std::size_t remaining) -> void {
    if (arm + 1 == K) {
      counts[arm] = remaining;
      double total = 0.0;
      for (ArmIndex i = 0; i < K; ++i) total += prefix[i][counts[i]];
      if (total > best.value) {
        best.value = total;
        best.allocation.pulls = counts;
      }
      return;
    }
    for (std::size_t n = 0; n <= remaining; ++n) {
      counts[arm] = n;
      self(self, arm + 1, remaining - n);
    }
  };
  visit(visit, 0, horizon);
  return best;
}

std::vector<std::size_t> h_plus_bound(const RottingInstance& instance, std::size_t horizon,
                                      double alpha, double sigma, double delta0) {
  if (horizon == 0) throw std::domain_error("h_plus_bound: horizon must be >= 1");
  const Allocation star = oracle_allocation(instance, horizon);

  double reference = std::numeric_limits<double>::infinity();
  for (ArmIndex j = 0; j < instance.arms(); ++j) {
    if (star.pulls[j] > 0) reference = std::min(reference, instance.mean_at(j, star.pulls[j] - 1));
  }

  const double log_term =
      std::max(alpha * std::log(static_cast<double>(horizon)) - std::log(delta0), 0.0);
  const double c = 32.0 * sigma * sigma * log_term;

  std::vector<std::size_t> out(instance.arms(), 1);
  for (ArmIndex i = 0; i < instance.arms(); ++i) {
    const PullCount start = star.pulls[i];
    double window_sum = 0.0;
    std::size_t best_h = 1;
    for (std::size_t h = 1; h <= horizon; ++h) {
      // gap uses the window of h-1 means starting at N*_i (one mean for h = 1).
      const std::size_t w = h - 1;
      double gap;
      if (w == 0) {
        gap = reference - instance.mean_at(i, start);
      } else {
        window_sum += instance.mean_at(i, start + w - 1);
        gap = reference - window_sum / static_cast<double>(w);
      }
      const bool allowed = gap <= 0.0 || static_cast<double>(h) <= 1.0 + c / (gap * gap);
      if (allowed) best_h = h;
    }
    out[i] = best_h;
  }
  return out;
}

OraclePolicy::OraclePolicy(const RottingInstance& instance)
    : Policy(instance.arms()), instance_(&instance), pulls_(instance.arms(), 0) {}

ArmIndex OraclePolicy::choose(std::size_t) const {
  ArmIndex best = 0;
  double best_value = instance_->mean_at(0, pulls_[0]);
  for (ArmIndex i = 1; i < arms(); ++i) {
    const double v = instance_->mean_at(i, pulls_[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

void OraclePolicy::update(ArmIndex arm, double, std::size_t) { ++pulls_[arm]; }

}  // namespace rotting
