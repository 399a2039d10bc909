#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rotting/instance.hpp"
#include "rotting/policy.hpp"

namespace rotting {

/// End-of-horizon pull counts, one per arm.
struct Allocation {
  std::vector<PullCount> pulls;

  std::size_t horizon() const;
  bool operator==(const Allocation&) const = default;
};

/// Arm sequence of the greedy oracle, argmax_i mu_i(N_i) each round, lowest
/// index on ties. Greedy on true means is optimal for non-increasing means.
std::vector<ArmIndex> oracle_trace(const RottingInstance& instance, std::size_t horizon);

/// Final counts of oracle_trace. O(T log K).
Allocation oracle_allocation(const RottingInstance& instance, std::size_t horizon);

/// J*(t) for t = 0..horizon: cumulative expected reward of the oracle when
/// the game stops after t rounds. Since the oracle is greedy, its horizon-t
/// allocation is the prefix of its horizon-T trace.
std::vector<double> oracle_cumulative(const RottingInstance& instance, std::size_t horizon);

/// sum_i sum_{s < N_i} mu_i(s).
double oracle_cumreward(const RottingInstance& instance, const Allocation& allocation);

struct ArmDeviation {
  ArmIndex arm;
  PullCount count;  // |N^pi_i - N*_i|
  bool operator==(const ArmDeviation&) const = default;
};

struct HPlusParams {
  double alpha = 5.0;
  double sigma = 1.0;
  double delta0 = 1.0;
};

struct RegretReport {
  std::size_t horizon = 0;
  double j_star = 0.0;
  double j_pi = 0.0;
  /// J* - J_pi.
  double regret = 0.0;
  /// Same quantity through the under/over-pull decomposition.
  double regret_decomposed = 0.0;
  Allocation oracle;
  Allocation policy;
  std::vector<ArmDeviation> overpulled;
  std::vector<ArmDeviation> underpulled;
  /// Contribution of each arm to regret_decomposed: the means of the missing
  /// pulls for under-pulled arms, minus the means of the extra pulls for
  /// over-pulled arms.
  std::vector<double> per_arm_regret;
  /// max_i mu_i(N^pi_i).
  double mu_plus = 0.0;
  /// Overpull caps, filled when HPlusParams are given.
  std::vector<std::size_t> h_plus;
};

/// Compares an allocation against the oracle at the same horizon. Throws
/// std::domain_error when the allocation does not sum to horizon.
RegretReport regret_report(const RottingInstance& instance, const Allocation& pi_allocation,
                           std::size_t horizon,
                           std::optional<HPlusParams> h_plus = std::nullopt);

struct BruteForceResult {
  Allocation allocation;
  double value = 0.0;
};

/// Exhaustive maximization of J over all count vectors summing to horizon.
/// Refuses (std::length_error) when K^T exceeds 10^7.
BruteForceResult brute_force_allocation(const RottingInstance& instance, std::size_t horizon);

/// Problem-dependent overpull cap per arm:
///   h+_i = max { h <= T : h <= 1 + C / Delta_{i,h-1}^2 },
///   C = 32 sigma^2 log+(T^alpha / delta0),
///   Delta_{i,w} = min_{j : N*_j > 0} mu_j(N*_j - 1) - mean(mu_i(N*_i), ..., mu_i(N*_i + w - 1)).
/// Delta_{i,0} uses the single value mu_i(N*_i); Delta <= 0 never binds.
std::vector<std::size_t> h_plus_bound(const RottingInstance& instance, std::size_t horizon,
                                      double alpha, double sigma, double delta0);

/// The greedy oracle exposed as a policy (it reads the true means).
class OraclePolicy final : public Policy {
 public:
  explicit OraclePolicy(const RottingInstance& instance);
  std::string name() const override { return "oracle"; }

 protected:
  ArmIndex choose(std::size_t t) const override;
  void update(ArmIndex arm, double reward, std::size_t t) override;

 private:
  const RottingInstance* instance_;
  std::vector<PullCount> pulls_;
};

}  // namespace rotting
