#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "rotting/instance.hpp"
#include "rotting/policy.hpp"

namespace rotting::testing {

// Non-increasing piecewise-constant arm: mu(0) in [0, L], up to `pieces`
// drops of at most L at random pull counts below `span`.
inline MeanFunction random_step_arm(std::mt19937_64& rng, double L, std::size_t span,
                                    std::size_t pieces) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> at(1, std::max<std::size_t>(span, 2) - 1);
  std::vector<PullCount> breaks;
  for (std::size_t k = 0; k < pieces; ++k) breaks.push_back(at(rng));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<double> values{L * unit(rng)};
  for (std::size_t k = 0; k < breaks.size(); ++k) values.push_back(values.back() - L * unit(rng));
  if (breaks.empty()) return Constant{values[0]};
  return PiecewiseConstant{breaks, values};
}

inline RottingInstance random_step_instance(std::mt19937_64& rng, std::size_t arms, double L,
                                            std::size_t span, double sigma) {
  std::uniform_int_distribution<std::size_t> pieces(0, 4);
  std::vector<MeanFunction> means;
  for (std::size_t i = 0; i < arms; ++i) means.push_back(random_step_arm(rng, L, span, pieces(rng)));
  return RottingInstance(std::move(means), sigma, L, span);
}

// Arm given by a table of n_max values: mu(0) in [0, L], each step a drop
// in [0, L] with probability p_drop, otherwise flat. With dyadic = true all
// values are multiples of 1/8, so sums of them are exact.
inline MeanFunction random_table_arm(std::mt19937_64& rng, double L, std::size_t n_max,
                                     double p_drop, bool dyadic) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](double scale) {
    const double v = scale * unit(rng);
    return dyadic ? std::floor(v * 8.0) / 8.0 : v;
  };
  std::vector<double> values{draw(L)};
  for (std::size_t n = 1; n < n_max; ++n) {
    const double drop = unit(rng) < p_drop ? draw(L) : 0.0;
    values.push_back(values.back() - drop);
  }
  return Tabulated{values};
}

inline RottingInstance random_table_instance(std::mt19937_64& rng, std::size_t arms, double L,
                                             std::size_t n_max, double sigma, bool dyadic = false,
                                             double p_drop = 0.5) {
  std::vector<MeanFunction> means;
  for (std::size_t i = 0; i < arms; ++i) means.push_back(random_table_arm(rng, L, n_max, p_drop, dyadic));
  return RottingInstance(std::move(means), sigma, L);
}

// Drives a policy for `rounds` rounds against fixed reward tables:
// rewards[i][n] is the reward of the (n+1)-th pull of arm i.
inline std::vector<ArmIndex> drive(Policy& policy, const std::vector<std::vector<double>>& rewards,
                                   std::size_t rounds) {
  std::vector<PullCount> pulls(rewards.size(), 0);
  std::vector<ArmIndex> trace;
  for (std::size_t t = policy.next_round(), end = t + rounds; t < end; ++t) {
    const ArmIndex arm = policy.select(t);
    policy.observe(arm, rewards.at(arm).at(pulls[arm]++));
    trace.push_back(arm);
  }
  return trace;
}

}  // namespace rotting::testing
