#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rotting/estimators.hpp"
#include "rotting/observation_log.hpp"
#include "rotting/policy.hpp"

namespace rotting {

/// Geometric-window statistics of EFF-FEWA.
///
/// For each arm and each level j with 2^j <= N_i the store keeps a current
/// estimate (average of a block of 2^j consecutive samples) and a pending
/// running sum that fills up to 2^j samples before replacing it.
///
/// Level j is created when N_i reaches 2^j, with the mean of all N_i samples
/// as its current value. The sample that created it belongs to that mean, so
/// the pending sum starts with the next pull. Afterwards the current value is
/// refreshed every 2^j pulls, at N_i = 2^(j+1), 3 * 2^j, ..., and always
/// covers the block (N - 2^j, N] of the last refresh point N. The delay
/// between the end of that block and the present is at most 2^j - 1 samples.
class EffStatStore {
 public:
  struct Level {
    double current = 0.0;
    double pending_sum = 0.0;
    std::size_t pending_count = 0;
  };

  explicit EffStatStore(std::size_t arms);

  void update(ArmIndex arm, double reward);

  std::size_t arms() const { return arms_.size(); }
  PullCount pulls(ArmIndex arm) const { return arms_.at(arm).pulls; }
  double total_reward(ArmIndex arm) const { return arms_.at(arm).total; }
  std::size_t levels(ArmIndex arm) const { return arms_.at(arm).levels.size(); }
  const Level& level(ArmIndex arm, std::size_t j) const;
  /// All existing levels of an arm, level j at index j.
  std::span<const Level> level_view(ArmIndex arm) const { return arms_.at(arm).levels; }
  /// Current estimate for window 2^j; std::logic_error if the level does not exist.
  double current(ArmIndex arm, std::size_t j) const {
    const auto& levels = arms_.at(arm).levels;
    return j < levels.size() ? levels[j].current : level(arm, j).current;
  }

  /// Stored statistics: one current and one pending value per existing level.
  std::size_t statistic_count() const { return statistic_count_; }

 private:
  struct ArmStats {
    PullCount pulls = 0;
    double total = 0.0;
    std::vector<Level> levels;
  };
  std::vector<ArmStats> arms_;
  std::size_t statistic_count_ = 0;
};

/// Level-j filter: keeps members whose current level-j estimate is within
/// 2 c(2^j, delta_t) of the best member's.
std::vector<ArmIndex> eff_filter(std::span<const ArmIndex> members, std::size_t level,
                                 double delta_t, const EffStatStore& store, double sigma);

/// FEWA with windows 2^j read from an EffStatStore. Per-round cost and
/// memory are O(K log t).
///
/// After filtering at level j the search stops when a survivor has
/// N_i <= 2^(j+1), and the least-pulled survivor (lowest index on ties) is
/// pulled. With early_exit a lone survivor is pulled at once (same choice).
class EffFewaPolicy final : public Policy {
 public:
  EffFewaPolicy(std::size_t arms, double sigma, ConfidenceSchedule schedule,
                bool early_exit = true);
  /// Replays a history in which every arm has been pulled into the store;
  /// the next round is history.total_pulls() + 1.
  EffFewaPolicy(const ObservationLog& history, double sigma, ConfidenceSchedule schedule,
                bool early_exit = true);

  std::string name() const override { return "eff-fewa"; }
  std::optional<std::size_t> statistic_count() const override {
    return store_.statistic_count();
  }

  const EffStatStore& store() const { return store_; }
  std::size_t last_filter_calls() const { return last_filter_calls_; }

 protected:
  ArmIndex choose(std::size_t t) const override;
  void update(ArmIndex arm, double reward, std::size_t t) override;

 private:
  EffStatStore store_;
  double sigma_;
  ConfidenceSchedule schedule_;
  bool early_exit_;
  mutable std::vector<ArmIndex> active_;
  mutable std::vector<ArmIndex> next_;
  mutable std::vector<double> estimates_;
  mutable std::vector<std::span<const EffStatStore::Level>> views_;
  mutable std::vector<PullCount> counts_;
  mutable std::size_t last_filter_calls_ = 0;
};

}  // namespace rotting
