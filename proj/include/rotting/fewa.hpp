#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rotting/estimators.hpp"
#include "rotting/observation_log.hpp"
#include "rotting/policy.hpp"

namespace rotting {

/// Keeps the members whose estimate is within 2 * radius of the best
/// estimate among members. estimates[k] belongs to members[k]. Order of
/// members is preserved.
std::vector<ArmIndex> filter_by_gap(std::span<const ArmIndex> members,
                                    std::span<const double> estimates, double radius);

/// One FEWA filtering step at window h: estimates are the h-sample window
/// averages from the log, radius c(h, delta_t).
///
/// Every member must have at least h pulls; a shorter history is a caller bug
/// and raises std::logic_error.
std::vector<ArmIndex> filter(std::span<const ArmIndex> members, std::size_t h, double delta_t,
                             const ObservationLog& log, double sigma);

/// Filtering on expanding window averages.
///
/// Rounds 1..K pull the arms in index order. Afterwards each round starts
/// from the full arm set and filters it with windows h = 1, 2, ...; after
/// filtering at window h it stops as soon as a survivor has exactly h pulls
/// (no larger window exists for it) and pulls the least-pulled survivor,
/// lowest index on ties. The selected arm has therefore passed every filter
/// from h = 1 up to its own pull count.
///
/// delta_t = delta0 / t^alpha is clamped to 1, where the radius is 0.
///
/// With early_exit the scan ends as soon as a single arm survives, since no
/// later window can remove it. The selected arm is the same either way;
/// escalation recording always runs the full scan.
class FewaPolicy final : public Policy {
 public:
  FewaPolicy(std::size_t arms, double sigma, ConfidenceSchedule schedule,
             bool early_exit = true);
  /// Continues from a history in which every arm has been pulled; the next
  /// round is history.total_pulls() + 1.
  FewaPolicy(ObservationLog history, double sigma, ConfidenceSchedule schedule,
             bool early_exit = true);

  std::string name() const override { return "fewa"; }

  const ObservationLog& log() const { return log_; }
  const ConfidenceSchedule& schedule() const { return schedule_; }
  double sigma() const { return sigma_; }

  /// Filter calls made by the most recent select() (0 during initialization).
  std::size_t last_filter_calls() const { return last_filter_calls_; }
  /// Sum over filter calls of the filtered set size in the last select().
  std::size_t last_estimates_built() const { return last_estimates_; }

  /// When enabled, select() keeps the active set produced at every window:
  /// last_escalation()[h-1] is the output of the filter at window h.
  void record_escalation(bool on) { record_ = on; }
  const std::vector<std::vector<ArmIndex>>& last_escalation() const { return escalation_; }

 protected:
  ArmIndex choose(std::size_t t) const override;
  void update(ArmIndex arm, double reward, std::size_t t) override;

 private:
  ObservationLog log_;
  double sigma_;
  ConfidenceSchedule schedule_;
  bool early_exit_;
  bool record_ = false;

  // Per-select scratch.
  mutable std::vector<ArmIndex> active_;
  mutable std::vector<ArmIndex> next_;
  mutable std::vector<double> estimates_;
  mutable std::vector<WindowScan> scans_;
  mutable std::size_t last_filter_calls_ = 0;
  mutable std::size_t last_estimates_ = 0;
  mutable std::vector<std::vector<ArmIndex>> escalation_;
};

}  // namespace rotting
