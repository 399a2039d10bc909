#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rotting/instance.hpp"

namespace rotting {

/// Append-only per-arm reward history. rewards(i)[n] is the reward of the
/// (n+1)-th pull of arm i, so pulls(i) == rewards(i).size().
class ObservationLog {
 public:
  explicit ObservationLog(std::size_t arms);

  void record_pull(ArmIndex arm, double reward);

  std::size_t arms() const { return rewards_.size(); }
  PullCount pulls(ArmIndex arm) const { return rewards_.at(arm).size(); }
  /// Number of pulls recorded so far over all arms.
  std::size_t total_pulls() const { return total_; }

  std::span<const double> rewards(ArmIndex arm) const { return rewards_.at(arm); }
  /// Most recent reward of the arm; the arm must have been pulled.
  double last(ArmIndex arm) const;

 private:
  std::vector<std::vector<double>> rewards_;
  std::size_t total_ = 0;
};

}  // namespace rotting
