#pragma once

#include <cstddef>
#include <span>

#include "rotting/observation_log.hpp"

namespace rotting {

/// Mean of the h most recent rewards of an arm. Throws std::domain_error when
/// h == 0 or h > pulls(arm): that estimate does not exist.
double window_average(const ObservationLog& log, ArmIndex arm, std::size_t h);

/// Hoeffding half-width sqrt((2 sigma^2 / h) ln(1/delta)). Natural log.
/// delta <= 0 is a domain error; delta >= 1 gives 0.
double confidence_radius(std::size_t h, double delta, double sigma);

struct ConfidenceSchedule {
  double delta0 = 1.0;
  double alpha = 0.06;

  /// delta_t = delta0 / t^alpha (not clamped).
  double level(std::size_t t) const;
};

double confidence_level(std::size_t t, const ConfidenceSchedule& schedule);

/// Walks the windows h = 1, 2, ... over one arm's history, most recent sample
/// first, keeping a running suffix sum so each step costs O(1).
class WindowScan {
 public:
  WindowScan() = default;
  explicit WindowScan(std::span<const double> rewards) : rewards_(rewards) {}

  /// Extends the window by one sample and returns the new average.
  double extend() {
    ++h_;
    sum_ += rewards_[rewards_.size() - h_];
    return sum_ / static_cast<double>(h_);
  }

  std::size_t window() const { return h_; }
  bool can_extend() const { return h_ < rewards_.size(); }

 private:
  std::span<const double> rewards_;
  std::size_t h_ = 0;
  double sum_ = 0.0;
};

}  // namespace rotting
