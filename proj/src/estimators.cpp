#include "rotting/estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rotting {

double window_average(const ObservationLog& log, ArmIndex arm, std::size_t h) {
  const auto rewards = log.rewards(arm);
  if (h == 0 || h > rewards.size()) {
    throw std::domain_error("window " + std::to_string(h) + " not available for arm " +
                            std::to_string(arm) + " with " + std::to_string(rewards.size()) +
                            " pulls");
  }
  double sum = 0.0;
  for (std::size_t j = 1; j <= h; ++j) sum += rewards[rewards.size() - j];
  return sum / static_cast<double>(h);
}

double confidence_radius(std::size_t h, double delta, double sigma) {
  if (!(delta > 0.0)) throw std::domain_error("confidence level must be > 0");
  if (h == 0) throw std::domain_error("window must be >= 1");
  if (sigma == 0.0 || delta >= 1.0) return 0.0;
  return std::sqrt(2.0 * sigma * sigma / static_cast<double>(h) * std::log(1.0 / delta));
}

double ConfidenceSchedule::level(std::size_t t) const {
  return delta0 / std::pow(static_cast<double>(t), alpha);
}

double confidence_level(std::size_t t, const ConfidenceSchedule& schedule) {
  if (t == 0) throw std::domain_error("rounds start at 1");
  return schedule.level(t);
}

}  // namespace rotting
