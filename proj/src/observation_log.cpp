#include "rotting/observation_log.hpp"

#include <stdexcept>
#include <string>

namespace rotting {

ObservationLog::ObservationLog(std::size_t arms) : rewards_(arms) {
  if (arms == 0) throw std::invalid_argument("observation log needs at least one arm");
}

void ObservationLog::record_pull(ArmIndex arm, double reward) {
  if (arm >= rewards_.size()) {
    throw std::domain_error("record_pull: arm " + std::to_string(arm) + " out of range");
  }
  rewards_[arm].push_back(reward);
  ++total_;
}

double ObservationLog::last(ArmIndex arm) const {
  const auto& r = rewards_.at(arm);
  if (r.empty()) throw std::domain_error("arm " + std::to_string(arm) + " has no pulls");
  return r.back();
}

}  // namespace rotting
