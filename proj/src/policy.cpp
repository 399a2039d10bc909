#include "rotting/policy.hpp"

#include <string>

namespace rotting {

Policy::Policy(std::size_t arms) : arms_(arms) {
  if (arms == 0) throw std::invalid_argument("policy needs at least one arm");
}

void Policy::resume_at(std::size_t next_round) {
  if (next_round == 0) throw std::invalid_argument("rounds start at 1");
  if (pending_) throw UsageError("cannot move the round counter with a pending selection");
  round_ = next_round;
}

ArmIndex Policy::select(std::size_t t) {
  if (pending_) {
    throw UsageError("select called twice without observe (round " + std::to_string(round_) + ")");
  }
  if (t != round_) {
    throw UsageError("select called for round " + std::to_string(t) + ", expected " +
                     std::to_string(round_));
  }
  const ArmIndex arm = choose(t);
  pending_ = arm;
  return arm;
}

void Policy::observe(ArmIndex arm, double reward) {
  if (!pending_) throw UsageError("observe called without a preceding select");
  if (arm != *pending_) {
    throw UsageError("observe for arm " + std::to_string(arm) + " but arm " +
                     std::to_string(*pending_) + " was selected");
  }
  update(arm, reward, round_);
  pending_.reset();
  ++round_;
}

}  // namespace rotting
