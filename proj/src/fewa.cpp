#include "rotting/fewa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rotting {

std::vector<ArmIndex> filter_by_gap(std::span<const ArmIndex> members,
                                    std::span<const double> estimates, double radius) {
  if (members.size() != estimates.size()) {
    throw std::invalid_argument("filter: one estimate per member required");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (double e : estimates) best = std::max(best, e);
  const double threshold = 2.0 * radius;
  std::vector<ArmIndex> kept;
  kept.reserve(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (best - estimates[k] <= threshold) kept.push_back(members[k]);
  }
  return kept;
}

std::vector<ArmIndex> filter(std::span<const ArmIndex> members, std::size_t h, double delta_t,
                             const ObservationLog& log, double sigma) {
  std::vector<double> estimates;
  estimates.reserve(members.size());
  for (ArmIndex i : members) {
    if (log.pulls(i) < h) {
      throw std::logic_error("filter: arm " + std::to_string(i) + " has " +
                             std::to_string(log.pulls(i)) + " pulls, window " + std::to_string(h));
    }
    estimates.push_back(window_average(log, i, h));
  }
  return filter_by_gap(members, estimates, confidence_radius(h, std::min(delta_t, 1.0), sigma));
}

FewaPolicy::FewaPolicy(std::size_t arms, double sigma, ConfidenceSchedule schedule,
                       bool early_exit)
    : Policy(arms), log_(arms), sigma_(sigma), schedule_(schedule), early_exit_(early_exit) {
  if (!(schedule_.alpha > 0.0) || !(schedule_.delta0 > 0.0)) {
    throw std::invalid_argument("fewa: alpha and delta0 must be > 0");
  }
  active_.reserve(arms);
  next_.reserve(arms);
  estimates_.resize(arms);
  scans_.resize(arms);
}

FewaPolicy::FewaPolicy(ObservationLog history, double sigma, ConfidenceSchedule schedule,
                       bool early_exit)
    : FewaPolicy(history.arms(), sigma, schedule, early_exit) {
  for (ArmIndex i = 0; i < history.arms(); ++i) {
    if (history.pulls(i) == 0) throw std::invalid_argument("fewa: history leaves an arm unpulled");
  }
  log_ = std::move(history);
  resume_at(log_.total_pulls() + 1);
}

ArmIndex FewaPolicy::choose(std::size_t t) const {
  last_filter_calls_ = 0;
  last_estimates_ = 0;
  escalation_.clear();
  if (auto arm = initialization_arm(t)) return *arm;

  const double delta = std::min(1.0, schedule_.level(t));
  const double two_var = 2.0 * sigma_ * sigma_;
  const double log_inv = (sigma_ == 0.0 || delta >= 1.0) ? 0.0 : std::log(1.0 / delta);
  active_.clear();
  for (ArmIndex i = 0; i < arms(); ++i) {
    active_.push_back(i);
    scans_[i] = WindowScan(log_.rewards(i));
  }

  for (std::size_t h = 1;; ++h) {
    double best = -std::numeric_limits<double>::infinity();
    for (ArmIndex i : active_) {
      estimates_[i] = scans_[i].extend();
      best = std::max(best, estimates_[i]);
    }
    // Same expression as confidence_radius, with the logarithm hoisted.
    const double threshold = 2.0 * std::sqrt(two_var / static_cast<double>(h) * log_inv);
    next_.clear();
    ArmIndex least = arms();
    PullCount least_pulls = std::numeric_limits<PullCount>::max();
    for (ArmIndex i : active_) {
      if (best - estimates_[i] <= threshold) {
        next_.push_back(i);
        if (log_.pulls(i) < least_pulls) {
          least_pulls = log_.pulls(i);
          least = i;
        }
      }
    }
    ++last_filter_calls_;
    last_estimates_ += active_.size();
    if (record_) escalation_.push_back(next_);
    if (least_pulls <= h) return least;
    // A lone survivor passes every larger window.
    if (early_exit_ && !record_ && next_.size() == 1) return least;
    active_.swap(next_);
  }
}

void FewaPolicy::update(ArmIndex arm, double reward, std::size_t) { log_.record_pull(arm, reward); }

}  // namespace rotting
