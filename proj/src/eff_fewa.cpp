#include "rotting/eff_fewa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rotting {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

EffStatStore::EffStatStore(std::size_t arms) : arms_(arms) {
  if (arms == 0) throw std::invalid_argument("stat store needs at least one arm");
}

void EffStatStore::update(ArmIndex arm, double reward) {
  if (arm >= arms_.size()) throw std::domain_error("eff update: arm out of range");
  ArmStats& a = arms_[arm];
  ++a.pulls;
  a.total += reward;

  // Levels that already existed before this pull take the sample as pending.
  const std::size_t existing = a.levels.size();
  for (std::size_t j = 0; j < existing; ++j) {
    Level& lv = a.levels[j];
    const std::size_t width = std::size_t{1} << j;
    ++lv.pending_count;
    lv.pending_sum += reward;
    if (lv.pending_count == width) {
      lv.current = lv.pending_sum / static_cast<double>(width);
      lv.pending_count = 0;
      lv.pending_sum = 0.0;
    }
  }

  if (is_power_of_two(a.pulls)) {
    a.levels.push_back(Level{a.total / static_cast<double>(a.pulls), 0.0, 0});
    statistic_count_ += 2;
  }
}

const EffStatStore::Level& EffStatStore::level(ArmIndex arm, std::size_t j) const {
  const ArmStats& a = arms_.at(arm);
  if (j >= a.levels.size()) {
    throw std::logic_error("arm " + std::to_string(arm) + " has no level " + std::to_string(j) +
                           " (" + std::to_string(a.pulls) + " pulls)");
  }
  return a.levels[j];
}

std::vector<ArmIndex> eff_filter(std::span<const ArmIndex> members, std::size_t level,
                                 double delta_t, const EffStatStore& store, double sigma) {
  double best = -std::numeric_limits<double>::infinity();
  for (ArmIndex i : members) best = std::max(best, store.current(i, level));
  const double threshold =
      2.0 * confidence_radius(std::size_t{1} << level, std::min(delta_t, 1.0), sigma);
  std::vector<ArmIndex> kept;
  kept.reserve(members.size());
  for (ArmIndex i : members) {
    if (best - store.current(i, level) <= threshold) kept.push_back(i);
  }
  return kept;
}

EffFewaPolicy::EffFewaPolicy(std::size_t arms, double sigma, ConfidenceSchedule schedule,
                             bool early_exit)
    : Policy(arms), store_(arms), sigma_(sigma), schedule_(schedule), early_exit_(early_exit) {
  if (!(schedule_.alpha > 0.0) || !(schedule_.delta0 > 0.0)) {
    throw std::invalid_argument("eff-fewa: alpha and delta0 must be > 0");
  }
  active_.reserve(arms);
  next_.reserve(arms);
  estimates_.reserve(arms);
  views_.resize(arms);
  counts_.resize(arms);
}

EffFewaPolicy::EffFewaPolicy(const ObservationLog& history, double sigma,
                             ConfidenceSchedule schedule, bool early_exit)
    : EffFewaPolicy(history.arms(), sigma, schedule, early_exit) {
  for (ArmIndex i = 0; i < history.arms(); ++i) {
    if (history.pulls(i) == 0) throw std::invalid_argument("eff-fewa: history leaves an arm unpulled");
    for (double r : history.rewards(i)) store_.update(i, r);
  }
  resume_at(history.total_pulls() + 1);
}

ArmIndex EffFewaPolicy::choose(std::size_t t) const {
  last_filter_calls_ = 0;
  if (auto arm = initialization_arm(t)) return *arm;

  const double delta = std::min(1.0, schedule_.level(t));
  const double two_var = 2.0 * sigma_ * sigma_;
  const double log_inv = (sigma_ == 0.0 || delta >= 1.0) ? 0.0 : std::log(1.0 / delta);
  active_.clear();
  for (ArmIndex i = 0; i < arms(); ++i) {
    active_.push_back(i);
    views_[i] = store_.level_view(i);
    counts_[i] = store_.pulls(i);
  }

  for (std::size_t j = 0;; ++j) {
    const double width = static_cast<double>(std::size_t{1} << j);
    estimates_.clear();
    double best = -std::numeric_limits<double>::infinity();
    for (ArmIndex i : active_) {
      estimates_.push_back(views_[i][j].current);
      best = std::max(best, estimates_.back());
    }
    const double threshold = 2.0 * std::sqrt(two_var / width * log_inv);
    next_.clear();
    ArmIndex least = arms();
    PullCount least_pulls = std::numeric_limits<PullCount>::max();
    for (std::size_t k = 0; k < active_.size(); ++k) {
      if (best - estimates_[k] <= threshold) {
        const ArmIndex i = active_[k];
        next_.push_back(i);
        if (counts_[i] < least_pulls) {
          least_pulls = counts_[i];
          least = i;
        }
      }
    }
    ++last_filter_calls_;
    if (least_pulls <= (std::size_t{1} << (j + 1))) return least;
    if (early_exit_ && next_.size() == 1) return least;
    active_.swap(next_);
  }
}

void EffFewaPolicy::update(ArmIndex arm, double reward, std::size_t) { store_.update(arm, reward); }

}  // namespace rotting
