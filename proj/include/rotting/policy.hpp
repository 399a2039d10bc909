#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "rotting/instance.hpp"

namespace rotting {

/// Raised when the select/observe protocol is violated.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Every policy is driven by the same loop: for rounds t = 1, 2, ...
///   arm = select(t); reward = environment(arm); observe(arm, reward);
///
/// select() does not change the learning state; observe() consumes exactly
/// one (arm, reward) pair per round. Both are checked here so subclasses only
/// implement choose() and update().
class Policy {
 public:
  explicit Policy(std::size_t arms);
  virtual ~Policy() = default;

  Policy(const Policy&) = delete;
  Policy& operator=(const Policy&) = delete;

  ArmIndex select(std::size_t t);
  void observe(ArmIndex arm, double reward);

  std::size_t arms() const { return arms_; }
  /// The round the next select() call must carry.
  std::size_t next_round() const { return round_; }

  virtual std::string name() const = 0;
  /// Stored estimator count for policies that track one (EFF-FEWA).
  virtual std::optional<std::size_t> statistic_count() const { return std::nullopt; }

 protected:
  /// For subclasses built from an existing history: the next select() must
  /// carry next_round (>= 1).
  void resume_at(std::size_t next_round);

  virtual ArmIndex choose(std::size_t t) const = 0;
  virtual void update(ArmIndex arm, double reward, std::size_t t) = 0;

  /// Index-order initialization shared by most policies: arm t-1 in rounds
  /// 1..K, nothing afterwards.
  std::optional<ArmIndex> initialization_arm(std::size_t t) const {
    if (t <= arms_) return t - 1;
    return std::nullopt;
  }

 private:
  std::size_t arms_;
  std::size_t round_ = 1;
  std::optional<ArmIndex> pending_;
};

/// Reference policy: cycles through the arms in index order.
class RoundRobin final : public Policy {
 public:
  using Policy::Policy;
  std::string name() const override { return "round-robin"; }

 protected:
  ArmIndex choose(std::size_t t) const override { return (t - 1) % arms(); }
  void update(ArmIndex, double, std::size_t) override {}
};

}  // namespace rotting
