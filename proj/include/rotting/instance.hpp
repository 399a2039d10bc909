#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rotting {

using ArmIndex = std::size_t;
using PullCount = std::size_t;

// Mean-function shapes. mu(n) is the expected reward of the pull made after
// n earlier pulls of the same arm.

struct Constant {
  double value = 0.0;
};

// high for n < change_at, low afterwards.
struct StepDrop {
  double high = 0.0;
  double low = 0.0;
  PullCount change_at = 0;
};

// values[k] holds on [breakpoints[k-1], breakpoints[k]); values.size() must
// be breakpoints.size() + 1 and breakpoints strictly increasing.
struct PiecewiseConstant {
  std::vector<PullCount> breakpoints;
  std::vector<double> values;
};

// values[n] for n < values.size(), then the last entry forever.
struct Tabulated {
  std::vector<double> values;
};

class MeanFunction {
 public:
  using Shape = std::variant<Constant, StepDrop, PiecewiseConstant, Tabulated>;

  MeanFunction(Shape shape);
  MeanFunction(Constant c) : MeanFunction(Shape{c}) {}
  MeanFunction(StepDrop s) : MeanFunction(Shape{s}) {}
  MeanFunction(PiecewiseConstant p) : MeanFunction(Shape{std::move(p)}) {}
  MeanFunction(Tabulated t) : MeanFunction(Shape{std::move(t)}) {}

  double operator()(PullCount n) const;

  const Shape& shape() const { return shape_; }

 private:
  Shape shape_;
};

/// A rested rotting bandit: per-arm non-increasing means, Gaussian noise of
/// scale sigma, and a declared per-pull decay bound L.
///
/// The noise model only needs to be sigma-sub-Gaussian for the guarantees of
/// the filtering policies; the simulator draws N(0, sigma^2).
class RottingInstance {
 public:
  RottingInstance(std::vector<MeanFunction> means, double sigma, double decay_bound,
                  std::optional<PullCount> horizon_hint = std::nullopt);

  std::size_t arms() const { return means_.size(); }
  double sigma() const { return sigma_; }
  double decay_bound() const { return decay_bound_; }
  std::optional<PullCount> horizon_hint() const { return horizon_hint_; }

  /// mu_arm(n). Throws std::domain_error for an arm out of range.
  double mean_at(ArmIndex arm, PullCount n) const;

  const MeanFunction& mean(ArmIndex arm) const;

 private:
  std::vector<MeanFunction> means_;
  double sigma_;
  double decay_bound_;
  std::optional<PullCount> horizon_hint_;
};

inline double mean_at(const RottingInstance& instance, ArmIndex arm, PullCount n) {
  return instance.mean_at(arm, n);
}

enum class Rule {
  kNonIncreasing,   // mu(n+1) <= mu(n)
  kBoundedDecay,    // mu(n) - mu(n+1) <= L
  kInitialInRange,  // 0 <= mu(0) <= L
};

struct Violation {
  ArmIndex arm;
  PullCount n;
  Rule rule;
};

std::string to_string(Rule rule);

/// Checks the three rotting constraints for n in [0, n_max]. Empty result
/// means the instance is in the decay-bounded class up to n_max.
std::vector<Violation> validate_instance(const RottingInstance& instance, PullCount n_max);

}  // namespace rotting
