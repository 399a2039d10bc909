#include "rotting/instance.hpp"

#include <algorithm>
#include <stdexcept>

namespace rotting {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_shape(const MeanFunction::Shape& shape) {
  if (const auto* p = std::get_if<PiecewiseConstant>(&shape)) {
    if (p->values.size() != p->breakpoints.size() + 1) {
      throw std::invalid_argument("piecewise mean: need one more value than breakpoints");
    }
    if (!std::is_sorted(p->breakpoints.begin(), p->breakpoints.end()) ||
        std::adjacent_find(p->breakpoints.begin(), p->breakpoints.end()) != p->breakpoints.end()) {
      throw std::invalid_argument("piecewise mean: breakpoints must be strictly increasing");
    }
  } else if (const auto* t = std::get_if<Tabulated>(&shape)) {
    if (t->values.empty()) throw std::invalid_argument("tabulated mean: no values");
  }
}

}  // namespace

MeanFunction::MeanFunction(Shape shape) : shape_(std::move(shape)) { check_shape(shape_); }

double MeanFunction::operator()(PullCount n) const {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return c.value; },
          [n](const StepDrop& s) { return n < s.change_at ? s.high : s.low; },
          [n](const PiecewiseConstant& p) {
            auto it = std::upper_bound(p.breakpoints.begin(), p.breakpoints.end(), n);
            return p.values[static_cast<std::size_t>(it - p.breakpoints.begin())];
          },
          [n](const Tabulated& t) { return t.values[std::min(n, t.values.size() - 1)]; },
      },
      shape_);
}

RottingInstance::RottingInstance(std::vector<MeanFunction> means, double sigma,
                                 double decay_bound, std::optional<PullCount> horizon_hint)
    : means_(std::move(means)),
      sigma_(sigma),
      decay_bound_(decay_bound),
      horizon_hint_(horizon_hint) {
  if (means_.empty()) throw std::invalid_argument("instance needs at least one arm");
  if (!(sigma_ >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  if (!(decay_bound_ > 0.0)) throw std::invalid_argument("decay bound L must be > 0");
}

const MeanFunction& RottingInstance::mean(ArmIndex arm) const {
  if (arm >= means_.size()) {
    throw std::domain_error("arm " + std::to_string(arm) + " out of range (K=" +
                            std::to_string(means_.size()) + ")");
  }
  return means_[arm];
}

double RottingInstance::mean_at(ArmIndex arm, PullCount n) const { return mean(arm)(n); }

std::string to_string(Rule rule) {
  switch (rule) {
    case Rule::kNonIncreasing: return "non-increasing";
    case Rule::kBoundedDecay: return "bounded-decay";
    case Rule::kInitialInRange: return "initial-in-range";
  }
  return "unknown";
}

std::vector<Violation> validate_instance(const RottingInstance& instance, PullCount n_max) {
  std::vector<Violation> out;
  const double L = instance.decay_bound();
  for (ArmIndex i = 0; i < instance.arms(); ++i) {
    const auto& mu = instance.mean(i);
    const double first = mu(0);
    if (first < 0.0 || first > L) out.push_back({i, 0, Rule::kInitialInRange});
    double prev = first;
    for (PullCount n = 0; n < n_max; ++n) {
      const double next = mu(n + 1);
      if (next > prev) out.push_back({i, n, Rule::kNonIncreasing});
      if (prev - next > L) out.push_back({i, n, Rule::kBoundedDecay});
      prev = next;
    }
  }
  return out;
}

}  // namespace rotting
