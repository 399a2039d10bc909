#include "rotting/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rotting {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// First maximum wins, so ties go to the lowest index.
template <class IndexFn>
ArmIndex argmax(std::size_t arms, IndexFn&& index) {
  ArmIndex best = 0;
  double best_value = index(0);
  for (ArmIndex i = 1; i < arms; ++i) {
    const double v = index(i);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

}  // namespace

ArmIndex greedy_last_value_select(std::span<const double> last_values) {
  if (last_values.empty()) throw std::invalid_argument("greedy: no arms");
  return argmax(last_values.size(), [&](ArmIndex i) { return last_values[i]; });
}

GreedyLastPolicy::GreedyLastPolicy(std::size_t arms) : Policy(arms), last_(arms, 0.0) {}

ArmIndex GreedyLastPolicy::choose(std::size_t t) const {
  if (auto arm = initialization_arm(t)) return *arm;
  return greedy_last_value_select(last_);
}

void GreedyLastPolicy::update(ArmIndex arm, double reward, std::size_t) { last_[arm] = reward; }

double ucb1_bonus(std::size_t t, std::size_t pulls, double xi, double sigma) {
  if (pulls == 0) return kInf;
  return std::sqrt(2.0 * sigma * sigma * xi * std::log(static_cast<double>(t)) /
                   static_cast<double>(pulls));
}

ArmIndex ucb1_select(std::span<const double> means, std::span<const std::size_t> pulls,
                     std::size_t t, double xi, double sigma) {
  if (means.size() != pulls.size() || means.empty()) {
    throw std::invalid_argument("ucb1: means and pulls must be non-empty and aligned");
  }
  return argmax(means.size(),
                [&](ArmIndex i) { return means[i] + ucb1_bonus(t, pulls[i], xi, sigma); });
}

Ucb1Policy::Ucb1Policy(std::size_t arms, double xi, double sigma)
    : Policy(arms), xi_(xi), sigma_(sigma), sums_(arms, 0.0), pulls_(arms, 0), means_(arms, 0.0) {
  if (!(xi > 0.0)) throw std::invalid_argument("ucb1: xi must be > 0");
}

ArmIndex Ucb1Policy::choose(std::size_t t) const {
  if (auto arm = initialization_arm(t)) return *arm;
  for (ArmIndex i = 0; i < arms(); ++i) means_[i] = sums_[i] / static_cast<double>(pulls_[i]);
  return ucb1_select(means_, pulls_, t, xi_, sigma_);
}

void Ucb1Policy::update(ArmIndex arm, double reward, std::size_t) {
  sums_[arm] += reward;
  ++pulls_[arm];
}

WindowRule default_wswa_window(double alpha, double sigma) {
  if (!(alpha > 0.0)) throw std::invalid_argument("wswa: alpha must be > 0");
  return [alpha, sigma](std::size_t t, std::size_t arms) -> std::size_t {
    const double per_arm = static_cast<double>(t) / static_cast<double>(arms);
    const double m = std::ceil(alpha * std::cbrt(sigma * sigma) * std::cbrt(per_arm * per_arm));
    return std::max<std::size_t>(1, static_cast<std::size_t>(m));
  };
}

WswaPolicy::WswaPolicy(std::size_t arms, WindowRule window)
    : Policy(arms), window_(std::move(window)), prefix_(arms, std::vector<double>{0.0}) {
  if (!window_) throw std::invalid_argument("wswa: window rule required");
}

ArmIndex WswaPolicy::choose(std::size_t t) const {
  if (auto arm = initialization_arm(t)) return *arm;
  const std::size_t m = std::max<std::size_t>(1, window(t));
  return argmax(arms(), [&](ArmIndex i) {
    const auto& p = prefix_[i];
    const std::size_t n = p.size() - 1;
    const std::size_t w = std::min(m, n);
    return (p[n] - p[n - w]) / static_cast<double>(w);
  });
}

void WswaPolicy::update(ArmIndex arm, double reward, std::size_t) {
  auto& p = prefix_[arm];
  p.push_back(p.back() + reward);
}

SwUcbPolicy::SwUcbPolicy(std::size_t arms, std::size_t tau, double xi, double sigma)
    : Policy(arms), tau_(tau), xi_(xi), sigma_(sigma), counts_(arms, 0), sums_(arms, 0.0) {
  if (tau == 0) throw std::invalid_argument("sw-ucb: tau must be >= 1");
  if (!(xi > 0.0)) throw std::invalid_argument("sw-ucb: xi must be > 0");
}

ArmIndex SwUcbPolicy::choose(std::size_t t) const {
  if (auto arm = initialization_arm(t)) return *arm;
  const double log_term = std::log(static_cast<double>(std::min(t, tau_)));
  return argmax(arms(), [&](ArmIndex i) {
    if (counts_[i] == 0) return kInf;
    const double n = static_cast<double>(counts_[i]);
    return sums_[i] / n + sigma_ * std::sqrt(xi_ * log_term / n);
  });
}

void SwUcbPolicy::update(ArmIndex arm, double reward, std::size_t) {
  window_.emplace_back(arm, reward);
  ++counts_[arm];
  sums_[arm] += reward;
  if (window_.size() > tau_) {
    const auto [old_arm, old_reward] = window_.front();
    window_.pop_front();
    --counts_[old_arm];
    sums_[old_arm] -= old_reward;
    if (counts_[old_arm] == 0) sums_[old_arm] = 0.0;
  }
}

DUcbPolicy::DUcbPolicy(std::size_t arms, double gamma, double xi, double sigma)
    : Policy(arms), gamma_(gamma), xi_(xi), sigma_(sigma), counts_(arms, 0.0), sums_(arms, 0.0) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("d-ucb: gamma must be in (0,1)");
  if (!(xi > 0.0)) throw std::invalid_argument("d-ucb: xi must be > 0");
}

ArmIndex DUcbPolicy::choose(std::size_t t) const {
  if (auto arm = initialization_arm(t)) return *arm;
  double total = 0.0;
  for (double c : counts_) total += c;
  const double log_term = std::log(total);
  return argmax(arms(), [&](ArmIndex i) {
    if (!(counts_[i] > 0.0)) return kInf;
    return sums_[i] / counts_[i] + sigma_ * std::sqrt(xi_ * std::max(log_term, 0.0) / counts_[i]);
  });
}

void DUcbPolicy::update(ArmIndex arm, double reward, std::size_t) {
  for (ArmIndex i = 0; i < arms(); ++i) {
    counts_[i] *= gamma_;
    sums_[i] *= gamma_;
  }
  counts_[arm] += 1.0;
  sums_[arm] += reward;
}

}  // namespace rotting
