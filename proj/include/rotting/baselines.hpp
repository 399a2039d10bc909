#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <span>
#include <vector>

#include "rotting/observation_log.hpp"
#include "rotting/policy.hpp"

namespace rotting {

// Comparison policies. All of them pull the arms once in index order, break
// ties towards the lowest index, and are deterministic given their history.

/// argmax of the last observed values; lowest index on ties.
ArmIndex greedy_last_value_select(std::span<const double> last_values);

/// Pulls the arm whose most recent reward is largest.
class GreedyLastPolicy final : public Policy {
 public:
  explicit GreedyLastPolicy(std::size_t arms);
  std::string name() const override { return "greedy-last"; }

 protected:
  ArmIndex choose(std::size_t t) const override;
  void update(ArmIndex arm, double reward, std::size_t t) override;

 private:
  std::vector<double> last_;
};

/// UCB1 exploration bonus sqrt(2 sigma^2 xi ln t / n).
double ucb1_bonus(std::size_t t, std::size_t pulls, double xi, double sigma);

/// argmax_i mean_i + ucb1_bonus(t, pulls_i); lowest index on ties.
ArmIndex ucb1_select(std::span<const double> means, std::span<const std::size_t> pulls,
                     std::size_t t, double xi, double sigma);

class Ucb1Policy final : public Policy {
 public:
  Ucb1Policy(std::size_t arms, double xi, double sigma);
  std::string name() const override { return "ucb1"; }

 protected:
  ArmIndex choose(std::size_t t) const override;
  void update(ArmIndex arm, double reward, std::size_t t) override;

 private:
  double xi_;
  double sigma_;
  std::vector<double> sums_;
  std::vector<std::size_t> pulls_;
  mutable std::vector<double> means_;
};

/// Averaging-window rule of the sliding-window greedy: (t, K) -> window.
using WindowRule = std::function<std::size_t(std::size_t t, std::size_t arms)>;

/// max(1, ceil(alpha * sigma^(2/3) * (t/K)^(2/3))).
WindowRule default_wswa_window(double alpha, double sigma);

/// Sliding-window average greedy: after one pull per arm, pulls the arm with
/// the best mean over its last min(M(t), N_i) samples.
class WswaPolicy final : public Policy {
 public:
  WswaPolicy(std::size_t arms, WindowRule window);
  std::string name() const override { return "wswa"; }

  /// Window the rule yields for round t, before clamping to N_i.
  std::size_t window(std::size_t t) const { return window_(t, arms()); }

 protected:
  ArmIndex choose(std::size_t t) const override;
  void update(ArmIndex arm, double reward, std::size_t t) override;

 private:
  WindowRule window_;
  // prefix_[i][n] = sum of the first n rewards of arm i.
  std::vector<std::vector<double>> prefix_;
};

/// Sliding-window UCB over the last tau rounds.
///
/// Index: windowed mean + sigma * sqrt(xi ln(min(t, tau)) / N_i(tau)), with
/// +infinity for arms not pulled inside the window.
class SwUcbPolicy final : public Policy {
 public:
  SwUcbPolicy(std::size_t arms, std::size_t tau, double xi, double sigma);
  std::string name() const override { return "sw-ucb"; }

  /// Pulls of each arm among the last min(t-1, tau) rounds.
  std::span<const std::size_t> window_pulls() const { return counts_; }

 protected:
  ArmIndex choose(std::size_t t) const override;
  void update(ArmIndex arm, double reward, std::size_t t) override;

 private:
  std::size_t tau_;
  double xi_;
  double sigma_;
  std::deque<std::pair<ArmIndex, double>> window_;
  std::vector<std::size_t> counts_;
  std::vector<double> sums_;
};

/// Discounted UCB with factor gamma.
///
/// Index: discounted mean + sigma * sqrt(xi ln n_gamma / N_{i,gamma}) where
/// N_{i,gamma} = sum_s gamma^(t-s) 1{i(s) = i} and n_gamma = sum_i N_{i,gamma}.
class DUcbPolicy final : public Policy {
 public:
  DUcbPolicy(std::size_t arms, double gamma, double xi, double sigma);
  std::string name() const override { return "d-ucb"; }

  std::span<const double> discounted_counts() const { return counts_; }
  std::span<const double> discounted_sums() const { return sums_; }

 protected:
  ArmIndex choose(std::size_t t) const override;
  void update(ArmIndex arm, double reward, std::size_t t) override;

 private:
  double gamma_;
  double xi_;
  double sigma_;
  std::vector<double> counts_;
  std::vector<double> sums_;
};

}  // namespace rotting
