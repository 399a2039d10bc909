#pragma once

#include <cstdint>
#include <random>

#include "rotting/instance.hpp"

namespace rotting {

/// splitmix64 finalizer; used to derive independent engine seeds.
std::uint64_t mix64(std::uint64_t x);

/// A reproducible Gaussian stream keyed by (seed, stream_id, purpose).
///
/// Streams with different keys are seeded through a splitmix64 chain, so runs
/// (stream_id) and per-run uses (purpose, e.g. one stream per arm) never share
/// an engine state.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t purpose = 0);

  double standard_normal() { return normal_(engine_); }
  std::uint64_t next_u64() { return engine_(); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// mu_arm(n) + sigma * eps, eps ~ N(0, 1) drawn from rng.
double sample_reward(const RottingInstance& instance, ArmIndex arm, PullCount n, RngStream& rng);

}  // namespace rotting
