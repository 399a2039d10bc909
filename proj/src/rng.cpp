#include "rotting/rng.hpp"

namespace rotting {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t purpose) {
  return mix64(mix64(mix64(seed) ^ stream_id) ^ (purpose * 0xd1b54a32d192ed03ULL));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t purpose)
    : seed_(seed), stream_id_(stream_id), engine_(derive_seed(seed, stream_id, purpose)) {}

double sample_reward(const RottingInstance& instance, ArmIndex arm, PullCount n, RngStream& rng) {
  const double mu = instance.mean_at(arm, n);
  return mu + instance.sigma() * rng.standard_normal();
}

}  // namespace rotting
