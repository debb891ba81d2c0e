#pragma once

#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace levyshrink {

using Engine = std::mt19937_64;

/// Seed of the substream for (seed, index); splitmix64 finalizer over both.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

/// Engine for trial `index` of a run seeded with `seed`. Every Monte Carlo
/// trial owns one, so results do not depend on how trials are scheduled.
inline Engine substream(std::uint64_t seed, std::uint64_t index) {
  return Engine(substream_seed(seed, index));
}

/// Boost's ziggurat normal: same sequence on every platform for a given engine.
inline double standard_normal(Engine& rng) {
  return boost::random::normal_distribution<double>{}(rng);
}

inline double uniform01(Engine& rng) { return boost::random::uniform_01<double>{}(rng); }

}  // namespace levyshrink
