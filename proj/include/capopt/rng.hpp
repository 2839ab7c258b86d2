#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace capopt {

// Thin deterministic wrapper over mt19937_64. The [0,1) mapping is done by
// hand so a given seed produces the same draws on every standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    // uniform integer in [0, n)
    int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  private:
    std::mt19937_64 engine_;
};

// splitmix64; used to decorrelate stream seeds derived from one master seed.
std::uint64_t splitmix64(std::uint64_t& state);

// Stream i is seeded with the i-th splitmix64 output of the master seed.
// Each population member owns stream i and draws only from it, so results do
// not depend on evaluation order or parallelism.
std::vector<Rng> spawn_streams(std::uint64_t master_seed, int count);

}  // namespace capopt
