#include "capopt/rng.hpp"

namespace capopt {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::vector<Rng> spawn_streams(std::uint64_t master_seed, int count) {
    std::vector<Rng> streams;
    streams.reserve(count);
    std::uint64_t state = master_seed;
    for (int i = 0; i < count; ++i) streams.emplace_back(splitmix64(state));
    return streams;
}

}  // namespace capopt
