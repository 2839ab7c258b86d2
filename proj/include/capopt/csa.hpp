#pragma once

#include <cstdint>

#include "capopt/optimizer.hpp"
#include "capopt/rng.hpp"

namespace capopt {

struct CsaConfig {
    int n_crows = 20;
    int max_iter = 100;
    double fl = 2.0;  // flight length: step multiplier toward a followed memory
    double ap = 0.1;  // awareness probability: chance of random repositioning
    std::uint64_t seed = 1;
    PlanBounds bounds;          // filled from the network when left empty
    bool parallel_eval = false;
};

struct CrowState {
    std::vector<double> position;
    double position_cost = 0.0;
    std::vector<double> memory;  // best position this crow has found
    double memory_cost = 0.0;
};

// Positions drawn uniformly within bounds from per-crow streams; each memory
// starts at the crow's own position with its evaluated cost.
std::vector<CrowState> init_population(const CsaConfig& config, const ObjectiveFn& objective);

// One generation. Per crow i (stream order fixed by crow index):
//   pick a random crow j, draw r_follow;
//   r_follow >= ap: position <- position + r * fl * (memory_j - position)
//   otherwise:      position <- uniform random within bounds
// Positions are clamp-repaired, evaluated (possibly in parallel), and each
// memory updates only on improvement.
void csa_step(std::vector<CrowState>& crows, const CsaConfig& config, std::vector<Rng>& streams,
              const ObjectiveFn& objective);

// Pure follow-branch update for one dimension; exposed for direct testing.
double csa_follow(double position, double followed_memory, double fl, double r);

using CsaObserver = std::function<void(int iteration, const std::vector<CrowState>& crows)>;

// Full run over a generic objective. History records the running global best
// after each of the max_iter generations.
SearchResult run_csa(const CsaConfig& config, const ObjectiveFn& objective,
                     const CsaObserver& observer = {});

// Capacitor-plan binding: searches the encoded (location, size) space.
PlanRunResult run_csa(CsaConfig config, const PerUnitNetwork& net,
                      const ObjectiveWeights& weights, const SolverSettings& settings = {});

}  // namespace capopt
