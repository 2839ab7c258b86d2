#pragma once

#include <cstdint>

#include "capopt/optimizer.hpp"
#include "capopt/rng.hpp"

namespace capopt {

struct PsoConfig {
    int n_particles = 20;
    int max_iter = 100;
    double w = 0.729;   // inertia
    double c1 = 1.494;  // cognitive
    double c2 = 1.494;  // social
    // velocity clamp per dimension; when empty it defaults to
    // v_max_fraction * (upper - lower)
    std::vector<double> v_max;
    double v_max_fraction = 0.2;
    std::uint64_t seed = 1;
    PlanBounds bounds;  // filled from the network when left empty
    bool parallel_eval = false;
};

struct ParticleState {
    std::vector<double> position;
    std::vector<double> velocity;
    double position_cost = 0.0;
    std::vector<double> pbest;
    double pbest_cost = 0.0;
};

std::vector<ParticleState> init_swarm(const PsoConfig& config, const ObjectiveFn& objective);

// One generation:
//   v <- w v + c1 r1 (pbest - x) + c2 r2 (gbest - x), clamped to +-v_max
//   x <- x + v, clamp-repaired; pbest/gbest update on improvement.
// r1, r2 are drawn per dimension from the particle's own stream.
void pso_step(std::vector<ParticleState>& particles, std::vector<double>& gbest,
              double& gbest_cost, const PsoConfig& config, std::vector<Rng>& streams,
              const ObjectiveFn& objective);

// Pure one-dimension velocity update; exposed for direct testing.
double pso_velocity(double v, double x, double pbest, double gbest, double w, double c1, double c2,
                    double r1, double r2);

using PsoObserver = std::function<void(int iteration, const std::vector<ParticleState>& particles)>;

SearchResult run_pso(const PsoConfig& config, const ObjectiveFn& objective,
                     const PsoObserver& observer = {});

PlanRunResult run_pso(PsoConfig config, const PerUnitNetwork& net,
                      const ObjectiveWeights& weights, const SolverSettings& settings = {});

}  // namespace capopt
