#include "capopt/pso.hpp"

#include <algorithm>
#include <stdexcept>

namespace capopt {

namespace {

void validate(const PsoConfig& config) {
    if (config.n_particles < 2) throw std::invalid_argument("pso: n_particles must be >= 2");
    if (config.w < 0.0 || config.c1 < 0.0 || config.c2 < 0.0) {
        throw std::invalid_argument("pso: w, c1, c2 must be >= 0");
    }
    if (config.max_iter < 0) throw std::invalid_argument("pso: max_iter must be >= 0");
    if (config.bounds.empty() || config.bounds.lower.size() != config.bounds.upper.size()) {
        throw std::invalid_argument("pso: bounds are required");
    }
}

std::vector<double> effective_v_max(const PsoConfig& config) {
    if (!config.v_max.empty()) return config.v_max;
    std::vector<double> v_max(config.bounds.dimensions());
    for (std::size_t d = 0; d < v_max.size(); ++d) {
        v_max[d] = config.v_max_fraction * (config.bounds.upper[d] - config.bounds.lower[d]);
    }
    return v_max;
}

std::vector<ParticleState> init_with_streams(const PsoConfig& config, std::vector<Rng>& streams,
                                             const ObjectiveFn& objective) {
    const std::size_t dims = config.bounds.dimensions();
    std::vector<ParticleState> particles(config.n_particles);
    for (int i = 0; i < config.n_particles; ++i) {
        particles[i].position.resize(dims);
        particles[i].velocity.assign(dims, 0.0);
        for (std::size_t d = 0; d < dims; ++d) {
            particles[i].position[d] =
                streams[i].uniform(config.bounds.lower[d], config.bounds.upper[d]);
        }
    }
    detail::for_each_index(particles.size(), config.parallel_eval, [&](std::size_t i) {
        particles[i].position_cost = objective(particles[i].position);
    });
    for (auto& p : particles) {
        p.pbest = p.position;
        p.pbest_cost = p.position_cost;
    }
    return particles;
}

}  // namespace

double pso_velocity(double v, double x, double pbest, double gbest, double w, double c1, double c2,
                    double r1, double r2) {
    return w * v + c1 * r1 * (pbest - x) + c2 * r2 * (gbest - x);
}

std::vector<ParticleState> init_swarm(const PsoConfig& config, const ObjectiveFn& objective) {
    validate(config);
    std::vector<Rng> streams = spawn_streams(config.seed, config.n_particles);
    return init_with_streams(config, streams, objective);
}

void pso_step(std::vector<ParticleState>& particles, std::vector<double>& gbest,
              double& gbest_cost, const PsoConfig& config, std::vector<Rng>& streams,
              const ObjectiveFn& objective) {
    const std::size_t dims = config.bounds.dimensions();
    const std::vector<double> v_max = effective_v_max(config);

    for (std::size_t i = 0; i < particles.size(); ++i) {
        auto& p = particles[i];
        for (std::size_t d = 0; d < dims; ++d) {
            const double r1 = streams[i].uniform01();
            const double r2 = streams[i].uniform01();
            double v = pso_velocity(p.velocity[d], p.position[d], p.pbest[d], gbest[d], config.w,
                                    config.c1, config.c2, r1, r2);
            v = std::clamp(v, -v_max[d], v_max[d]);
            p.velocity[d] = v;
            p.position[d] += v;
        }
        clamp_to_bounds(p.position, config.bounds);
    }

    detail::for_each_index(particles.size(), config.parallel_eval, [&](std::size_t i) {
        particles[i].position_cost = objective(particles[i].position);
    });

    for (auto& p : particles) {
        if (p.position_cost < p.pbest_cost) {
            p.pbest = p.position;
            p.pbest_cost = p.position_cost;
        }
    }
    for (const auto& p : particles) {
        if (p.pbest_cost < gbest_cost) {
            gbest_cost = p.pbest_cost;
            gbest = p.pbest;
        }
    }
}

SearchResult run_pso(const PsoConfig& config, const ObjectiveFn& objective,
                     const PsoObserver& observer) {
    validate(config);
    std::vector<Rng> streams = spawn_streams(config.seed, config.n_particles);
    std::vector<ParticleState> particles = init_with_streams(config, streams, objective);

    SearchResult result;
    result.evaluations = config.n_particles;

    auto best = std::min_element(particles.begin(), particles.end(),
                                 [](const ParticleState& a, const ParticleState& b) {
                                     return a.pbest_cost < b.pbest_cost;
                                 });
    std::vector<double> gbest = best->pbest;
    double gbest_cost = best->pbest_cost;
    if (observer) observer(0, particles);

    for (int iter = 1; iter <= config.max_iter; ++iter) {
        pso_step(particles, gbest, gbest_cost, config, streams, objective);
        result.evaluations += config.n_particles;
        result.history.best_cost_per_iteration.push_back(gbest_cost);
        if (observer) observer(iter, particles);
    }
    result.best_position = gbest;
    result.best_cost = gbest_cost;
    return result;
}

PlanRunResult run_pso(PsoConfig config, const PerUnitNetwork& net, const ObjectiveWeights& weights,
                      const SolverSettings& settings) {
    if (config.bounds.empty()) config.bounds = default_plan_bounds(net, 1);
    const ObjectiveFn objective = detail::plan_objective(net, weights, settings);
    return detail::finish_plan_run(run_pso(config, objective), net, weights, settings);
}

}  // namespace capopt
