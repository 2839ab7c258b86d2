#include "capopt/csa.hpp"

#include <algorithm>
#include <stdexcept>

namespace capopt {

namespace {

void validate(const CsaConfig& config) {
    if (config.n_crows < 2) throw std::invalid_argument("csa: n_crows must be >= 2");
    if (config.ap < 0.0 || config.ap > 1.0) throw std::invalid_argument("csa: ap must be in [0,1]");
    if (config.fl < 0.0) throw std::invalid_argument("csa: fl must be >= 0");
    if (config.max_iter < 0) throw std::invalid_argument("csa: max_iter must be >= 0");
    if (config.bounds.empty() || config.bounds.lower.size() != config.bounds.upper.size()) {
        throw std::invalid_argument("csa: bounds are required");
    }
}

// Initial draws come from the same per-crow streams the steps continue from.
std::vector<CrowState> init_with_streams(const CsaConfig& config, std::vector<Rng>& streams,
                                         const ObjectiveFn& objective) {
    const std::size_t dims = config.bounds.dimensions();
    std::vector<CrowState> crows(config.n_crows);
    for (int i = 0; i < config.n_crows; ++i) {
        crows[i].position.resize(dims);
        for (std::size_t d = 0; d < dims; ++d) {
            crows[i].position[d] = streams[i].uniform(config.bounds.lower[d], config.bounds.upper[d]);
        }
    }
    detail::for_each_index(crows.size(), config.parallel_eval, [&](std::size_t i) {
        crows[i].position_cost = objective(crows[i].position);
    });
    for (auto& crow : crows) {
        crow.memory = crow.position;
        crow.memory_cost = crow.position_cost;
    }
    return crows;
}

}  // namespace

double csa_follow(double position, double followed_memory, double fl, double r) {
    return position + r * fl * (followed_memory - position);
}

std::vector<CrowState> init_population(const CsaConfig& config, const ObjectiveFn& objective) {
    validate(config);
    std::vector<Rng> streams = spawn_streams(config.seed, config.n_crows);
    return init_with_streams(config, streams, objective);
}

void csa_step(std::vector<CrowState>& crows, const CsaConfig& config, std::vector<Rng>& streams,
              const ObjectiveFn& objective) {
    const std::size_t dims = config.bounds.dimensions();
    const int n = static_cast<int>(crows.size());

    // memories are read from the pre-step snapshot
    std::vector<std::vector<double>> memories(n);
    for (int i = 0; i < n; ++i) memories[i] = crows[i].memory;

    for (int i = 0; i < n; ++i) {
        const int j = streams[i].uniform_int(n);
        const double r_follow = streams[i].uniform01();
        if (r_follow >= config.ap) {
            const double r = streams[i].uniform01();
            for (std::size_t d = 0; d < dims; ++d) {
                crows[i].position[d] = csa_follow(crows[i].position[d], memories[j][d], config.fl, r);
            }
        } else {
            for (std::size_t d = 0; d < dims; ++d) {
                crows[i].position[d] = streams[i].uniform(config.bounds.lower[d], config.bounds.upper[d]);
            }
        }
        clamp_to_bounds(crows[i].position, config.bounds);
    }

    detail::for_each_index(crows.size(), config.parallel_eval, [&](std::size_t i) {
        crows[i].position_cost = objective(crows[i].position);
    });

    for (auto& crow : crows) {
        if (crow.position_cost < crow.memory_cost) {
            crow.memory = crow.position;
            crow.memory_cost = crow.position_cost;
        }
    }
}

SearchResult run_csa(const CsaConfig& config, const ObjectiveFn& objective,
                     const CsaObserver& observer) {
    validate(config);
    std::vector<Rng> streams = spawn_streams(config.seed, config.n_crows);
    std::vector<CrowState> crows = init_with_streams(config, streams, objective);

    SearchResult result;
    result.evaluations = config.n_crows;

    auto global_best = std::min_element(crows.begin(), crows.end(),
                                        [](const CrowState& a, const CrowState& b) {
                                            return a.memory_cost < b.memory_cost;
                                        });
    result.best_position = global_best->memory;
    result.best_cost = global_best->memory_cost;
    if (observer) observer(0, crows);

    for (int iter = 1; iter <= config.max_iter; ++iter) {
        csa_step(crows, config, streams, objective);
        result.evaluations += config.n_crows;
        for (const auto& crow : crows) {
            if (crow.memory_cost < result.best_cost) {
                result.best_cost = crow.memory_cost;
                result.best_position = crow.memory;
            }
        }
        result.history.best_cost_per_iteration.push_back(result.best_cost);
        if (observer) observer(iter, crows);
    }
    return result;
}

PlanRunResult run_csa(CsaConfig config, const PerUnitNetwork& net, const ObjectiveWeights& weights,
                      const SolverSettings& settings) {
    if (config.bounds.empty()) config.bounds = default_plan_bounds(net, 1);
    const ObjectiveFn objective = detail::plan_objective(net, weights, settings);
    return detail::finish_plan_run(run_csa(config, objective), net, weights, settings);
}

}  // namespace capopt
