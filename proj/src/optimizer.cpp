#include "capopt/optimizer.hpp"

#include <algorithm>
#include <thread>

namespace capopt::detail {

void for_each_index(std::size_t n, bool parallel, const std::function<void(std::size_t)>& fn) {
    const unsigned hw = std::thread::hardware_concurrency();
    const unsigned workers = parallel ? std::max(1u, std::min<unsigned>(hw, n)) : 1u;
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

ObjectiveFn plan_objective(const PerUnitNetwork& net, const ObjectiveWeights& weights,
                           const SolverSettings& settings) {
    return [&net, weights, settings](std::span<const double> position) {
        const CapacitorPlan plan = decode_position(position, net);
        return evaluate_plan(net, plan, weights, settings).penalized_cost;
    };
}

PlanRunResult finish_plan_run(const SearchResult& generic, const PerUnitNetwork& net,
                              const ObjectiveWeights& weights, const SolverSettings& settings) {
    PlanRunResult out;
    out.best_plan = decode_position(generic.best_position, net).merged();
    out.best_cost = generic.best_cost;
    out.history = generic.history;
    out.evaluations = generic.evaluations;
    out.best_eval = evaluate_plan(net, out.best_plan, weights, settings);
    out.feasible = out.best_eval.constraints.feasible() && out.best_eval.solution.converged;
    return out;
}

}  // namespace capopt::detail
