#pragma once

#include <functional>
#include <span>
#include <vector>

#include "capopt/objective.hpp"
#include "capopt/plan_space.hpp"

namespace capopt {

using ObjectiveFn = std::function<double(std::span<const double>)>;

struct ConvergenceHistory {
    std::vector<double> best_cost_per_iteration;  // running global best; non-increasing
};

// Result of a search over a generic box-bounded space.
struct SearchResult {
    std::vector<double> best_position;
    double best_cost = 0.0;
    ConvergenceHistory history;
    long evaluations = 0;
};

// Result of a capacitor-plan search on a network.
struct PlanRunResult {
    CapacitorPlan best_plan;
    double best_cost = 0.0;  // penalized
    ConvergenceHistory history;
    bool feasible = false;
    PlanEvaluation best_eval;  // re-evaluation of the returned plan
    long evaluations = 0;
};

namespace detail {

// Runs fn(i) for i in [0, n). With parallel set, indices are split across
// hardware threads; fn must only write to its own index.
void for_each_index(std::size_t n, bool parallel, const std::function<void(std::size_t)>& fn);

// Objective for the encoded plan space: decode, solve, price violations.
ObjectiveFn plan_objective(const PerUnitNetwork& net, const ObjectiveWeights& weights,
                           const SolverSettings& settings);

PlanRunResult finish_plan_run(const SearchResult& generic, const PerUnitNetwork& net,
                              const ObjectiveWeights& weights, const SolverSettings& settings);

}  // namespace detail

}  // namespace capopt
