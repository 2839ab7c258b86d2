#include "capopt/objective.hpp"

#include <cmath>
#include <limits>

namespace capopt {

double fitness(const LoadFlowSolution& solution, const CapacitorPlan& plan,
               const ObjectiveWeights& weights) {
    const CapacitorPlan merged = plan.merged();
    return weights.p_cost * solution.total_p_loss_kw +
           weights.q_cost * solution.total_q_loss_kvar +
           weights.cap_cost * merged.total_kvar() +
           weights.deviation_cost * voltage_deviation(solution);
}

ConstraintReport check_constraints(const CapacitorPlan& plan, const PerUnitNetwork& net,
                                   const LoadFlowSolution& solution) {
    ConstraintReport report;

    for (int b = 1; b <= net.nb; ++b) {
        const double v = std::abs(solution.voltages[b]);
        report.voltage_violation_pu += std::max(0.0, kVoltageLower - v);
        report.voltage_violation_pu += std::max(0.0, v - kVoltageUpper);
    }

    const CapacitorPlan merged = plan.merged();
    report.capsize_violation_kvar =
        std::max(0.0, merged.total_kvar() - net.total_q_load_kvar());

    for (const auto& p : merged.placements) {
        if (p.bus < 2 || p.bus > net.max_bus()) report.location_valid = false;
    }
    return report;
}

double penalize(double raw_cost, const ConstraintReport& report, const ObjectiveWeights& weights,
                bool converged) {
    if (!report.location_valid) return std::numeric_limits<double>::infinity();
    double cost = raw_cost;
    cost += weights.penalty_voltage * report.voltage_violation_pu;
    cost += weights.penalty_capsize * report.capsize_violation_kvar;
    if (!converged) cost += weights.penalty_divergence;
    return cost;
}

PlanEvaluation evaluate_plan(const PerUnitNetwork& net, const CapacitorPlan& plan,
                             const ObjectiveWeights& weights, const SolverSettings& settings) {
    PlanEvaluation eval;
    eval.solution = solve_loadflow(net, plan, settings);
    eval.constraints = check_constraints(plan, net, eval.solution);
    eval.raw_cost = fitness(eval.solution, plan, weights);
    eval.penalized_cost = penalize(eval.raw_cost, eval.constraints, weights, eval.solution.converged);
    return eval;
}

}  // namespace capopt
