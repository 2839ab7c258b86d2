#pragma once

#include "capopt/loadflow.hpp"
#include "capopt/network.hpp"
#include "capopt/plan.hpp"

namespace capopt {

// Operating voltage band for capacitor placement, in p.u.
constexpr double kVoltageLower = 0.9;
constexpr double kVoltageUpper = 1.0;

struct ObjectiveWeights {
    double p_cost = 0.005;             // per kW of active loss
    double q_cost = 0.0015;            // per kvar of reactive loss
    double cap_cost = 0.0002;          // per kvar installed
    double deviation_cost = 1.0;       // per p.u. of summed |1 - |V||
    double penalty_voltage = 1000.0;   // per p.u. of band violation
    double penalty_capsize = 1.0;      // per kvar over the total reactive load
    double penalty_divergence = 1e6;   // flat penalty for non-converged candidates
};

struct ConstraintReport {
    double voltage_violation_pu = 0.0;    // sum of band violations over buses
    double capsize_violation_kvar = 0.0;  // installed kvar above total load kvar
    bool location_valid = true;           // every placement within [2, L_max]

    bool feasible() const {
        return location_valid && voltage_violation_pu == 0.0 && capsize_violation_kvar == 0.0;
    }
};

// Raw (unpenalized) cost:
//   p_cost * sum P_loss + q_cost * sum Q_loss + cap_cost * sum cap + deviation_cost * VD
// Callers must not feed non-converged solutions here directly; route those
// through penalize() with converged = false.
double fitness(const LoadFlowSolution& solution, const CapacitorPlan& plan,
               const ObjectiveWeights& weights);

ConstraintReport check_constraints(const CapacitorPlan& plan, const PerUnitNetwork& net,
                                   const LoadFlowSolution& solution);

// Violations are priced, never thrown: feasible converged candidates pass
// through unchanged, invalid locations price to +infinity.
double penalize(double raw_cost, const ConstraintReport& report, const ObjectiveWeights& weights,
                bool converged);

struct PlanEvaluation {
    LoadFlowSolution solution;
    ConstraintReport constraints;
    double raw_cost = 0.0;
    double penalized_cost = 0.0;
};

// Load flow + fitness + constraint pricing for one candidate plan.
PlanEvaluation evaluate_plan(const PerUnitNetwork& net, const CapacitorPlan& plan,
                             const ObjectiveWeights& weights, const SolverSettings& settings);

}  // namespace capopt
