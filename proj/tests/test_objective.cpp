#include "doctest.h"

#include <cmath>
#include <limits>

#include "capopt/objective.hpp"
#include "support/frozen_values.hpp"
#include "support/test_helpers.hpp"

using namespace capopt;
using testsupport::load_ieee33;

namespace {

LoadFlowSolution flat_solution(int nb) {
    LoadFlowSolution sol;
    sol.voltages.assign(nb + 1, Complex{1.0, 0.0});
    sol.voltages[0] = Complex{0.0, 0.0};
    sol.converged = true;
    sol.iterations = 1;
    return sol;
}

}  // namespace

TEST_CASE("fitness vanishes for a lossless flat profile and empty plan") {
    CHECK(fitness(flat_solution(5), {}, {}) == 0.0);
}

TEST_CASE("fitness is linear in the loss weights") {
    LoadFlowSolution sol = flat_solution(3);
    sol.total_p_loss_kw = 120.0;
    sol.total_q_loss_kvar = 50.0;

    ObjectiveWeights w;
    const double active_term = fitness(sol, {}, w) - fitness(sol, {}, [&] {
                                   ObjectiveWeights z = w;
                                   z.p_cost = 0.0;
                                   return z;
                               }());
    ObjectiveWeights doubled = w;
    doubled.p_cost *= 2.0;
    CHECK(fitness(sol, {}, doubled) - fitness(sol, {}, w) ==
          doctest::Approx(active_term).epsilon(1e-12));
}

TEST_CASE("base-case fitness with shipped weights matches the frozen constant") {
    PerUnitNetwork net = to_per_unit(load_ieee33(11.0));
    auto eval = evaluate_plan(net, {}, {}, {});
    REQUIRE(eval.solution.converged);
    CHECK(eval.raw_cost == doctest::Approx(frozen::kBase11RawFitness).epsilon(1e-6));
}

TEST_CASE("duplicate placements merge before costing") {
    LoadFlowSolution sol = flat_solution(5);
    CapacitorPlan split;
    split.placements = {{3, 200.0}, {3, 300.0}};
    CapacitorPlan joined;
    joined.placements = {{3, 500.0}};
    ObjectiveWeights w;
    CHECK(fitness(sol, split, w) == fitness(sol, joined, w));
}

TEST_CASE("capsize constraint follows the total reactive load") {
    PerUnitNetwork net = to_per_unit(load_ieee33(11.0));
    auto sol = solve_loadflow(net, {}, {});

    CapacitorPlan fits;
    fits.placements = {{30, 1579.0}};
    CHECK(check_constraints(fits, net, sol).capsize_violation_kvar == 0.0);

    CapacitorPlan over;
    over.placements = {{30, 2500.0}};
    CHECK(check_constraints(over, net, sol).capsize_violation_kvar ==
          doctest::Approx(200.0).epsilon(1e-12));
}

TEST_CASE("slack bus is not a valid capacitor location") {
    PerUnitNetwork net = to_per_unit(load_ieee33(11.0));
    auto sol = solve_loadflow(net, {}, {});
    CapacitorPlan at_slack;
    at_slack.placements = {{1, 500.0}};
    CHECK_FALSE(check_constraints(at_slack, net, sol).location_valid);
    CapacitorPlan beyond;
    beyond.placements = {{34, 500.0}};
    CHECK_FALSE(check_constraints(beyond, net, sol).location_valid);
}

TEST_CASE("a 0.8820 pu bus contributes 0.018 of band violation") {
    PerUnitNetwork net = to_per_unit(
        validate_radial(parse_network("1,2,0.02,0.01\n", "", 1.0, 1.0)));
    LoadFlowSolution sol = flat_solution(2);
    sol.voltages[2] = Complex{0.8820, 0.0};
    auto report = check_constraints({}, net, sol);
    CHECK(report.voltage_violation_pu == doctest::Approx(0.018).epsilon(1e-9));
}

TEST_CASE("voltages above 1.0 also violate the band") {
    PerUnitNetwork net = to_per_unit(
        validate_radial(parse_network("1,2,0.02,0.01\n", "", 1.0, 1.0)));
    LoadFlowSolution sol = flat_solution(2);
    sol.voltages[2] = Complex{1.03, 0.0};
    auto report = check_constraints({}, net, sol);
    CHECK(report.voltage_violation_pu == doctest::Approx(0.03).epsilon(1e-9));
}

TEST_CASE("penalize is the identity on feasible converged candidates") {
    ConstraintReport clean;
    ObjectiveWeights w;
    CHECK(penalize(3.25, clean, w, true) == 3.25);
}

TEST_CASE("penalize prices violations and divergence") {
    ObjectiveWeights w;
    ConstraintReport report;
    report.voltage_violation_pu = 0.018;
    CHECK(penalize(1.0, report, w, true) == doctest::Approx(1.0 + 18.0).epsilon(1e-12));

    ConstraintReport oversize;
    oversize.capsize_violation_kvar = 200.0;
    CHECK(penalize(1.0, oversize, w, true) ==
          doctest::Approx(1.0 + w.penalty_capsize * 200.0).epsilon(1e-12));

    ConstraintReport clean;
    const double diverged = penalize(1.0, clean, w, false);
    CHECK(diverged > penalize(1000.0, oversize, w, true));  // dominates feasible-scale costs

    ConstraintReport bad_location;
    bad_location.location_valid = false;
    CHECK(std::isinf(penalize(0.0, bad_location, w, true)));
}

TEST_CASE("scaling every weight scales the penalized cost and keeps ordering") {
    PerUnitNetwork net = to_per_unit(load_ieee33(11.0));
    Rng rng(5);
    ObjectiveWeights w;
    for (int trial = 0; trial < 10; ++trial) {
        CapacitorPlan a, b;
        a.placements = {{2 + rng.uniform_int(32), rng.uniform(0.0, 2600.0)}};
        b.placements = {{2 + rng.uniform_int(32), rng.uniform(0.0, 2600.0)}};
        const double lambda = rng.uniform(0.1, 10.0);

        ObjectiveWeights scaled = w;
        scaled.p_cost *= lambda;
        scaled.q_cost *= lambda;
        scaled.cap_cost *= lambda;
        scaled.deviation_cost *= lambda;
        scaled.penalty_voltage *= lambda;
        scaled.penalty_capsize *= lambda;
        scaled.penalty_divergence *= lambda;

        auto ea = evaluate_plan(net, a, w, {});
        auto eb = evaluate_plan(net, b, w, {});
        auto sa = evaluate_plan(net, a, scaled, {});
        auto sb = evaluate_plan(net, b, scaled, {});
        CHECK(sa.penalized_cost == doctest::Approx(lambda * ea.penalized_cost).epsilon(1e-9));
        CHECK(sb.penalized_cost == doctest::Approx(lambda * eb.penalized_cost).epsilon(1e-9));
        CHECK((ea.penalized_cost < eb.penalized_cost) == (sa.penalized_cost < sb.penalized_cost));
    }
}

TEST_CASE("feasibility matches a direct re-check of the three constraints") {
    PerUnitNetwork net = to_per_unit(load_ieee33(11.0));
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        CapacitorPlan plan;
        plan.placements = {{1 + rng.uniform_int(34), rng.uniform(0.0, 3000.0)}};
        auto sol = solve_loadflow(net, plan, {});
        auto report = check_constraints(plan, net, sol);

        bool voltage_ok = true;
        for (int b = 1; b <= net.nb; ++b) {
            const double v = std::abs(sol.voltages[b]);
            voltage_ok = voltage_ok && v >= kVoltageLower && v <= kVoltageUpper;
        }
        const bool size_ok = plan.total_kvar() <= net.total_q_load_kvar();
        const bool location_ok =
            plan.placements[0].bus >= 2 && plan.placements[0].bus <= net.max_bus();
        CHECK(report.feasible() == (voltage_ok && size_ok && location_ok));
    }
}

TEST_CASE("adding a violation never lowers the penalized cost") {
    ObjectiveWeights w;
    ConstraintReport report;
    double previous = penalize(2.0, report, w, true);
    for (double violation : {0.001, 0.01, 0.1, 1.0}) {
        report.voltage_violation_pu = violation;
        const double cost = penalize(2.0, report, w, true);
        CHECK(cost >= previous);
        previous = cost;
    }
}
