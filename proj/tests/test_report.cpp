#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "capopt/report.hpp"
#include "support/frozen_values.hpp"
#include "support/test_helpers.hpp"

using namespace capopt;
using testsupport::data_path;
namespace fs = std::filesystem;

namespace {

Scenario scenario_11kv() { return load_scenario(data_path("scenarios/ieee33_11kv.cfg")); }

fs::path temp_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("capopt_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("base run flags the buses outside the voltage band") {
    RunReport report = run_base(scenario_11kv());
    CHECK(report.kind == "base");
    CHECK(report.converged);
    CHECK(report.min_voltage_bus == 18);
    CHECK(report.min_voltage_pu == doctest::Approx(0.8820).epsilon(0.006));
    CHECK(report.total_p_loss_kw == doctest::Approx(frozen::kBase11PLossKw).epsilon(1e-6));
    CHECK_FALSE(report.violating_buses.empty());
    for (int bus : report.violating_buses) {
        CHECK(report.bus_voltage[bus - 1] < 0.9);
    }
    CHECK_FALSE(report.feasible);  // base case sits below the band
    CHECK(report.plan.empty());
}

TEST_CASE("no-load feeder reports zero losses and no violations") {
    const fs::path dir = temp_dir("noload");
    {
        std::ofstream branches(dir / "branches.csv");
        branches << "1,2,0.1,0.05\n2,3,0.2,0.1\n";
        std::ofstream loads(dir / "loads.csv");
    }
    {
        std::ofstream cfg(dir / "noload.cfg");
        cfg << "branch_file = branches.csv\nload_file = loads.csv\nbase_kv = 1\nbase_mva = 1\n";
    }
    RunReport report = run_base(load_scenario((dir / "noload.cfg").string()));
    CHECK(report.total_p_loss_kw == 0.0);
    CHECK(report.total_q_loss_kvar == 0.0);
    CHECK(report.violating_buses.empty());
    CHECK(report.vd_pu == 0.0);
    CHECK(report.min_vsi == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("canonical 12.66 kV base run hits the frozen cross-check") {
    Scenario sc = load_scenario(data_path("scenarios/ieee33_1266kv.cfg"));
    RunReport report = run_base(sc);
    CHECK(report.total_p_loss_kw ==
          doctest::Approx(frozen::kBase1266PLossKw).epsilon(0.01));
}

TEST_CASE("optimized run fills reductions against its own base") {
    Scenario sc = scenario_11kv();
    sc.csa.max_iter = 40;  // enough to converge on this 2-D space
    RunReport report = run_optimized(sc);
    CHECK(report.kind == "optimized");
    CHECK(report.optimizer == "csa");
    CHECK(report.converged);
    CHECK(report.base_p_loss_kw == doctest::Approx(frozen::kBase11PLossKw).epsilon(1e-6));
    CHECK(report.p_reduction_pct ==
          doctest::Approx(100.0 * (report.base_p_loss_kw - report.total_p_loss_kw) /
                          report.base_p_loss_kw)
              .epsilon(1e-9));
    CHECK(report.q_reduction_pct ==
          doctest::Approx(100.0 * (report.base_q_loss_kvar - report.total_q_loss_kvar) /
                          report.base_q_loss_kvar)
              .epsilon(1e-9));
    CHECK(report.p_reduction_pct > 20.0);
    CHECK_FALSE(report.plan.empty());
    CHECK(report.convergence.size() == 40);
    CHECK(report.bus_voltage_base.size() == report.bus_voltage.size());
}

TEST_CASE("size bounds forced to zero reproduce the base case") {
    Scenario sc = scenario_11kv();
    sc.csa.max_iter = 0;
    sc.csa.bounds.lower = {2.0, 0.0};
    sc.csa.bounds.upper = {33.0, 0.0};  // plans can only be empty-sized
    RunReport optimized = run_optimized(sc);
    RunReport base = run_base(sc);
    CHECK(optimized.total_p_loss_kw == doctest::Approx(base.total_p_loss_kw).epsilon(1e-12));
    CHECK(optimized.total_q_loss_kvar == doctest::Approx(base.total_q_loss_kvar).epsilon(1e-12));
    CHECK(optimized.p_reduction_pct == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(optimized.plan.total_kvar() == 0.0);
}

TEST_CASE("report JSON round trip is identity") {
    Scenario sc = scenario_11kv();
    sc.csa.max_iter = 10;
    RunReport report = run_optimized(sc);
    report.convergence_csv = "csa_convergence.csv";
    const nlohmann::json once = to_json(report);
    RunReport reparsed = report_from_json(once);
    CHECK(to_json(reparsed) == once);
    CHECK(once.dump() == to_json(reparsed).dump());
}

TEST_CASE("outputs land on disk and agree with the report") {
    Scenario sc = scenario_11kv();
    sc.csa.max_iter = 10;
    RunReport report = run_optimized(sc);
    const fs::path dir = temp_dir("outputs");
    const std::string json_path = write_run_outputs(report, dir.string());

    CHECK(fs::exists(json_path));
    CHECK(fs::exists(dir / "csa_voltage_profile.csv"));
    CHECK(fs::exists(dir / "csa_branch_losses.csv"));
    CHECK(fs::exists(dir / "csa_convergence.csv"));
    CHECK(report.convergence_csv == "csa_convergence.csv");

    RunReport loaded = load_report(json_path);
    CHECK(to_json(loaded) == to_json(report));

    // convergence CSV row count = iterations recorded
    std::ifstream csv(dir / "csa_convergence.csv");
    int rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    CHECK(rows == static_cast<int>(report.convergence.size()) + 1);
}

TEST_CASE("comparison merges computed and cited rows and checks fingerprints") {
    Scenario sc = scenario_11kv();
    sc.csa.max_iter = 5;
    RunReport base = run_base(sc);
    RunReport optimized = run_optimized(sc);
    auto cited = load_reference_rows(data_path("table1_reference.csv"));
    REQUIRE(cited.size() == 9);
    CHECK(cited[0].label == "Base");
    CHECK_FALSE(cited[0].cap_mvar.has_value());
    CHECK(cited[1].best_cost == doctest::Approx(3.841));

    ComparisonTable table = compare_runs({base, optimized}, cited);
    CHECK(table.rows.size() == 11);
    CHECK(table.rows[0].provenance == "computed");
    CHECK(table.rows[0].label == "Base");
    CHECK(table.rows[1].label == "CSA");
    CHECK(table.rows[2].provenance == "cited");
    CHECK_FALSE(table.rows[0].best_cost.has_value());
    CHECK(table.rows[1].cap_bus.has_value());

    // single report is degenerate but valid
    CHECK(compare_runs({base}, {}).rows.size() == 1);

    // different feeder -> refusal
    Scenario other = load_scenario(data_path("scenarios/ieee33_1266kv.cfg"));
    RunReport foreign = run_base(other);
    CHECK_THROWS_AS(compare_runs({base, foreign}, cited), ValidationError);

    const fs::path dir = temp_dir("compare");
    write_comparison_csv(table, (dir / "comparison.csv").string());
    CHECK(fs::exists(dir / "comparison.csv"));
    CHECK(format_table(table).find("CSA") != std::string::npos);
}

TEST_CASE("non-convergence surfaces as SolveFailure with the last |dV|") {
    Scenario sc = scenario_11kv();
    sc.solver.tolerance_pu = 1e-30;
    sc.solver.max_iterations = 4;
    CHECK_THROWS_AS(run_base(sc), SolveFailure);
    try {
        run_base(sc);
    } catch (const SolveFailure& e) {
        CHECK(e.final_max_dv > 0.0);
        CHECK(e.iterations == 4);
        CHECK(std::string(e.what()).find("max |dV|") != std::string::npos);
    }
}

TEST_CASE("identical seeds produce bit-identical reports, serial or parallel") {
    Scenario sc = scenario_11kv();
    sc.csa.max_iter = 20;
    sc.seed = 123;
    RunReport serial = run_optimized(sc);
    sc.parallel_eval = true;
    RunReport parallel = run_optimized(sc);
    // the echo records the flag; results themselves must match exactly
    serial.scenario_echo.erase("parallel_eval");
    parallel.scenario_echo.erase("parallel_eval");
    CHECK(to_json(serial).dump() == to_json(parallel).dump());
}
