#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "capopt/optimizer.hpp"
#include "capopt/scenario.hpp"

namespace capopt {

// Load flow failed to converge where the workflow requires convergence.
struct SolveFailure : std::runtime_error {
    SolveFailure(const std::string& msg, double max_dv, int iterations)
        : std::runtime_error(msg), final_max_dv(max_dv), iterations(iterations) {}
    double final_max_dv;
    int iterations;
};

struct RunReport {
    std::string kind;  // "base" | "optimized"
    std::string scenario_name;
    nlohmann::json scenario_echo;
    std::string network_fingerprint;
    int n_buses = 0;

    bool converged = false;
    int iterations = 0;

    // headline run state (the optimized state for optimized runs)
    double total_p_loss_kw = 0.0;
    double total_q_loss_kvar = 0.0;
    double vd_pu = 0.0;
    double min_vsi = 0.0;
    int min_vsi_bus = 0;
    double min_voltage_pu = 0.0;
    int min_voltage_bus = 0;
    std::vector<int> violating_buses;  // |V| outside [0.9, 1.0]

    std::vector<double> bus_voltage;       // by bus id, entry per bus 1..nb
    std::vector<double> bus_voltage_base;  // base-case column (same as bus_voltage for base runs)

    struct BranchRow {
        int from = 0;
        int to = 0;
        double p_kw = 0.0;
        double q_kvar = 0.0;
    };
    std::vector<BranchRow> branch_loss;
    std::vector<BranchRow> branch_loss_base;

    CapacitorPlan plan;  // empty for base runs
    double raw_cost = 0.0;
    double best_cost = 0.0;  // penalized
    bool feasible = false;

    std::string optimizer;  // empty for base runs
    std::uint64_t seed = 0;
    double base_p_loss_kw = 0.0;
    double base_q_loss_kvar = 0.0;
    double p_reduction_pct = 0.0;
    double q_reduction_pct = 0.0;
    std::vector<double> convergence;  // best cost per iteration
    std::string convergence_csv;      // file name, set once outputs are written
};

RunReport run_base(const Scenario& scenario);
RunReport run_optimized(const Scenario& scenario);

nlohmann::json to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);
RunReport load_report(const std::string& path);

// Writes <prefix>_report.json plus the flat CSVs (voltage profile, branch
// losses, convergence for optimized runs) into out_dir. The prefix is "base"
// for base runs and the optimizer name otherwise. Returns the JSON path.
std::string write_run_outputs(RunReport& report, const std::string& out_dir);

struct ComparisonRow {
    std::string label;
    std::string provenance;  // "computed" | "cited"
    double p_loss_kw = 0.0;
    double q_loss_kvar = 0.0;
    double vd_pu = 0.0;
    double min_vsi = 0.0;
    std::optional<double> cap_mvar;
    std::optional<int> cap_bus;
    std::optional<double> best_cost;
};

struct ComparisonTable {
    std::string network_fingerprint;
    std::vector<ComparisonRow> rows;
};

// Merges computed runs with cited reference rows. All reports must carry the
// same network fingerprint; cited rows are constants and pass through.
ComparisonTable compare_runs(const std::vector<RunReport>& reports,
                             const std::vector<ComparisonRow>& cited);

// Reference rows from a CSV with columns
//   case,p_loss_kw,q_loss_kvar,vd_pu,min_vsi,cap_mvar,cap_bus,best_cost_pu,provenance
std::vector<ComparisonRow> load_reference_rows(const std::string& csv_path);

std::string format_table(const ComparisonTable& table);
void write_comparison_csv(const ComparisonTable& table, const std::string& path);

}  // namespace capopt
