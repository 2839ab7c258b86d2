#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "capopt/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitNoConvergence = 3;

struct CommonOpts {
    std::string scenario_path;
    std::string out_dir = "out";
    bool quiet = false;
};

void print_run_summary(const capopt::RunReport& r, const std::string& json_path, bool quiet) {
    if (quiet) return;
    std::cout << (r.kind == "base" ? "base case" : r.optimizer + " optimized case") << " on "
              << r.scenario_name << " (" << r.n_buses << " buses)\n";
    std::cout << "  P loss " << r.total_p_loss_kw << " kW, Q loss " << r.total_q_loss_kvar
              << " kvar\n";
    std::cout << "  min |V| " << r.min_voltage_pu << " pu at bus " << r.min_voltage_bus
              << ", VD " << r.vd_pu << " pu, min VSI " << r.min_vsi << "\n";
    if (!r.violating_buses.empty()) {
        std::cout << "  voltage violations at buses:";
        for (int b : r.violating_buses) std::cout << " " << b;
        std::cout << "\n";
    }
    if (r.kind != "base") {
        std::cout << "  plan:";
        for (const auto& p : r.plan.placements) {
            std::cout << " bus " << p.bus << " / " << p.size_kvar << " kvar";
        }
        std::cout << (r.feasible ? "" : "  [infeasible]") << "\n";
        std::cout << "  best cost " << r.best_cost << ", reductions P " << r.p_reduction_pct
                  << "% / Q " << r.q_reduction_pct << "%\n";
    }
    std::cout << "  report: " << json_path << "\n";
}

int run_one(const CommonOpts& opts, bool optimized, const std::string& optimizer_override,
            std::int64_t seed_override) {
    try {
        capopt::Scenario sc = capopt::load_scenario(opts.scenario_path);
        if (!optimizer_override.empty()) sc.optimizer = optimizer_override;
        if (seed_override >= 0) sc.seed = static_cast<std::uint64_t>(seed_override);

        capopt::RunReport report = optimized ? capopt::run_optimized(sc) : capopt::run_base(sc);
        const std::string json_path = capopt::write_run_outputs(report, opts.out_dir);
        print_run_summary(report, json_path, opts.quiet);
        return kExitOk;
    } catch (const capopt::SolveFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

int run_compare(const std::vector<std::string>& report_paths, const std::string& reference_path,
                const std::string& out_dir, bool quiet) {
    try {
        std::vector<capopt::RunReport> reports;
        for (const auto& path : report_paths) reports.push_back(capopt::load_report(path));
        std::vector<capopt::ComparisonRow> cited;
        if (!reference_path.empty()) cited = capopt::load_reference_rows(reference_path);

        const capopt::ComparisonTable table = capopt::compare_runs(reports, cited);
        fs::create_directories(out_dir);
        capopt::write_comparison_csv(table, (fs::path(out_dir) / "comparison.csv").string());
        if (!quiet) std::cout << capopt::format_table(table);
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial feeder capacitor placement toolkit"};
    app.require_subcommand(1);

    CommonOpts base_opts, opt_opts;
    std::string optimizer_override;
    std::int64_t seed_override = -1;

    auto* base = app.add_subcommand("base", "Solve the base case (no capacitors)");
    base->add_option("--scenario", base_opts.scenario_path, "Scenario file")->required();
    base->add_option("--out", base_opts.out_dir, "Output directory");
    base->add_flag("--quiet", base_opts.quiet, "Suppress console summary");

    auto* optimize = app.add_subcommand("optimize", "Search for a capacitor plan");
    optimize->add_option("--scenario", opt_opts.scenario_path, "Scenario file")->required();
    optimize->add_option("--out", opt_opts.out_dir, "Output directory");
    optimize->add_option("--seed", seed_override, "Override the scenario seed");
    optimize->add_option("--optimizer", optimizer_override, "csa or pso")
        ->check(CLI::IsMember({"csa", "pso"}));
    optimize->add_flag("--quiet", opt_opts.quiet, "Suppress console summary");

    std::vector<std::string> report_paths;
    std::string reference_path;
    std::string compare_out = "out";
    bool compare_quiet = false;
    auto* compare = app.add_subcommand("compare", "Merge run reports into one table");
    compare->add_option("reports", report_paths, "Run report JSON files")->required();
    compare->add_option("--reference", reference_path, "Cited reference rows CSV");
    compare->add_option("--out", compare_out, "Output directory");
    compare->add_flag("--quiet", compare_quiet, "Suppress console table");

    CLI11_PARSE(app, argc, argv);

    if (base->parsed()) return run_one(base_opts, false, "", -1);
    if (optimize->parsed()) return run_one(opt_opts, true, optimizer_override, seed_override);
    return run_compare(report_paths, reference_path, compare_out, compare_quiet);
}
