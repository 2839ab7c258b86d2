#include "capopt/report.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace capopt {

namespace {

json scenario_echo(const Scenario& sc) {
    json j;
    j["name"] = sc.name;
    j["branch_file"] = sc.branch_file;
    j["load_file"] = sc.load_file;
    j["base_kv"] = sc.base_kv;
    j["base_mva"] = sc.base_mva;
    j["tolerance_pu"] = sc.solver.tolerance_pu;
    j["max_lf_iterations"] = sc.solver.max_iterations;
    j["p_cost_per_kw"] = sc.weights.p_cost;
    j["q_cost_per_kvar"] = sc.weights.q_cost;
    j["cap_cost_per_kvar"] = sc.weights.cap_cost;
    j["deviation_cost_per_pu"] = sc.weights.deviation_cost;
    j["penalty_voltage_per_pu"] = sc.weights.penalty_voltage;
    j["penalty_capsize_per_kvar"] = sc.weights.penalty_capsize;
    j["penalty_divergence"] = sc.weights.penalty_divergence;
    j["optimizer"] = sc.optimizer;
    j["nc"] = sc.nc;
    j["seed"] = sc.seed;
    j["parallel_eval"] = sc.parallel_eval;
    j["csa"] = {{"n_crows", sc.csa.n_crows},
                {"max_iter", sc.csa.max_iter},
                {"fl", sc.csa.fl},
                {"ap", sc.csa.ap}};
    j["pso"] = {{"n_particles", sc.pso.n_particles},
                {"max_iter", sc.pso.max_iter},
                {"w", sc.pso.w},
                {"c1", sc.pso.c1},
                {"c2", sc.pso.c2},
                {"v_max_fraction", sc.pso.v_max_fraction}};
    return j;
}

struct LoadedCase {
    PerUnitNetwork net;
    LoadFlowSolution base;
    PlanEvaluation base_eval;
};

LoadedCase solve_base_case(const Scenario& sc) {
    LoadedCase out;
    Network net = validate_radial(
        parse_network_files(sc.branch_file, sc.load_file, sc.base_kv, sc.base_mva));
    out.net = to_per_unit(net);
    out.base_eval = evaluate_plan(out.net, CapacitorPlan{}, sc.weights, sc.solver);
    out.base = out.base_eval.solution;
    if (!out.base.converged) {
        std::ostringstream msg;
        msg << "load flow did not converge in " << out.base.iterations
            << " iterations (last max |dV| = " << out.base.final_max_dv << " pu)";
        throw SolveFailure(msg.str(), out.base.final_max_dv, out.base.iterations);
    }
    return out;
}

void fill_state(RunReport& report, const PerUnitNetwork& net, const LoadFlowSolution& sol) {
    report.n_buses = net.nb;
    report.converged = sol.converged;
    report.iterations = sol.iterations;
    report.total_p_loss_kw = sol.total_p_loss_kw;
    report.total_q_loss_kvar = sol.total_q_loss_kvar;
    report.vd_pu = voltage_deviation(sol);

    const VsiResult vsi = voltage_stability_index(net, sol);
    report.min_vsi = vsi.min_value;
    report.min_vsi_bus = vsi.min_bus;
    report.min_voltage_bus = sol.min_voltage_bus();
    report.min_voltage_pu = sol.min_voltage_pu();

    report.bus_voltage.resize(net.nb);
    report.violating_buses.clear();
    for (int b = 1; b <= net.nb; ++b) {
        const double v = sol.voltage_magnitude(b);
        report.bus_voltage[b - 1] = v;
        if (v < kVoltageLower || v > kVoltageUpper) report.violating_buses.push_back(b);
    }

    report.branch_loss.resize(net.lines.size());
    for (std::size_t k = 0; k < net.lines.size(); ++k) {
        report.branch_loss[k] = {net.lines[k].from, net.lines[k].to, sol.p_loss_kw[k],
                                 sol.q_loss_kvar[k]};
    }
}

}  // namespace

RunReport run_base(const Scenario& sc) {
    LoadedCase here = solve_base_case(sc);

    RunReport report;
    report.kind = "base";
    report.scenario_name = sc.name;
    report.scenario_echo = scenario_echo(sc);
    report.network_fingerprint = fingerprint_hex(here.net);
    fill_state(report, here.net, here.base);
    report.bus_voltage_base = report.bus_voltage;
    report.branch_loss_base = report.branch_loss;
    report.raw_cost = here.base_eval.raw_cost;
    report.best_cost = here.base_eval.penalized_cost;
    report.feasible = here.base_eval.constraints.feasible();
    report.base_p_loss_kw = report.total_p_loss_kw;
    report.base_q_loss_kvar = report.total_q_loss_kvar;
    return report;
}

RunReport run_optimized(const Scenario& sc) {
    LoadedCase here = solve_base_case(sc);

    PlanRunResult result;
    if (sc.optimizer == "pso") {
        PsoConfig config = sc.pso;
        config.seed = sc.seed;
        config.parallel_eval = sc.parallel_eval;
        if (config.bounds.empty()) config.bounds = default_plan_bounds(here.net, sc.nc);
        result = run_pso(config, here.net, sc.weights, sc.solver);
    } else {
        CsaConfig config = sc.csa;
        config.seed = sc.seed;
        config.parallel_eval = sc.parallel_eval;
        if (config.bounds.empty()) config.bounds = default_plan_bounds(here.net, sc.nc);
        result = run_csa(config, here.net, sc.weights, sc.solver);
    }

    const LoadFlowSolution& optimized = result.best_eval.solution;
    if (!optimized.converged) {
        std::ostringstream msg;
        msg << "optimized-case load flow did not converge (last max |dV| = "
            << optimized.final_max_dv << " pu)";
        throw SolveFailure(msg.str(), optimized.final_max_dv, optimized.iterations);
    }

    RunReport report;
    report.kind = "optimized";
    report.scenario_name = sc.name;
    report.scenario_echo = scenario_echo(sc);
    report.network_fingerprint = fingerprint_hex(here.net);
    fill_state(report, here.net, optimized);

    report.bus_voltage_base.resize(here.net.nb);
    for (int b = 1; b <= here.net.nb; ++b) {
        report.bus_voltage_base[b - 1] = here.base.voltage_magnitude(b);
    }
    report.branch_loss_base.resize(here.net.lines.size());
    for (std::size_t k = 0; k < here.net.lines.size(); ++k) {
        report.branch_loss_base[k] = {here.net.lines[k].from, here.net.lines[k].to,
                                      here.base.p_loss_kw[k], here.base.q_loss_kvar[k]};
    }

    report.plan = result.best_plan;
    report.raw_cost = result.best_eval.raw_cost;
    report.best_cost = result.best_cost;
    report.feasible = result.feasible;
    report.optimizer = sc.optimizer;
    report.seed = sc.seed;
    report.base_p_loss_kw = here.base.total_p_loss_kw;
    report.base_q_loss_kvar = here.base.total_q_loss_kvar;
    report.p_reduction_pct =
        100.0 * (report.base_p_loss_kw - report.total_p_loss_kw) / report.base_p_loss_kw;
    report.q_reduction_pct =
        100.0 * (report.base_q_loss_kvar - report.total_q_loss_kvar) / report.base_q_loss_kvar;
    report.convergence = result.history.best_cost_per_iteration;
    return report;
}

json to_json(const RunReport& r) {
    json j;
    j["kind"] = r.kind;
    j["scenario_name"] = r.scenario_name;
    j["scenario"] = r.scenario_echo;
    j["network_fingerprint"] = r.network_fingerprint;
    j["n_buses"] = r.n_buses;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["total_p_loss_kw"] = r.total_p_loss_kw;
    j["total_q_loss_kvar"] = r.total_q_loss_kvar;
    j["vd_pu"] = r.vd_pu;
    j["min_vsi"] = r.min_vsi;
    j["min_vsi_bus"] = r.min_vsi_bus;
    j["min_voltage_pu"] = r.min_voltage_pu;
    j["min_voltage_bus"] = r.min_voltage_bus;
    j["violating_buses"] = r.violating_buses;
    j["bus_voltage"] = r.bus_voltage;
    j["bus_voltage_base"] = r.bus_voltage_base;
    auto rows = [](const std::vector<RunReport::BranchRow>& table) {
        json out = json::array();
        for (const auto& row : table) {
            out.push_back({{"from", row.from}, {"to", row.to}, {"p_kw", row.p_kw},
                           {"q_kvar", row.q_kvar}});
        }
        return out;
    };
    j["branch_loss"] = rows(r.branch_loss);
    j["branch_loss_base"] = rows(r.branch_loss_base);
    json plan = json::array();
    for (const auto& p : r.plan.placements) {
        plan.push_back({{"bus", p.bus}, {"kvar", p.size_kvar}});
    }
    j["plan"] = plan;
    j["raw_cost"] = r.raw_cost;
    j["best_cost"] = r.best_cost;
    j["feasible"] = r.feasible;
    j["optimizer"] = r.optimizer;
    j["seed"] = r.seed;
    j["base_p_loss_kw"] = r.base_p_loss_kw;
    j["base_q_loss_kvar"] = r.base_q_loss_kvar;
    j["p_reduction_pct"] = r.p_reduction_pct;
    j["q_reduction_pct"] = r.q_reduction_pct;
    j["convergence"] = r.convergence;
    j["convergence_csv"] = r.convergence_csv;
    return j;
}

RunReport report_from_json(const json& j) {
    RunReport r;
    r.kind = j.at("kind").get<std::string>();
    r.scenario_name = j.at("scenario_name").get<std::string>();
    r.scenario_echo = j.at("scenario");
    r.network_fingerprint = j.at("network_fingerprint").get<std::string>();
    r.n_buses = j.at("n_buses").get<int>();
    r.converged = j.at("converged").get<bool>();
    r.iterations = j.at("iterations").get<int>();
    r.total_p_loss_kw = j.at("total_p_loss_kw").get<double>();
    r.total_q_loss_kvar = j.at("total_q_loss_kvar").get<double>();
    r.vd_pu = j.at("vd_pu").get<double>();
    r.min_vsi = j.at("min_vsi").get<double>();
    r.min_vsi_bus = j.at("min_vsi_bus").get<int>();
    r.min_voltage_pu = j.at("min_voltage_pu").get<double>();
    r.min_voltage_bus = j.at("min_voltage_bus").get<int>();
    r.violating_buses = j.at("violating_buses").get<std::vector<int>>();
    r.bus_voltage = j.at("bus_voltage").get<std::vector<double>>();
    r.bus_voltage_base = j.at("bus_voltage_base").get<std::vector<double>>();
    auto rows = [](const json& table) {
        std::vector<RunReport::BranchRow> out;
        for (const auto& row : table) {
            out.push_back({row.at("from").get<int>(), row.at("to").get<int>(),
                           row.at("p_kw").get<double>(), row.at("q_kvar").get<double>()});
        }
        return out;
    };
    r.branch_loss = rows(j.at("branch_loss"));
    r.branch_loss_base = rows(j.at("branch_loss_base"));
    for (const auto& p : j.at("plan")) {
        r.plan.placements.push_back({p.at("bus").get<int>(), p.at("kvar").get<double>()});
    }
    r.raw_cost = j.at("raw_cost").get<double>();
    r.best_cost = j.at("best_cost").get<double>();
    r.feasible = j.at("feasible").get<bool>();
    r.optimizer = j.at("optimizer").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.base_p_loss_kw = j.at("base_p_loss_kw").get<double>();
    r.base_q_loss_kvar = j.at("base_q_loss_kvar").get<double>();
    r.p_reduction_pct = j.at("p_reduction_pct").get<double>();
    r.q_reduction_pct = j.at("q_reduction_pct").get<double>();
    r.convergence = j.at("convergence").get<std::vector<double>>();
    r.convergence_csv = j.at("convergence_csv").get<std::string>();
    return r;
}

RunReport load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open report: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("bad report JSON in " + path + ": " + e.what());
    }
    return report_from_json(j);
}

std::string write_run_outputs(RunReport& report, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const std::string prefix = report.kind == "base" ? "base" : report.optimizer;
    const fs::path dir(out_dir);

    {
        std::ofstream csv(dir / (prefix + "_voltage_profile.csv"));
        csv << std::setprecision(10);
        if (report.kind == "base") {
            csv << "bus,v_pu\n";
            for (int b = 1; b <= report.n_buses; ++b) {
                csv << b << "," << report.bus_voltage[b - 1] << "\n";
            }
        } else {
            csv << "bus,v_base_pu,v_opt_pu\n";
            for (int b = 1; b <= report.n_buses; ++b) {
                csv << b << "," << report.bus_voltage_base[b - 1] << ","
                    << report.bus_voltage[b - 1] << "\n";
            }
        }
    }

    {
        std::ofstream csv(dir / (prefix + "_branch_losses.csv"));
        csv << std::setprecision(10);
        if (report.kind == "base") {
            csv << "from_bus,to_bus,p_loss_kw,q_loss_kvar\n";
            for (const auto& row : report.branch_loss) {
                csv << row.from << "," << row.to << "," << row.p_kw << "," << row.q_kvar << "\n";
            }
        } else {
            csv << "from_bus,to_bus,base_p_loss_kw,base_q_loss_kvar,p_loss_kw,q_loss_kvar\n";
            for (std::size_t k = 0; k < report.branch_loss.size(); ++k) {
                const auto& b = report.branch_loss_base[k];
                const auto& o = report.branch_loss[k];
                csv << o.from << "," << o.to << "," << b.p_kw << "," << b.q_kvar << ","
                    << o.p_kw << "," << o.q_kvar << "\n";
            }
        }
    }

    if (report.kind != "base") {
        report.convergence_csv = prefix + "_convergence.csv";
        std::ofstream csv(dir / report.convergence_csv);
        csv << std::setprecision(10);
        csv << "iteration,best_cost\n";
        for (std::size_t i = 0; i < report.convergence.size(); ++i) {
            csv << (i + 1) << "," << report.convergence[i] << "\n";
        }
    }

    const fs::path json_path = dir / (prefix + "_report.json");
    std::ofstream out(json_path);
    out << to_json(report).dump(2) << "\n";
    return json_path.string();
}

ComparisonTable compare_runs(const std::vector<RunReport>& reports,
                             const std::vector<ComparisonRow>& cited) {
    if (reports.empty()) throw ValidationError("compare: need at least one report");
    ComparisonTable table;
    table.network_fingerprint = reports.front().network_fingerprint;
    for (const auto& r : reports) {
        if (r.network_fingerprint != table.network_fingerprint) {
            throw ValidationError("compare: reports come from different networks (fingerprint " +
                                  r.network_fingerprint + " vs " + table.network_fingerprint + ")");
        }
        ComparisonRow row;
        row.label = r.kind == "base" ? "Base" : r.optimizer;
        std::transform(row.label.begin(), row.label.end(), row.label.begin(), ::toupper);
        if (r.kind == "base") row.label = "Base";
        row.provenance = "computed";
        row.p_loss_kw = r.total_p_loss_kw;
        row.q_loss_kvar = r.total_q_loss_kvar;
        row.vd_pu = r.vd_pu;
        row.min_vsi = r.min_vsi;
        if (!r.plan.empty()) {
            row.cap_mvar = r.plan.total_kvar() / 1000.0;
            row.cap_bus = r.plan.placements.front().bus;
            row.best_cost = r.best_cost;
        }
        table.rows.push_back(std::move(row));
    }
    for (const auto& row : cited) table.rows.push_back(row);
    return table;
}

std::vector<ComparisonRow> load_reference_rows(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw ParseError("cannot open reference table: " + csv_path);
    std::vector<ComparisonRow> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line_no == 1) continue;  // header
        std::vector<std::string> f;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            f.push_back(line.substr(start, comma == std::string::npos ? std::string::npos
                                                                      : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (f.size() != 9) {
            throw ParseError("reference table line " + std::to_string(line_no) +
                             ": expected 9 columns");
        }
        auto num = [&](const std::string& s) -> double {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || ptr != s.data() + s.size()) {
                throw ParseError("reference table line " + std::to_string(line_no) +
                                 ": non-numeric field '" + s + "'");
            }
            return v;
        };
        ComparisonRow row;
        row.label = f[0];
        row.p_loss_kw = num(f[1]);
        row.q_loss_kvar = num(f[2]);
        row.vd_pu = num(f[3]);
        row.min_vsi = num(f[4]);
        if (!f[5].empty()) row.cap_mvar = num(f[5]);
        if (!f[6].empty()) row.cap_bus = static_cast<int>(num(f[6]));
        if (!f[7].empty()) row.best_cost = num(f[7]);
        row.provenance = f[8];
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_table(const ComparisonTable& table) {
    std::ostringstream out;
    out << "case               source    Ploss_kW  Qloss_kvar     VD      VSI   cap_Mvar  bus  best_cost\n";
    for (const auto& r : table.rows) {
        char line[160];
        auto opt = [](const std::optional<double>& v, const char* fmt) {
            char buf[32];
            if (!v) return std::string("      -");
            std::snprintf(buf, sizeof buf, fmt, *v);
            return std::string(buf);
        };
        std::string bus = r.cap_bus ? std::to_string(*r.cap_bus) : "-";
        std::snprintf(line, sizeof line, "%-18s %-8s %9.2f %11.2f %7.3f %8.4f %s %4s %s\n",
                      r.label.c_str(), r.provenance.c_str(), r.p_loss_kw, r.q_loss_kvar, r.vd_pu,
                      r.min_vsi, opt(r.cap_mvar, "%10.4f").c_str(), bus.c_str(),
                      opt(r.best_cost, "%10.4f").c_str());
        out << line;
    }
    return out.str();
}

void write_comparison_csv(const ComparisonTable& table, const std::string& path) {
    std::ofstream csv(path);
    csv << std::setprecision(10);
    csv << "case,provenance,p_loss_kw,q_loss_kvar,vd_pu,min_vsi,cap_mvar,cap_bus,best_cost\n";
    for (const auto& r : table.rows) {
        csv << r.label << "," << r.provenance << "," << r.p_loss_kw << "," << r.q_loss_kvar << ","
            << r.vd_pu << "," << r.min_vsi << ",";
        if (r.cap_mvar) csv << *r.cap_mvar;
        csv << ",";
        if (r.cap_bus) csv << *r.cap_bus;
        csv << ",";
        if (r.best_cost) csv << *r.best_cost;
        csv << "\n";
    }
}

}  // namespace capopt
