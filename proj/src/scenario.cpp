#include "capopt/scenario.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace capopt {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError("scenario: key '" + key + "' has non-numeric value '" + value + "'");
    }
    return out;
}

int to_int(const std::string& key, const std::string& value) {
    const double d = to_double(key, value);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d) {
        throw ParseError("scenario: key '" + key + "' must be an integer, got '" + value + "'");
    }
    return i;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ParseError("scenario: key '" + key + "' must be true/false, got '" + value + "'");
}

void require_positive(const std::string& key, double v) {
    if (v <= 0.0) throw ValidationError("scenario: " + key + " must be positive");
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& base_dir,
                        const std::string& name) {
    Scenario sc;
    sc.name = name;

    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("scenario line " + std::to_string(line_no) +
                             ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ParseError("scenario line " + std::to_string(line_no) +
                             ": empty key or value");
        }
        if (!kv.emplace(key, value).second) {
            throw ParseError("scenario: duplicate key '" + key + "'");
        }
    }

    auto take = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        return &it->second;
    };

    if (const auto* v = take("name")) sc.name = *v;
    if (const auto* v = take("branch_file")) sc.branch_file = (fs::path(base_dir) / *v).string();
    if (const auto* v = take("load_file")) sc.load_file = (fs::path(base_dir) / *v).string();
    if (const auto* v = take("base_kv")) sc.base_kv = to_double("base_kv", *v);
    if (const auto* v = take("base_mva")) sc.base_mva = to_double("base_mva", *v);
    if (const auto* v = take("tolerance_pu")) sc.solver.tolerance_pu = to_double("tolerance_pu", *v);
    if (const auto* v = take("max_lf_iterations"))
        sc.solver.max_iterations = to_int("max_lf_iterations", *v);

    if (const auto* v = take("p_cost_per_kw")) sc.weights.p_cost = to_double("p_cost_per_kw", *v);
    if (const auto* v = take("q_cost_per_kvar"))
        sc.weights.q_cost = to_double("q_cost_per_kvar", *v);
    if (const auto* v = take("cap_cost_per_kvar"))
        sc.weights.cap_cost = to_double("cap_cost_per_kvar", *v);
    if (const auto* v = take("deviation_cost_per_pu"))
        sc.weights.deviation_cost = to_double("deviation_cost_per_pu", *v);
    if (const auto* v = take("penalty_voltage_per_pu"))
        sc.weights.penalty_voltage = to_double("penalty_voltage_per_pu", *v);
    if (const auto* v = take("penalty_capsize_per_kvar"))
        sc.weights.penalty_capsize = to_double("penalty_capsize_per_kvar", *v);
    if (const auto* v = take("penalty_divergence"))
        sc.weights.penalty_divergence = to_double("penalty_divergence", *v);

    if (const auto* v = take("optimizer")) {
        if (*v != "csa" && *v != "pso") {
            throw ParseError("scenario: optimizer must be 'csa' or 'pso', got '" + *v + "'");
        }
        sc.optimizer = *v;
    }
    if (const auto* v = take("nc")) sc.nc = to_int("nc", *v);
    if (const auto* v = take("seed")) sc.seed = static_cast<std::uint64_t>(to_double("seed", *v));
    if (const auto* v = take("parallel_eval")) sc.parallel_eval = to_bool("parallel_eval", *v);

    if (const auto* v = take("csa_n_crows")) sc.csa.n_crows = to_int("csa_n_crows", *v);
    if (const auto* v = take("csa_max_iter")) sc.csa.max_iter = to_int("csa_max_iter", *v);
    if (const auto* v = take("csa_fl")) sc.csa.fl = to_double("csa_fl", *v);
    if (const auto* v = take("csa_ap")) sc.csa.ap = to_double("csa_ap", *v);

    if (const auto* v = take("pso_n_particles")) sc.pso.n_particles = to_int("pso_n_particles", *v);
    if (const auto* v = take("pso_max_iter")) sc.pso.max_iter = to_int("pso_max_iter", *v);
    if (const auto* v = take("pso_w")) sc.pso.w = to_double("pso_w", *v);
    if (const auto* v = take("pso_c1")) sc.pso.c1 = to_double("pso_c1", *v);
    if (const auto* v = take("pso_c2")) sc.pso.c2 = to_double("pso_c2", *v);
    if (const auto* v = take("pso_v_max_fraction"))
        sc.pso.v_max_fraction = to_double("pso_v_max_fraction", *v);

    static const char* known[] = {
        "name", "branch_file", "load_file", "base_kv", "base_mva", "tolerance_pu",
        "max_lf_iterations", "p_cost_per_kw", "q_cost_per_kvar", "cap_cost_per_kvar",
        "deviation_cost_per_pu", "penalty_voltage_per_pu", "penalty_capsize_per_kvar",
        "penalty_divergence", "optimizer", "nc", "seed", "parallel_eval", "csa_n_crows",
        "csa_max_iter", "csa_fl", "csa_ap", "pso_n_particles", "pso_max_iter", "pso_w",
        "pso_c1", "pso_c2", "pso_v_max_fraction"};
    for (const auto& [key, value] : kv) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ParseError("scenario: unknown key '" + key + "'");
    }

    if (sc.branch_file.empty() || sc.load_file.empty()) {
        throw ValidationError("scenario: branch_file and load_file are required");
    }
    if (!fs::exists(sc.branch_file)) throw ValidationError("scenario: missing " + sc.branch_file);
    if (!fs::exists(sc.load_file)) throw ValidationError("scenario: missing " + sc.load_file);
    require_positive("base_kv", sc.base_kv);
    require_positive("base_mva", sc.base_mva);
    require_positive("tolerance_pu", sc.solver.tolerance_pu);
    if (sc.solver.max_iterations < 1) {
        throw ValidationError("scenario: max_lf_iterations must be >= 1");
    }
    if (sc.nc < 1) throw ValidationError("scenario: nc must be >= 1");

    sc.csa.seed = sc.seed;
    sc.pso.seed = sc.seed;
    sc.csa.parallel_eval = sc.parallel_eval;
    sc.pso.parallel_eval = sc.parallel_eval;
    return sc;
}

Scenario load_scenario(const std::string& path) {
    fs::path where(path);
    if (!fs::exists(where)) {
        if (const char* dir = std::getenv("CAPOPT_SCENARIO_DIR")) {
            const fs::path alt = fs::path(dir) / path;
            if (fs::exists(alt)) where = alt;
        }
    }
    std::ifstream in(where);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), where.parent_path().string(), where.stem().string());
}

}  // namespace capopt
