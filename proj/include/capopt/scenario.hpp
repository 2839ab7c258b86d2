#pragma once

#include <cstdint>
#include <string>

#include "capopt/csa.hpp"
#include "capopt/loadflow.hpp"
#include "capopt/objective.hpp"
#include "capopt/pso.hpp"

namespace capopt {

// One experiment setup: which feeder, which bases, solver and objective
// settings, which optimizer with which hyperparameters. Loaded from a flat
// key = value file (keys carry explicit units; '#' starts a comment).
struct Scenario {
    std::string name;
    std::string branch_file;  // resolved against the scenario file's directory
    std::string load_file;
    double base_kv = 12.66;
    double base_mva = 1.0;

    SolverSettings solver;
    ObjectiveWeights weights;

    std::string optimizer = "csa";  // csa | pso
    int nc = 1;                     // capacitors per plan
    std::uint64_t seed = 1;
    bool parallel_eval = false;

    CsaConfig csa;
    PsoConfig pso;
};

// Parses a scenario file. Unknown keys are rejected. Referenced data files
// must exist. If `path` does not exist as given and CAPOPT_SCENARIO_DIR is
// set, the file is also looked up under that directory.
Scenario load_scenario(const std::string& path);

// Parses scenario text; `base_dir` anchors relative file references.
Scenario parse_scenario(const std::string& text, const std::string& base_dir,
                        const std::string& name);

}  // namespace capopt
