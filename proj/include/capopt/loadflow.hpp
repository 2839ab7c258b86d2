#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "capopt/network.hpp"
#include "capopt/plan.hpp"

namespace capopt {

using Complex = std::complex<double>;

// Thrown when a bus voltage magnitude collapses to (numerically) zero during
// current injection; solve_loadflow turns it into converged == false.
struct NumericalCollapse : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverSettings {
    double tolerance_pu = 1e-6;  // max |dV| between sweeps
    int max_iterations = 100;
};

struct LoadFlowSolution {
    std::vector<Complex> voltages;         // by bus id, slot 0 unused
    std::vector<Complex> branch_currents;  // by branch index
    std::vector<double> p_loss_kw;         // by branch index
    std::vector<double> q_loss_kvar;       // by branch index
    double total_p_loss_kw = 0.0;
    double total_q_loss_kvar = 0.0;
    int iterations = 0;
    bool converged = false;
    double final_max_dv = 0.0;  // last sweep's max |dV|, for diagnostics

    double voltage_magnitude(int bus) const { return std::abs(voltages[bus]); }
    int min_voltage_bus() const;
    double min_voltage_pu() const;
};

// Nodal current injections I_i = (P_i - jQ_i) / conj(V_i) with
// S_i = load_i - j*q_cap_i. Result indexed by bus id.
std::vector<Complex> inject_currents(const PerUnitNetwork& net,
                                     const std::vector<Complex>& voltages,
                                     const CapacitorPlan& plan);

// Leaf-to-root accumulation: each branch carries its receiving bus injection
// plus all child branch currents.
std::vector<Complex> backward_sweep(const PerUnitNetwork& net,
                                    const std::vector<Complex>& nodal_currents);

// Root-to-leaf voltage propagation: V_child = V_parent - J * Z.
std::vector<Complex> forward_sweep(const PerUnitNetwork& net,
                                   const std::vector<Complex>& branch_currents,
                                   Complex slack_voltage);

// Alternates inject/backward/forward from a flat start until max |dV| drops
// below tolerance or the iteration cap is hit. Never throws on divergence:
// callers check `converged` and decide between penalty and abort.
LoadFlowSolution solve_loadflow(const PerUnitNetwork& net, const CapacitorPlan& plan,
                                const SolverSettings& settings);

struct BranchLossTable {
    std::vector<double> p_kw;
    std::vector<double> q_kvar;
    double total_p_kw = 0.0;
    double total_q_kvar = 0.0;
};

// Per-branch loss from sending-end flows:
//   p = (P^2 + Q^2) / |V_send|^2 * R,  q = same numerator * X.
BranchLossTable branch_losses(const PerUnitNetwork& net,
                              const std::vector<Complex>& voltages,
                              const std::vector<Complex>& branch_currents);

// Sum over buses of |1 - |V||, in p.u.
double voltage_deviation(const LoadFlowSolution& solution);

struct VsiResult {
    std::vector<double> per_bus;  // by bus id; slack entry 1.0 by definition
    double min_value = 0.0;
    int min_bus = 0;
};

// Stability index of each receiving bus j fed by branch (i,j):
//   VSI_j = |V_i|^4 - 4 (P_j X - Q_j R)^2 - 4 (P_j R + Q_j X) |V_i|^2
// with P_j + jQ_j the receiving-end branch flow. 1.0 at no load.
VsiResult voltage_stability_index(const PerUnitNetwork& net, const LoadFlowSolution& solution);

// Complex power entering at the slack bus (p.u.); used by conservation checks.
Complex slack_injection_pu(const PerUnitNetwork& net, const LoadFlowSolution& solution);

}  // namespace capopt
