#include "capopt/loadflow.hpp"

#include <algorithm>
#include <cmath>

namespace capopt {

namespace {
constexpr double kCollapseMagnitude = 1e-9;
}

int LoadFlowSolution::min_voltage_bus() const {
    int best = 1;
    for (int b = 1; b < static_cast<int>(voltages.size()); ++b) {
        if (std::abs(voltages[b]) < std::abs(voltages[best])) best = b;
    }
    return best;
}

double LoadFlowSolution::min_voltage_pu() const { return std::abs(voltages[min_voltage_bus()]); }

std::vector<Complex> inject_currents(const PerUnitNetwork& net,
                                     const std::vector<Complex>& voltages,
                                     const CapacitorPlan& plan) {
    std::vector<Complex> injections(net.nb + 1, Complex{0.0, 0.0});

    std::vector<double> q_cap(net.nb + 1, 0.0);
    for (const auto& pl : plan.placements) q_cap[pl.bus] += pl.size_kvar / net.s_base_kva();

    for (int b = 1; b <= net.nb; ++b) {
        const Complex s{net.p_load[b], net.q_load[b] - q_cap[b]};
        if (s == Complex{0.0, 0.0}) continue;
        if (std::abs(voltages[b]) < kCollapseMagnitude) {
            throw NumericalCollapse("voltage collapsed to zero at bus " + std::to_string(b));
        }
        injections[b] = std::conj(s / voltages[b]);
    }
    return injections;
}

std::vector<Complex> backward_sweep(const PerUnitNetwork& net,
                                    const std::vector<Complex>& nodal_currents) {
    std::vector<Complex> branch_currents(net.lines.size(), Complex{0.0, 0.0});
    std::vector<Complex> flow = nodal_currents;  // running subtree current per bus

    for (auto level = net.levels.rbegin(); level != net.levels.rend(); ++level) {
        for (int bus : *level) {
            const int k = net.inflow_branch[bus];
            if (k < 0) continue;  // slack
            branch_currents[k] = flow[bus];
            flow[net.lines[k].from] += flow[bus];
        }
    }
    return branch_currents;
}

std::vector<Complex> forward_sweep(const PerUnitNetwork& net,
                                   const std::vector<Complex>& branch_currents,
                                   Complex slack_voltage) {
    std::vector<Complex> voltages(net.nb + 1, Complex{0.0, 0.0});
    voltages[net.slack] = slack_voltage;
    for (const auto& level : net.levels) {
        for (int bus : level) {
            for (int k : net.out_branches[bus]) {
                const auto& ln = net.lines[k];
                voltages[ln.to] = voltages[bus] - branch_currents[k] * Complex{ln.r, ln.x};
            }
        }
    }
    return voltages;
}

BranchLossTable branch_losses(const PerUnitNetwork& net, const std::vector<Complex>& voltages,
                              const std::vector<Complex>& branch_currents) {
    BranchLossTable table;
    table.p_kw.resize(net.lines.size());
    table.q_kvar.resize(net.lines.size());
    const double s_base = net.s_base_kva();

    for (std::size_t k = 0; k < net.lines.size(); ++k) {
        const auto& ln = net.lines[k];
        const Complex s_send = voltages[ln.from] * std::conj(branch_currents[k]);
        const double v2 = std::norm(voltages[ln.from]);
        const double numerator = v2 > 0.0 ? std::norm(s_send) / v2 : 0.0;
        table.p_kw[k] = numerator * ln.r * s_base;
        table.q_kvar[k] = numerator * ln.x * s_base;
        table.total_p_kw += table.p_kw[k];
        table.total_q_kvar += table.q_kvar[k];
    }
    return table;
}

LoadFlowSolution solve_loadflow(const PerUnitNetwork& net, const CapacitorPlan& plan,
                                const SolverSettings& settings) {
    LoadFlowSolution sol;
    sol.voltages.assign(net.nb + 1, Complex{1.0, 0.0});  // flat start
    sol.voltages[0] = Complex{0.0, 0.0};

    const CapacitorPlan merged = plan.merged();

    for (int iter = 1; iter <= settings.max_iterations; ++iter) {
        std::vector<Complex> injections;
        try {
            injections = inject_currents(net, sol.voltages, merged);
        } catch (const NumericalCollapse&) {
            sol.iterations = iter;
            sol.converged = false;
            sol.branch_currents.assign(net.lines.size(), Complex{0.0, 0.0});
            sol.p_loss_kw.assign(net.lines.size(), 0.0);
            sol.q_loss_kvar.assign(net.lines.size(), 0.0);
            return sol;
        }
        sol.branch_currents = backward_sweep(net, injections);
        std::vector<Complex> next = forward_sweep(net, sol.branch_currents, Complex{1.0, 0.0});

        double max_dv = 0.0;
        for (int b = 1; b <= net.nb; ++b) {
            max_dv = std::max(max_dv, std::abs(next[b] - sol.voltages[b]));
        }
        sol.voltages = std::move(next);
        sol.iterations = iter;
        sol.final_max_dv = max_dv;
        if (max_dv < settings.tolerance_pu) {
            sol.converged = true;
            break;
        }
    }

    if (sol.branch_currents.empty()) {
        sol.branch_currents.assign(net.lines.size(), Complex{0.0, 0.0});
    }
    const BranchLossTable losses = branch_losses(net, sol.voltages, sol.branch_currents);
    sol.p_loss_kw = losses.p_kw;
    sol.q_loss_kvar = losses.q_kvar;
    sol.total_p_loss_kw = losses.total_p_kw;
    sol.total_q_loss_kvar = losses.total_q_kvar;
    return sol;
}

double voltage_deviation(const LoadFlowSolution& solution) {
    double sum = 0.0;
    for (std::size_t b = 1; b < solution.voltages.size(); ++b) {
        sum += std::abs(1.0 - std::abs(solution.voltages[b]));
    }
    return sum;
}

VsiResult voltage_stability_index(const PerUnitNetwork& net, const LoadFlowSolution& solution) {
    VsiResult result;
    result.per_bus.assign(net.nb + 1, 1.0);
    result.per_bus[0] = 0.0;

    for (std::size_t k = 0; k < net.lines.size(); ++k) {
        const auto& ln = net.lines[k];
        const Complex s_recv = solution.voltages[ln.to] * std::conj(solution.branch_currents[k]);
        const double pj = s_recv.real();
        const double qj = s_recv.imag();
        const double vi2 = std::norm(solution.voltages[ln.from]);
        const double cross = pj * ln.x - qj * ln.r;
        const double through = pj * ln.r + qj * ln.x;
        result.per_bus[ln.to] = vi2 * vi2 - 4.0 * cross * cross - 4.0 * through * vi2;
    }

    result.min_bus = net.slack;
    result.min_value = result.per_bus[net.slack];
    for (int b = 1; b <= net.nb; ++b) {
        if (result.per_bus[b] < result.min_value) {
            result.min_value = result.per_bus[b];
            result.min_bus = b;
        }
    }
    return result;
}

Complex slack_injection_pu(const PerUnitNetwork& net, const LoadFlowSolution& solution) {
    Complex current{0.0, 0.0};
    for (int k : net.out_branches[net.slack]) current += solution.branch_currents[k];
    return solution.voltages[net.slack] * std::conj(current);
}

}  // namespace capopt
