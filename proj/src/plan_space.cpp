#include "capopt/plan_space.hpp"

#include <algorithm>
#include <cmath>

namespace capopt {

PlanBounds default_plan_bounds(const PerUnitNetwork& net, int nc) {
    PlanBounds bounds;
    bounds.lower.reserve(2 * nc);
    bounds.upper.reserve(2 * nc);
    for (int i = 0; i < nc; ++i) {
        bounds.lower.push_back(2.0);
        bounds.upper.push_back(static_cast<double>(net.max_bus()));
        bounds.lower.push_back(0.0);
        bounds.upper.push_back(net.total_q_load_kvar());
    }
    return bounds;
}

CapacitorPlan decode_position(std::span<const double> position, const PerUnitNetwork& net) {
    CapacitorPlan plan;
    plan.placements.reserve(position.size() / 2);
    for (std::size_t i = 0; i + 1 < position.size(); i += 2) {
        const long bus = std::lround(position[i]);
        const long clamped = std::clamp(bus, 2L, static_cast<long>(net.max_bus()));
        const double kvar = std::clamp(position[i + 1], 0.0, net.total_q_load_kvar());
        plan.placements.push_back({static_cast<int>(clamped), kvar});
    }
    return plan;
}

std::vector<double> encode_plan(const CapacitorPlan& plan, const PerUnitNetwork&) {
    std::vector<double> position;
    position.reserve(2 * plan.placements.size());
    for (const auto& p : plan.placements) {
        position.push_back(static_cast<double>(p.bus));
        position.push_back(p.size_kvar);
    }
    return position;
}

void clamp_to_bounds(std::vector<double>& position, const PlanBounds& bounds) {
    for (std::size_t d = 0; d < position.size(); ++d) {
        position[d] = std::clamp(position[d], bounds.lower[d], bounds.upper[d]);
    }
}

}  // namespace capopt
