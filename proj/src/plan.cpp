#include "capopt/plan.hpp"

#include <algorithm>
#include <map>

namespace capopt {

double CapacitorPlan::total_kvar() const {
    double sum = 0.0;
    for (const auto& p : placements) sum += p.size_kvar;
    return sum;
}

CapacitorPlan CapacitorPlan::merged() const {
    std::map<int, double> by_bus;
    for (const auto& p : placements) by_bus[p.bus] += p.size_kvar;
    CapacitorPlan out;
    out.placements.reserve(by_bus.size());
    for (const auto& [bus, kvar] : by_bus) out.placements.push_back({bus, kvar});
    return out;
}

bool operator==(const CapacitorPlan::Placement& a, const CapacitorPlan::Placement& b) {
    return a.bus == b.bus && a.size_kvar == b.size_kvar;
}

bool operator==(const CapacitorPlan& a, const CapacitorPlan& b) {
    return a.placements == b.placements;
}

}  // namespace capopt
