#pragma once

#include <vector>

namespace capopt {

// Shunt capacitors modeled as constant reactive injection (negative Q load).
struct CapacitorPlan {
    struct Placement {
        int bus = 0;
        double size_kvar = 0.0;
    };
    std::vector<Placement> placements;

    bool empty() const { return placements.empty(); }
    double total_kvar() const;

    // Same plan with duplicate bus ids summed into one placement, sorted by
    // bus. Evaluation always goes through the merged form.
    CapacitorPlan merged() const;
};

bool operator==(const CapacitorPlan::Placement& a, const CapacitorPlan::Placement& b);
bool operator==(const CapacitorPlan& a, const CapacitorPlan& b);

}  // namespace capopt
