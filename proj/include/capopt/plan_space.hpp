#pragma once

#include <span>
#include <vector>

#include "capopt/network.hpp"
#include "capopt/plan.hpp"

namespace capopt {

// Box constraints of the encoded search space, one (lower, upper) pair per
// dimension. A plan of nc capacitors occupies 2*nc dimensions laid out as
// (location_1, size_1, ..., location_nc, size_nc).
struct PlanBounds {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dimensions() const { return lower.size(); }
    bool empty() const { return lower.empty(); }
};

// Location in [2, L_max] (slack excluded), size in [0, total load kvar].
PlanBounds default_plan_bounds(const PerUnitNetwork& net, int nc);

// Continuous relaxation: the location dimension stores the bus id as a real
// number and decodes by rounding to the nearest bus; both dimensions clamp
// into the network's valid range, so decoding never fails.
CapacitorPlan decode_position(std::span<const double> position, const PerUnitNetwork& net);

std::vector<double> encode_plan(const CapacitorPlan& plan, const PerUnitNetwork& net);

void clamp_to_bounds(std::vector<double>& position, const PlanBounds& bounds);

}  // namespace capopt
