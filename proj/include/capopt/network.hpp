#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace capopt {

// Thrown on malformed input text (bad row, non-numeric field, unknown key).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when parsed data violates a structural rule (duplicate branch,
// self-loop, load on the slack bus, non-positive base values).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when the branch graph is not a tree rooted at the slack bus.
struct TopologyError : ValidationError {
    using ValidationError::ValidationError;
};

struct Bus {
    int id = 0;
    double p_load_kw = 0.0;
    double q_load_kvar = 0.0;
    bool is_slack = false;
};

struct Branch {
    int from_bus = 0;  // sending end
    int to_bus = 0;    // receiving end
    double r_ohm = 0.0;
    double x_ohm = 0.0;
};

// A radial feeder. Buses are sorted by id (1..n, contiguous); bus 1 is the
// substation/slack. Branches are kept in canonical (from,to) order so that
// two files describing the same feeder parse to identical structures.
// parent/levels/inflow_branch are filled by validate_radial().
struct Network {
    double base_kv = 0.0;
    double base_mva = 0.0;
    std::vector<Bus> buses;
    std::vector<Branch> branches;

    // Topology, valid only when validated == true. Arrays indexed by bus id
    // (slot 0 unused). parent[slack] == 0; inflow_branch[slack] == -1.
    std::vector<int> parent;
    std::vector<int> inflow_branch;
    std::vector<std::vector<int>> levels;  // bus ids grouped by depth, root first
    bool validated = false;

    int n_buses() const { return static_cast<int>(buses.size()); }
    int slack_bus() const { return 1; }
    double total_p_load_kw() const;
    double total_q_load_kvar() const;

    // Stable textual form used for order-insensitivity checks and fingerprints.
    std::string canonical_serialization() const;
};

// Per-unit view of a validated Network on (base_kv, base_mva).
//   z_pu = z_ohm * base_mva / base_kv^2
//   s_pu = s_kw_or_kvar / (1000 * base_mva)
// Load and topology arrays are indexed by bus id, slot 0 unused.
struct PerUnitNetwork {
    struct Line {
        int from = 0;
        int to = 0;
        double r = 0.0;  // p.u.
        double x = 0.0;  // p.u.
    };

    double base_kv = 0.0;
    double base_mva = 0.0;
    int nb = 0;
    std::vector<double> p_load;  // p.u.
    std::vector<double> q_load;  // p.u.
    std::vector<Line> lines;     // canonical branch order, parent -> child
    std::vector<int> parent;
    std::vector<int> inflow_branch;
    std::vector<std::vector<int>> levels;
    std::vector<std::vector<int>> out_branches;  // by bus id: indices into lines

    int slack = 1;

    int max_bus() const { return nb; }
    double z_base_ohm() const { return base_kv * base_kv / base_mva; }
    double s_base_kva() const { return 1000.0 * base_mva; }

    // Inverse scaling back to physical units.
    double branch_r_ohm(std::size_t k) const { return lines[k].r * z_base_ohm(); }
    double branch_x_ohm(std::size_t k) const { return lines[k].x * z_base_ohm(); }
    double bus_p_load_kw(int bus) const { return p_load[bus] * s_base_kva(); }
    double bus_q_load_kvar(int bus) const { return q_load[bus] * s_base_kva(); }

    double total_p_load_pu() const;
    double total_q_load_pu() const;
    double total_q_load_kvar() const { return total_q_load_pu() * s_base_kva(); }

    std::string canonical_serialization() const;
};

// Parses the two delimited tables (branch: from,to,r_ohm,x_ohm; load:
// bus,p_kw,q_kvar). Buses are inferred from the branch table; loads attach to
// existing buses only. Reports the 1-based line number on malformed rows.
Network parse_network(std::string_view branch_table, std::string_view load_table,
                      double base_kv, double base_mva);

// File-based convenience wrapper around parse_network.
Network parse_network_files(const std::string& branch_path, const std::string& load_path,
                            double base_kv, double base_mva);

// Checks that the branch graph is a tree rooted at the slack bus and fills
// parent, inflow_branch and levels. Branch orientation is normalized to
// parent -> child. Throws TopologyError naming the offending branch (cycle)
// or bus (disconnected).
Network validate_radial(Network net);

// Scales a validated network to per-unit.
PerUnitNetwork to_per_unit(const Network& net);

// FNV-1a hash of the canonical serialization; used to refuse comparing runs
// made on different feeders.
std::uint64_t fingerprint(const PerUnitNetwork& net);
std::string fingerprint_hex(const PerUnitNetwork& net);

}  // namespace capopt
