#include "capopt/network.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

namespace capopt {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view field, const char* table, int line_no) {
    field = trim(field);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.begin(), field.end(), value);
    if (ec != std::errc{} || ptr != field.end()) {
        throw ParseError(std::string(table) + " table, line " + std::to_string(line_no) +
                         ": non-numeric field '" + std::string(field) + "'");
    }
    return value;
}

int parse_bus_id(std::string_view field, const char* table, int line_no) {
    field = trim(field);
    int value = 0;
    auto [ptr, ec] = std::from_chars(field.begin(), field.end(), value);
    if (ec != std::errc{} || ptr != field.end()) {
        throw ParseError(std::string(table) + " table, line " + std::to_string(line_no) +
                         ": non-integer bus id '" + std::string(field) + "'");
    }
    return value;
}

// Calls fn(line_no, fields) for every non-empty row.
template <typename Fn>
void for_each_row(std::string_view text, const char* table, std::size_t n_cols, Fn fn) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != n_cols) {
            throw ParseError(std::string(table) + " table, line " + std::to_string(line_no) +
                             ": expected " + std::to_string(n_cols) + " columns, got " +
                             std::to_string(fields.size()));
        }
        fn(line_no, fields);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void append_num(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

}  // namespace

double Network::total_p_load_kw() const {
    double sum = 0.0;
    for (const auto& b : buses) sum += b.p_load_kw;
    return sum;
}

double Network::total_q_load_kvar() const {
    double sum = 0.0;
    for (const auto& b : buses) sum += b.q_load_kvar;
    return sum;
}

std::string Network::canonical_serialization() const {
    std::string out;
    out += "base_kv=";
    append_num(out, base_kv);
    out += " base_mva=";
    append_num(out, base_mva);
    out += "\n";
    for (const auto& b : buses) {
        out += "bus " + std::to_string(b.id) + " ";
        append_num(out, b.p_load_kw);
        out += " ";
        append_num(out, b.q_load_kvar);
        out += b.is_slack ? " slack\n" : "\n";
    }
    for (const auto& br : branches) {
        out += "branch " + std::to_string(br.from_bus) + "-" + std::to_string(br.to_bus) + " ";
        append_num(out, br.r_ohm);
        out += " ";
        append_num(out, br.x_ohm);
        out += "\n";
    }
    return out;
}

Network parse_network(std::string_view branch_table, std::string_view load_table,
                      double base_kv, double base_mva) {
    if (base_kv <= 0.0 || base_mva <= 0.0) {
        throw ValidationError("base_kv and base_mva must be positive");
    }

    Network net;
    net.base_kv = base_kv;
    net.base_mva = base_mva;

    for_each_row(branch_table, "branch", 4, [&](int line_no, const auto& f) {
        Branch br;
        br.from_bus = parse_bus_id(f[0], "branch", line_no);
        br.to_bus = parse_bus_id(f[1], "branch", line_no);
        br.r_ohm = parse_double(f[2], "branch", line_no);
        br.x_ohm = parse_double(f[3], "branch", line_no);
        if (br.from_bus == br.to_bus) {
            throw ValidationError("branch table, line " + std::to_string(line_no) +
                                  ": self-loop at bus " + std::to_string(br.from_bus));
        }
        if (br.from_bus < 1 || br.to_bus < 1) {
            throw ValidationError("branch table, line " + std::to_string(line_no) +
                                  ": bus ids must be >= 1");
        }
        if (br.r_ohm < 0.0 || br.x_ohm < 0.0) {
            throw ValidationError("branch table, line " + std::to_string(line_no) +
                                  ": negative impedance");
        }
        if (br.r_ohm == 0.0 && br.x_ohm == 0.0) {
            throw ValidationError("branch table, line " + std::to_string(line_no) +
                                  ": branch " + std::to_string(br.from_bus) + "-" +
                                  std::to_string(br.to_bus) + " has zero impedance");
        }
        net.branches.push_back(br);
    });

    if (net.branches.empty()) throw ValidationError("branch table is empty");

    int nb = 0;
    for (const auto& br : net.branches) nb = std::max({nb, br.from_bus, br.to_bus});

    // ids must be contiguous 1..nb
    std::vector<char> seen(nb + 1, 0);
    for (const auto& br : net.branches) {
        seen[br.from_bus] = 1;
        seen[br.to_bus] = 1;
    }
    for (int id = 1; id <= nb; ++id) {
        if (!seen[id]) {
            throw ValidationError("bus ids are not contiguous: bus " + std::to_string(id) +
                                  " is missing");
        }
    }

    // duplicate branch between the same pair (either orientation)
    std::set<std::pair<int, int>> pairs;
    for (const auto& br : net.branches) {
        auto key = std::minmax(br.from_bus, br.to_bus);
        if (!pairs.insert(key).second) {
            throw ValidationError("duplicate branch between buses " +
                                  std::to_string(key.first) + " and " +
                                  std::to_string(key.second));
        }
    }

    net.buses.resize(nb);
    for (int id = 1; id <= nb; ++id) {
        net.buses[id - 1].id = id;
        net.buses[id - 1].is_slack = (id == 1);
    }

    std::vector<char> has_load(nb + 1, 0);
    for_each_row(load_table, "load", 3, [&](int line_no, const auto& f) {
        int bus = parse_bus_id(f[0], "load", line_no);
        double p = parse_double(f[1], "load", line_no);
        double q = parse_double(f[2], "load", line_no);
        if (bus < 1 || bus > nb) {
            throw ValidationError("load table, line " + std::to_string(line_no) +
                                  ": unknown bus id " + std::to_string(bus));
        }
        if (has_load[bus]) {
            throw ValidationError("load table, line " + std::to_string(line_no) +
                                  ": duplicate load row for bus " + std::to_string(bus));
        }
        if (p < 0.0 || q < 0.0) {
            throw ValidationError("load table, line " + std::to_string(line_no) +
                                  ": negative load at bus " + std::to_string(bus));
        }
        has_load[bus] = 1;
        net.buses[bus - 1].p_load_kw = p;
        net.buses[bus - 1].q_load_kvar = q;
    });

    if (net.buses[0].p_load_kw != 0.0 || net.buses[0].q_load_kvar != 0.0) {
        throw ValidationError("slack bus 1 must carry zero load");
    }

    std::sort(net.branches.begin(), net.branches.end(), [](const Branch& a, const Branch& b) {
        return std::pair{a.from_bus, a.to_bus} < std::pair{b.from_bus, b.to_bus};
    });
    return net;
}

Network parse_network_files(const std::string& branch_path, const std::string& load_path,
                            double base_kv, double base_mva) {
    return parse_network(read_file(branch_path), read_file(load_path), base_kv, base_mva);
}

Network validate_radial(Network net) {
    const int nb = net.n_buses();
    const int root = net.slack_bus();

    // undirected adjacency: bus -> (branch index, other endpoint)
    std::vector<std::vector<std::pair<int, int>>> adj(nb + 1);
    for (std::size_t k = 0; k < net.branches.size(); ++k) {
        const auto& br = net.branches[k];
        adj[br.from_bus].push_back({static_cast<int>(k), br.to_bus});
        adj[br.to_bus].push_back({static_cast<int>(k), br.from_bus});
    }

    net.parent.assign(nb + 1, 0);
    net.inflow_branch.assign(nb + 1, -1);
    net.levels.clear();
    std::vector<int> depth(nb + 1, -1);
    std::vector<char> branch_used(net.branches.size(), 0);

    std::deque<int> queue{root};
    depth[root] = 0;
    while (!queue.empty()) {
        int bus = queue.front();
        queue.pop_front();
        if (static_cast<int>(net.levels.size()) <= depth[bus]) net.levels.resize(depth[bus] + 1);
        net.levels[depth[bus]].push_back(bus);
        for (auto [k, other] : adj[bus]) {
            if (branch_used[k]) continue;
            branch_used[k] = 1;
            if (depth[other] >= 0) {
                throw TopologyError("cycle detected at branch " +
                                    std::to_string(net.branches[k].from_bus) + "-" +
                                    std::to_string(net.branches[k].to_bus));
            }
            depth[other] = depth[bus] + 1;
            net.parent[other] = bus;
            net.inflow_branch[other] = k;
            queue.push_back(other);
        }
    }

    for (int id = 1; id <= nb; ++id) {
        if (depth[id] < 0) {
            throw TopologyError("bus " + std::to_string(id) +
                                " is not connected to the slack bus");
        }
    }

    // orient every branch parent -> child and restore canonical order
    for (auto& br : net.branches) {
        if (net.parent[br.to_bus] != br.from_bus) std::swap(br.from_bus, br.to_bus);
    }
    std::sort(net.branches.begin(), net.branches.end(), [](const Branch& a, const Branch& b) {
        return std::pair{a.from_bus, a.to_bus} < std::pair{b.from_bus, b.to_bus};
    });
    net.inflow_branch.assign(nb + 1, -1);
    for (std::size_t k = 0; k < net.branches.size(); ++k) {
        net.inflow_branch[net.branches[k].to_bus] = static_cast<int>(k);
    }

    net.validated = true;
    return net;
}

double PerUnitNetwork::total_p_load_pu() const {
    double sum = 0.0;
    for (int b = 1; b <= nb; ++b) sum += p_load[b];
    return sum;
}

double PerUnitNetwork::total_q_load_pu() const {
    double sum = 0.0;
    for (int b = 1; b <= nb; ++b) sum += q_load[b];
    return sum;
}

std::string PerUnitNetwork::canonical_serialization() const {
    std::string out;
    out += "base_kv=";
    append_num(out, base_kv);
    out += " base_mva=";
    append_num(out, base_mva);
    out += "\n";
    for (int b = 1; b <= nb; ++b) {
        out += "bus " + std::to_string(b) + " ";
        append_num(out, p_load[b]);
        out += " ";
        append_num(out, q_load[b]);
        out += "\n";
    }
    for (const auto& ln : lines) {
        out += "line " + std::to_string(ln.from) + "-" + std::to_string(ln.to) + " ";
        append_num(out, ln.r);
        out += " ";
        append_num(out, ln.x);
        out += "\n";
    }
    return out;
}

PerUnitNetwork to_per_unit(const Network& net) {
    if (!net.validated) throw ValidationError("to_per_unit requires a validated network");

    PerUnitNetwork pu;
    pu.base_kv = net.base_kv;
    pu.base_mva = net.base_mva;
    pu.nb = net.n_buses();
    pu.slack = net.slack_bus();

    const double z_base = pu.z_base_ohm();
    const double s_base = pu.s_base_kva();

    pu.p_load.assign(pu.nb + 1, 0.0);
    pu.q_load.assign(pu.nb + 1, 0.0);
    for (const auto& b : net.buses) {
        pu.p_load[b.id] = b.p_load_kw / s_base;
        pu.q_load[b.id] = b.q_load_kvar / s_base;
    }

    pu.lines.reserve(net.branches.size());
    for (const auto& br : net.branches) {
        pu.lines.push_back({br.from_bus, br.to_bus, br.r_ohm / z_base, br.x_ohm / z_base});
    }

    pu.parent = net.parent;
    pu.inflow_branch = net.inflow_branch;
    pu.levels = net.levels;
    pu.out_branches.assign(pu.nb + 1, {});
    for (std::size_t k = 0; k < pu.lines.size(); ++k) {
        pu.out_branches[pu.lines[k].from].push_back(static_cast<int>(k));
    }
    return pu;
}

std::uint64_t fingerprint(const PerUnitNetwork& net) {
    const std::string s = net.canonical_serialization();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fingerprint_hex(const PerUnitNetwork& net) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fingerprint(net)));
    return buf;
}

}  // namespace capopt
