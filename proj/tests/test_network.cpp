#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "capopt/network.hpp"
#include "support/test_helpers.hpp"

using namespace capopt;
using testsupport::data_path;

TEST_CASE("ieee33 files parse to 33 buses and 32 branches") {
    Network net = parse_network_files(data_path("ieee33_branches.csv"),
                                      data_path("ieee33_loads.csv"), 11.0, 1.0);
    CHECK(net.n_buses() == 33);
    CHECK(net.branches.size() == 32);
    CHECK(net.total_p_load_kw() == doctest::Approx(3715.0));
    CHECK(net.total_q_load_kvar() == doctest::Approx(2300.0));
    CHECK(net.buses[0].is_slack);
    CHECK(net.buses[0].p_load_kw == 0.0);
}

TEST_CASE("empty load table defaults every load to zero") {
    Network net = parse_network("1,2,0.1,0.2\n", "", 11.0, 1.0);
    CHECK(net.n_buses() == 2);
    CHECK(net.buses[1].p_load_kw == 0.0);
    CHECK(net.buses[1].q_load_kvar == 0.0);
}

TEST_CASE("parse rejects bad rows with a line number") {
    CHECK_THROWS_AS(parse_network("2,2,0.1,0.2\n", "", 11.0, 1.0), ValidationError);

    CHECK_THROWS_WITH_AS(parse_network("1,2,0.1\n", "", 11.0, 1.0),
                         doctest::Contains("line 1"), ParseError);
    CHECK_THROWS_WITH_AS(parse_network("1,2,0.1,0.2\n1,3,abc,0.2\n", "", 11.0, 1.0),
                         doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_WITH_AS(parse_network("1,2,0.1,0.2\n", "2,50,xx\n", 11.0, 1.0),
                         doctest::Contains("line 1"), ParseError);

    // duplicate branch between the same pair, either orientation
    CHECK_THROWS_AS(parse_network("1,2,0.1,0.2\n2,1,0.3,0.1\n", "", 11.0, 1.0), ValidationError);
    // unknown bus in the load table
    CHECK_THROWS_AS(parse_network("1,2,0.1,0.2\n", "7,10,5\n", 11.0, 1.0), ValidationError);
    // duplicate load row
    CHECK_THROWS_AS(parse_network("1,2,0.1,0.2\n", "2,10,5\n2,1,1\n", 11.0, 1.0), ValidationError);
    // load on the slack bus
    CHECK_THROWS_AS(parse_network("1,2,0.1,0.2\n", "1,10,5\n", 11.0, 1.0), ValidationError);
    // zero-impedance branch
    CHECK_THROWS_AS(parse_network("1,2,0,0\n", "", 11.0, 1.0), ValidationError);
    // non-contiguous ids
    CHECK_THROWS_AS(parse_network("1,3,0.1,0.2\n", "", 11.0, 1.0), ValidationError);
    CHECK_THROWS_AS(parse_network("1,2,0.1,0.2\n", "", 0.0, 1.0), ValidationError);
}

TEST_CASE("crlf and blank lines are accepted") {
    Network net = parse_network("1,2,0.1,0.2\r\n\r\n2,3,0.2,0.1\r\n", "3,10,5\r\n", 11.0, 1.0);
    CHECK(net.n_buses() == 3);
    CHECK(net.buses[2].p_load_kw == 10.0);
}

TEST_CASE("validate_radial levels the ieee33 feeder") {
    Network net = testsupport::load_ieee33(11.0);
    CHECK(net.validated);
    CHECK(net.levels[0] == std::vector<int>{1});
    int counted = 0;
    for (const auto& level : net.levels) counted += static_cast<int>(level.size());
    CHECK(counted == 33);
    // every branch sends from a shallower or equal level
    std::vector<int> depth(34, -1);
    for (std::size_t d = 0; d < net.levels.size(); ++d) {
        for (int bus : net.levels[d]) depth[bus] = static_cast<int>(d);
    }
    for (const auto& br : net.branches) {
        CHECK(depth[br.from_bus] < depth[br.to_bus]);
        CHECK(net.parent[br.to_bus] == br.from_bus);
    }
}

TEST_CASE("two-bus chain topology") {
    Network net = validate_radial(parse_network("1,2,0.1,0.2\n", "", 11.0, 1.0));
    CHECK(net.parent[2] == 1);
    REQUIRE(net.levels.size() == 2);
    CHECK(net.levels[0] == std::vector<int>{1});
    CHECK(net.levels[1] == std::vector<int>{2});
}

TEST_CASE("extra branch creates a cycle error naming the branch") {
    std::string branches;
    {
        std::ifstream in(data_path("ieee33_branches.csv"));
        std::ostringstream ss;
        ss << in.rdbuf();
        branches = ss.str();
    }
    branches += "18,33,0.5,0.5\n";
    Network net = parse_network(branches, "", 11.0, 1.0);
    CHECK_THROWS_WITH_AS(validate_radial(std::move(net)), doctest::Contains("cycle"),
                         TopologyError);
}

TEST_CASE("disconnected bus is named") {
    // 1-2 plus an isolated island 3-4
    Network net = parse_network("1,2,0.1,0.2\n3,4,0.1,0.2\n", "", 11.0, 1.0);
    CHECK_THROWS_WITH_AS(validate_radial(std::move(net)), doctest::Contains("bus 3"),
                         TopologyError);
}

TEST_CASE("branch orientation is normalized parent->child") {
    // second row written child,parent
    Network net = validate_radial(parse_network("1,2,0.1,0.2\n3,2,0.2,0.1\n", "", 11.0, 1.0));
    const auto& br = net.branches[1];
    CHECK(br.from_bus == 2);
    CHECK(br.to_bus == 3);
}

TEST_CASE("per-unit scaling and round trip") {
    Network net = validate_radial(parse_network("1,2,1.21,0.0\n", "2,1000,500\n", 11.0, 1.0));
    PerUnitNetwork pu = to_per_unit(net);
    CHECK(pu.lines[0].r == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(pu.p_load[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pu.q_load[2] == doctest::Approx(0.5).epsilon(1e-12));

    CHECK(pu.branch_r_ohm(0) == doctest::Approx(1.21).epsilon(1e-12));
    CHECK(pu.bus_p_load_kw(2) == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(pu.bus_q_load_kvar(2) == doctest::Approx(500.0).epsilon(1e-12));
}

TEST_CASE("round trip across the ieee33 feeder stays within 1e-12 relative") {
    Network net = testsupport::load_ieee33(12.66);
    PerUnitNetwork pu = to_per_unit(net);
    for (std::size_t k = 0; k < net.branches.size(); ++k) {
        CHECK(pu.branch_r_ohm(k) ==
              doctest::Approx(net.branches[k].r_ohm).epsilon(1e-12));
        CHECK(pu.branch_x_ohm(k) ==
              doctest::Approx(net.branches[k].x_ohm).epsilon(1e-12));
    }
    for (const auto& bus : net.buses) {
        if (bus.p_load_kw > 0) {
            CHECK(pu.bus_p_load_kw(bus.id) == doctest::Approx(bus.p_load_kw).epsilon(1e-12));
        }
    }
}

TEST_CASE("parsing is row-order insensitive") {
    std::ifstream bin(data_path("ieee33_branches.csv")), lin(data_path("ieee33_loads.csv"));
    std::vector<std::string> branch_rows, load_rows;
    for (std::string line; std::getline(bin, line);) branch_rows.push_back(line);
    for (std::string line; std::getline(lin, line);) load_rows.push_back(line);

    auto joined = [](const std::vector<std::string>& rows) {
        std::string out;
        for (const auto& r : rows) out += r + "\n";
        return out;
    };
    Network reference =
        validate_radial(parse_network(joined(branch_rows), joined(load_rows), 11.0, 1.0));

    std::mt19937 shuffler(7);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(branch_rows.begin(), branch_rows.end(), shuffler);
        std::shuffle(load_rows.begin(), load_rows.end(), shuffler);
        Network permuted =
            validate_radial(parse_network(joined(branch_rows), joined(load_rows), 11.0, 1.0));
        CHECK(permuted.canonical_serialization() == reference.canonical_serialization());
    }
}

TEST_CASE("random radial networks satisfy the tree invariants") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const auto tables = testsupport::random_radial_tables(rng, 5);
        Network net =
            validate_radial(parse_network(tables.branch_table, tables.load_table, 1.0, 1.0));
        CHECK(static_cast<int>(net.branches.size()) == net.n_buses() - 1);
        int counted = 0;
        for (const auto& level : net.levels) counted += static_cast<int>(level.size());
        CHECK(counted == net.n_buses());
        for (int b = 2; b <= net.n_buses(); ++b) CHECK(net.parent[b] >= 1);
    }
}

TEST_CASE("fingerprint distinguishes bases and feeders") {
    PerUnitNetwork a = to_per_unit(testsupport::load_ieee33(11.0));
    PerUnitNetwork b = to_per_unit(testsupport::load_ieee33(12.66));
    CHECK(fingerprint_hex(a) != fingerprint_hex(b));
    CHECK(fingerprint_hex(a) == fingerprint_hex(to_per_unit(testsupport::load_ieee33(11.0))));
}
