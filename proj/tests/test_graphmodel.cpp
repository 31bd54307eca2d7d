#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "helpers.hpp"
#include "orsim/cfs.hpp"
#include "orsim/linkmodel.hpp"
#include "orsim/topology.hpp"

using namespace orsim;

TEST_CASE("bi-directional link rule") {
    // Two nodes 200 m apart, both r=250 -> linked.
    auto t = Topology::build({{0, 0}, {200, 0}}, {250, 250}, {500, 500});
    CHECK(t.linked(0, 1));
    CHECK(t.link_count() == 1);

    // One range below the distance -> no link either way.
    auto t2 = Topology::build({{0, 0}, {200, 0}}, {250, 150}, {500, 500});
    CHECK_FALSE(t2.linked(0, 1));
    CHECK_FALSE(t2.linked(1, 0));
    CHECK(t2.link_count() == 0);
}

TEST_CASE("self links never exist") {
    auto t = Topology::build({{0, 0}, {10, 0}}, {50, 50}, {100, 100});
    CHECK_FALSE(t.linked(0, 0));
}

TEST_CASE("random topology link count matches all-pairs oracle") {
    RngStream rng(20240901);
    auto t = testutil::random_topology(100, 2000.0, 250.0, rng);
    std::size_t expected = 0;
    for (NodeId i = 0; i < 100; ++i) {
        for (NodeId j = i + 1; j < 100; ++j) {
            const double d = distance(t.position(i), t.position(j));
            const bool linked = d <= t.range(i) && d <= t.range(j);
            if (linked) ++expected;
            CHECK(t.linked(i, j) == linked);
        }
    }
    CHECK(t.link_count() == expected);
    // Neighbor lists agree with the matrix.
    for (NodeId i = 0; i < 100; ++i) {
        for (NodeId j : t.neighbors(i)) {
            CHECK(t.linked(i, j));
        }
    }
}

TEST_CASE("node file loading") {
    const char* path = "graphmodel_fixture.nodes";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "1 200 0 250\n";
        out << "0 0 0 250  # trailing comment\n";
        out << "2 100 50 80 0.75\n";
    }
    auto t = Topology::load(path);
    CHECK(t.size() == 3);
    CHECK(t.position(1).x == doctest::Approx(200.0));
    CHECK(t.range(2) == doctest::Approx(80.0));
    CHECK(t.energy(2) == doctest::Approx(0.75));
    CHECK(t.linked(0, 1));
    std::remove(path);

    SUBCASE("duplicate ids rejected") {
        {
            std::ofstream out(path);
            out << "0 0 0 10\n0 1 1 10\n";
        }
        CHECK_THROWS(Topology::load(path));
        std::remove(path);
    }
    SUBCASE("empty file rejected") {
        {
            std::ofstream out(path);
            out << "# nothing\n";
        }
        CHECK_THROWS(Topology::load(path));
        std::remove(path);
    }
    SUBCASE("sparse ids rejected") {
        {
            std::ofstream out(path);
            out << "0 0 0 10\n2 1 1 10\n";
        }
        CHECK_THROWS(Topology::load(path));
        std::remove(path);
    }
}

TEST_CASE("link probability models") {
    auto t = Topology::build({{0, 0}, {200, 0}, {0, 250}}, {250, 250, 250}, {500, 500});

    SUBCASE("constant") {
        auto m = LinkProbModel::constant(0.8);
        CHECK(m(t, 0, 1) == doctest::Approx(0.8));
        CHECK(m(t, 1, 0) == doctest::Approx(0.8));
    }
    SUBCASE("distance decay limits") {
        auto m = LinkProbModel::distance_decay(2.0);
        // Zero distance -> 1.0 limit: use two coincident nodes.
        auto t0 = Topology::build({{5, 5}, {5, 5}}, {250, 250}, {10, 10});
        CHECK(m(t0, 0, 1) == doctest::Approx(1.0));
        // d = r exactly -> clamps to the floor.
        CHECK(m(t, 0, 2) == doctest::Approx(LinkProbModel::kDecayFloor));
        // Intermediate: 1 - (200/250)^2 = 0.36.
        CHECK(m(t, 0, 1) == doctest::Approx(0.36));
    }
    SUBCASE("table") {
        auto m = LinkProbModel::table({{{0, 1}, 0.7}});
        CHECK(m(t, 0, 1) == doctest::Approx(0.7));
        CHECK(m(t, 1, 0) == doctest::Approx(0.7));
        CHECK_THROWS(m(t, 0, 2));  // linked but absent from the table
    }
    SUBCASE("non-link rejected") {
        auto m = LinkProbModel::constant(0.8);
        auto far = Topology::build({{0, 0}, {400, 0}}, {250, 250}, {500, 500});
        CHECK_THROWS_AS(m(far, 0, 1), std::invalid_argument);
    }
}

TEST_CASE("candidate set construction") {
    SUBCASE("destination in CFS when adjacent") {
        auto t = Topology::build({{0, 0}, {100, 0}}, {250, 250}, {500, 500});
        auto cfs = build_cfs(t, LinkProbModel::constant(0.8), 0, 1);
        REQUIRE(cfs.size() == 1);
        CHECK(cfs.members[0] == 1);
    }
    SUBCASE("no progress neighbors") {
        // Neighbor 1 is farther from the destination 2 than the sender is.
        auto t = Topology::build({{200, 0}, {0, 0}, {600, 0}}, {250, 250, 600}, {700, 100});
        CHECK_THROWS_AS(build_cfs(t, LinkProbModel::constant(0.8), 0, 2), NoProgressNeighbors);
    }
    SUBCASE("star topology progress filter matches brute force") {
        // Sender 0 at origin, destination 5 far right; neighbors 1..4.
        auto t = Topology::build(
            {{200, 200}, {300, 200}, {280, 260}, {80, 200}, {260, 120}, {1100, 200}},
            {250, 250, 250, 250, 250, 900}, {1200, 400});
        auto cfs = build_cfs(t, LinkProbModel::constant(0.8), 0, 5);
        // Brute force: link-neighbors of 0 strictly closer to 5.
        std::vector<NodeId> expected;
        const double ds = distance(t.position(0), t.position(5));
        for (NodeId i : t.neighbors(0)) {
            if (distance(t.position(i), t.position(5)) < ds) expected.push_back(i);
        }
        CHECK(cfs.size() == expected.size());
        CHECK(cfs.size() == 3);  // 1, 2, 4 make progress; 3 does not
        for (NodeId id : expected) {
            CHECK(std::find(cfs.members.begin(), cfs.members.end(), id) != cfs.members.end());
        }
    }
    SUBCASE("probs clamped and members utility-sorted") {
        RngStream rng(7);
        auto t = testutil::random_topology(60, 800.0, 260.0, rng);
        for (NodeId s = 0; s < 10; ++s) {
            try {
                auto cfs = build_cfs(t, LinkProbModel::distance_decay(), s, 59);
                for (std::size_t i = 0; i < cfs.size(); ++i) {
                    CHECK(cfs.probs[i] >= 0.01);
                    CHECK(cfs.probs[i] <= 0.99);
                    CHECK(cfs.utils[i] > 0.0);
                    CHECK(cfs.utils[i] <= 1.0);
                    if (i > 0) CHECK(cfs.utils[i - 1] >= cfs.utils[i]);
                }
            } catch (const NoProgressNeighbors&) {
            }
        }
    }
}

TEST_CASE("neighbor matrices") {
    SUBCASE("single member is [1]") {
        auto t = Topology::build({{0, 0}, {100, 0}}, {250, 250}, {500, 500});
        auto cfs = build_cfs(t, LinkProbModel::constant(0.8), 0, 1);
        auto rows = neighbor_matrices(t, cfs);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].bits == std::vector<std::uint8_t>{1});
    }
    SUBCASE("bits match pairwise adjacency oracle") {
        RngStream rng(99);
        for (int rep = 0; rep < 5; ++rep) {
            auto t = testutil::random_topology(30, 500.0, 220.0, rng);
            try {
                auto cfs = build_cfs(t, LinkProbModel::distance_decay(), 0, 29);
                auto rows = neighbor_matrices(t, cfs);
                REQUIRE(rows.size() == cfs.size());
                for (std::size_t i = 0; i < cfs.size(); ++i) {
                    CHECK(rows[i].owner == cfs.members[i]);
                    for (std::size_t j = 0; j < cfs.size(); ++j) {
                        const bool expected =
                            i == j || t.linked(cfs.members[i], cfs.members[j]);
                        CHECK(static_cast<bool>(rows[i].bits[j]) == expected);
                    }
                }
            } catch (const NoProgressNeighbors&) {
            }
        }
    }
}
