#include "catch_amalgamated.hpp"

#include <set>

#include "tfp/bit_graph.hpp"
#include "tfp/random.hpp"

using namespace tfp;

TEST_CASE("vertex pairs are normalized") {
    VertexPair p(7, 3);
    CHECK(p.u == 3);
    CHECK(p.v == 7);
    CHECK(p == VertexPair(3, 7));
    CHECK(p.contains(7));
    CHECK_FALSE(p.contains(4));
    CHECK(p.other(3) == 7);
    CHECK_THROWS_AS(VertexPair(2, 2), std::invalid_argument);
}

TEST_CASE("pair index is a bijection onto [0, n(n-1)/2)") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Vertex n = 2 + static_cast<Vertex>(rng.below(90));
        PairIndex idx(n);
        REQUIRE(idx.size() == std::uint64_t{n} * (n - 1) / 2);
        PairIndex::Id expected = 0;
        for (Vertex u = 0; u < n; ++u) {
            for (Vertex v = u + 1; v < n; ++v) {
                CHECK(idx.id(u, v) == expected);
                CHECK(idx.id(v, u) == expected);
                CHECK(idx.pair(expected) == VertexPair(u, v));
                ++expected;
            }
        }
    }
}

TEST_CASE("bit graph adjacency, degrees and neighbor iteration") {
    BitGraph g(130);
    g.add_edge(0, 129);
    g.add_edge(0, 64);
    g.add_edge(63, 64);
    CHECK(g.adjacent(129, 0));
    CHECK(g.adjacent(64, 63));
    CHECK_FALSE(g.adjacent(1, 2));
    CHECK(g.degree(0) == 2);
    CHECK(g.degree(64) == 2);
    CHECK(g.edge_count() == 3);
    CHECK(g.neighbors(0) == std::vector<Vertex>{64, 129});
    CHECK_THROWS_AS(g.add_edge(0, 64), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(5, 5), std::invalid_argument);
}

TEST_CASE("random graphs: rows agree with adjacency and degrees sum to 2m") {
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const Vertex n = 1 + static_cast<Vertex>(rng.below(150));
        BitGraph g(n);
        std::set<std::pair<Vertex, Vertex>> edges;
        for (int k = 0; k < 3 * static_cast<int>(n); ++k) {
            const auto a = static_cast<Vertex>(rng.below(n)), b = static_cast<Vertex>(rng.below(n));
            if (a == b || g.adjacent(a, b)) continue;
            g.add_edge(a, b);
            edges.insert({std::min(a, b), std::max(a, b)});
        }
        std::uint64_t degree_sum = 0;
        for (Vertex v = 0; v < n; ++v) {
            degree_sum += g.degree(v);
            for (Vertex w : g.neighbors(v)) CHECK(edges.count({std::min(v, w), std::max(v, w)}) == 1);
            CHECK(g.neighbors(v).size() == g.degree(v));
        }
        CHECK(degree_sum == 2 * edges.size());
        CHECK(g.edge_count() == edges.size());
    }
}

TEST_CASE("rng bounded draws are reproducible and in range") {
    Rng a(42), b(42);
    for (int k = 0; k < 1000; ++k) {
        const auto x = a.below(7);
        CHECK(x == b.below(7));
        CHECK(x < 7);
        const double u = a.uniform01();
        CHECK(u == b.uniform01());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    CHECK(trial_seed(1, 0) != trial_seed(1, 1));
    CHECK(trial_seed(1, 3) == mix64(1 ^ (3 * kTrialSeedMultiplier)));
}
