#include "catch_amalgamated.hpp"

#include <boost/rational.hpp>

#include <array>
#include <map>
#include <sstream>

#include "tfp/graph_io.hpp"
#include "tfp/graph_process.hpp"

using namespace tfp;
using Frac = boost::rational<long long>;

namespace {

// Independent oracle for small K3 processes: adjacency matrix only, open
// pairs recomputed from scratch at every node of the process tree.
struct Tiny {
    int n;
    std::array<std::array<bool, 8>, 8> adj{};

    bool common_neighbor(int a, int b) const {
        for (int c = 0; c < n; ++c)
            if (adj[a][c] && adj[b][c]) return true;
        return false;
    }
    std::vector<std::pair<int, int>> open() const {
        std::vector<std::pair<int, int>> out;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (!adj[a][b] && !common_neighbor(a, b)) out.push_back({a, b});
        return out;
    }
};

void enumerate_tree(Tiny g, int edges, Frac weight, std::map<int, Frac>& dist) {
    const auto open = g.open();
    if (open.empty()) {
        dist[edges] += weight;
        return;
    }
    const Frac w = weight / static_cast<long long>(open.size());
    for (auto [a, b] : open) {
        Tiny next = g;
        next.adj[a][b] = next.adj[b][a] = true;
        enumerate_tree(next, edges + 1, w, dist);
    }
}

// Same tree walked through ProcessState::add_open_pair.
void enumerate_state(const ProcessState& s, Frac weight, std::map<int, Frac>& dist) {
    if (s.terminated()) {
        dist[static_cast<int>(s.edge_count())] += weight;
        return;
    }
    const Frac w = weight / static_cast<long long>(s.open_count());
    for (auto id : s.open_pairs()) {
        ProcessState next = s;
        next.add_open_pair(s.pairs().pair(id));
        enumerate_state(next, w, dist);
    }
}

bool has_triangle(const BitGraph& g) {
    for (Vertex a = 0; a < g.n(); ++a)
        for (Vertex b = a + 1; b < g.n(); ++b)
            for (Vertex c = b + 1; c < g.n(); ++c)
                if (g.adjacent(a, b) && g.adjacent(a, c) && g.adjacent(b, c)) return true;
    return false;
}

bool has_k4(const BitGraph& g) {
    const Vertex n = g.n();
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b) {
            if (!g.adjacent(a, b)) continue;
            for (Vertex c = b + 1; c < n; ++c) {
                if (!g.adjacent(a, c) || !g.adjacent(b, c)) continue;
                for (Vertex d = c + 1; d < n; ++d)
                    if (g.adjacent(a, d) && g.adjacent(b, d) && g.adjacent(c, d)) return true;
            }
        }
    return false;
}

// Adding {a,b} would create a forbidden clique, by brute force over vertex sets.
bool closes_brute(const BitGraph& g, ForbiddenClique rule, Vertex a, Vertex b) {
    const Vertex n = g.n();
    for (Vertex c = 0; c < n; ++c) {
        if (c == a || c == b || !g.adjacent(a, c) || !g.adjacent(b, c)) continue;
        if (rule == ForbiddenClique::K3) return true;
        for (Vertex d = c + 1; d < n; ++d)
            if (d != a && d != b && g.adjacent(a, d) && g.adjacent(b, d) && g.adjacent(c, d)) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("initial states") {
    ProcessState s2(2, ForbiddenClique::K3);
    CHECK(s2.open_count() == 1);
    CHECK(s2.edge_count() == 0);
    CHECK(new_process(10, ForbiddenClique::K3).open_count() == 45);
    CHECK(new_process(4, ForbiddenClique::K4).open_count() == 6);
    CHECK_THROWS_AS(ProcessState(1, ForbiddenClique::K3), std::invalid_argument);
    CHECK_THROWS_AS(forbidden_clique(5), std::invalid_argument);
}

TEST_CASE("n=2: one step then terminated") {
    ProcessState s(2, ForbiddenClique::K3);
    Rng rng(1);
    const auto out = step(s, rng);
    REQUIRE(out);
    CHECK(out->edge == VertexPair(0, 1));
    CHECK(out->pairs_closed.empty());
    CHECK(out->step == 1);
    CHECK(s.terminated());
    CHECK_FALSE(step(s, rng));
}

TEST_CASE("n=3 K3 always stops at M=2; n=4 K4 always at M=5") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        ProcessState s3(3, ForbiddenClique::K3);
        const auto r3 = run(s3, rng);
        CHECK(r3.completed);
        CHECK(r3.edges == 2);
        CHECK(s3.closed_count() == 1);
        ProcessState s4(4, ForbiddenClique::K4);
        CHECK(run(s4, rng).edges == 5);
    }
}

TEST_CASE("n=4 K3: process tree gives P(M=3) = 4/15") {
    std::map<int, Frac> oracle;
    enumerate_tree(Tiny{4}, 0, Frac(1), oracle);
    CHECK(oracle.size() == 2);
    CHECK(oracle[3] == Frac(4, 15));
    CHECK(oracle[4] == Frac(11, 15));

    std::map<int, Frac> via_state;
    enumerate_state(ProcessState(4, ForbiddenClique::K3), Frac(1), via_state);
    CHECK(via_state == oracle);
}

TEST_CASE("n=5 K3: state enumeration matches the independent tree") {
    std::map<int, Frac> oracle, via_state;
    enumerate_tree(Tiny{5}, 0, Frac(1), oracle);
    enumerate_state(ProcessState(5, ForbiddenClique::K3), Frac(1), via_state);
    CHECK(via_state == oracle);
    Frac total(0);
    for (auto& [m, p] : oracle) total += p;
    CHECK(total == Frac(1));
}

TEST_CASE("clique probes") {
    BitGraph path(3);
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    CHECK(completes_clique(path, ForbiddenClique::K3, VertexPair(0, 2)));
    CHECK_FALSE(completes_clique(path, ForbiddenClique::K4, VertexPair(0, 2)));

    BitGraph k4_minus(4);
    for (auto [a, b] : std::vector<std::pair<Vertex, Vertex>>{{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})
        k4_minus.add_edge(a, b);
    CHECK(completes_clique(k4_minus, ForbiddenClique::K4, VertexPair(0, 1)));
}

TEST_CASE("process invariants on random runs") {
    Rng meta(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const auto rule = trial % 2 == 0 ? ForbiddenClique::K3 : ForbiddenClique::K4;
        const Vertex n = 2 + static_cast<Vertex>(meta.below(rule == ForbiddenClique::K3 ? 24 : 16));
        ProcessState s(n, rule);
        Rng rng(meta.next());
        std::uint64_t q_prev = s.open_count();
        while (auto out = s.advance(rng)) {
            CHECK(s.open_count() == q_prev - 1 - out->pairs_closed.size());
            q_prev = s.open_count();
            for (const auto& p : out->pairs_closed) CHECK(s.status(p) == PairStatus::Closed);
            std::uint64_t open = 0, edges = 0, closed = 0;
            for (PairIndex::Id id = 0; id < s.pair_count(); ++id) {
                const auto p = s.pairs().pair(id);
                switch (s.status(id)) {
                    case PairStatus::Open:
                        ++open;
                        CHECK_FALSE(closes_brute(s.graph(), rule, p.u, p.v));
                        break;
                    case PairStatus::Closed:
                        ++closed;
                        CHECK(closes_brute(s.graph(), rule, p.u, p.v));
                        CHECK(is_closed_probe(s, p));
                        break;
                    case PairStatus::Edge:
                        ++edges;
                        CHECK(s.graph().adjacent(p.u, p.v));
                        break;
                }
            }
            CHECK(open == s.open_count());
            CHECK(edges == s.edge_count());
            CHECK(closed == s.closed_count());
            CHECK(open + edges + closed == s.pair_count());
        }
        CHECK(s.terminated());
        if (rule == ForbiddenClique::K3) CHECK_FALSE(has_triangle(s.graph()));
        else CHECK_FALSE(has_k4(s.graph()));
    }
}

TEST_CASE("step caps, errors and edge logs") {
    Rng rng(9);
    ProcessState s(30, ForbiddenClique::K3);
    const auto r = run(s, rng, 10);
    CHECK(r.edges == 10);
    CHECK_FALSE(r.completed);
    const auto e = s.edge_log().front();
    CHECK_THROWS_AS(s.add_open_pair(e), std::invalid_argument);
    CHECK_THROWS_AS(is_closed_probe(s, e), std::invalid_argument);

    std::ostringstream out;
    write_edge_log(out, s, 77);
    std::istringstream in(out.str());
    const auto log = read_edge_log(in);
    CHECK(log.n == 30);
    CHECK(log.rule == ForbiddenClique::K3);
    CHECK(log.seed == 77);
    CHECK(log.edges == s.edge_log());
    CHECK(out.str().rfind("n=30 rule=K3 seed=77\n", 0) == 0);
}

TEST_CASE("draw_pairs returns distinct pairs") {
    PairIndex idx(50);
    Rng rng(3);
    const auto pairs = draw_pairs(idx, 200, rng);
    CHECK(pairs.size() == 200);
    std::set<VertexPair> uniq(pairs.begin(), pairs.end());
    CHECK(uniq.size() == 200);
    CHECK(draw_pairs(PairIndex(5), 100, rng).size() == 10);
}

TEST_CASE("same seed, same run") {
    for (auto rule : {ForbiddenClique::K3, ForbiddenClique::K4}) {
        Rng a(123), b(123);
        ProcessState sa(60, rule), sb(60, rule);
        run(sa, a);
        run(sb, b);
        CHECK(sa.edge_log() == sb.edge_log());
    }
}
