#include "catch_amalgamated.hpp"

#include "tfp/k4_process.hpp"

using namespace tfp;

namespace {

// Independent oracle: enumerate B = {c, d} directly, list the six pairs
// inside A u B and inspect them.
std::array<std::uint64_t, 5> brute_x(const ProcessState& s, VertexPair a) {
    std::array<std::uint64_t, 5> x{};
    for (Vertex c = 0; c < s.n(); ++c)
        for (Vertex d = c + 1; d < s.n(); ++d) {
            if (a.contains(c) || a.contains(d)) continue;
            const VertexPair inside[5] = {{a.u, c}, {a.u, d}, {a.v, c}, {a.v, d}, {c, d}};
            int edges = 0;
            bool closed = false;
            for (const auto& p : inside) {
                edges += s.status(p) == PairStatus::Edge;
                closed = closed || s.status(p) == PairStatus::Closed;
            }
            if (!closed) ++x[edges];
        }
    return x;
}

std::array<std::uint64_t, 4> brute_y(const ProcessState& s, const VertexTriple& a) {
    std::array<std::uint64_t, 4> y{};
    for (Vertex v = 0; v < s.n(); ++v) {
        if (v == a[0] || v == a[1] || v == a[2]) continue;
        int edges = 0, closed = 0;
        for (Vertex w : a) {
            edges += s.status(w, v) == PairStatus::Edge;
            closed += s.status(w, v) == PairStatus::Closed;
        }
        if (closed == 0) ++y[edges];
    }
    return y;
}

}  // namespace

TEST_CASE("K4 witness counts on small graphs") {
    ProcessState e6(6, ForbiddenClique::K4);
    const auto c = k4_witness_counts(e6, {0, 1});
    CHECK(c.x == std::array<std::uint64_t, 5>{6, 0, 0, 0, 0});
    ProcessState e5(5, ForbiddenClique::K4);
    CHECK(k4_triple_counts(e5, make_triple(0, 1, 2)).y == std::array<std::uint64_t, 4>{2, 0, 0, 0});

    ProcessState s(6, ForbiddenClique::K4);
    s.add_open_pair({2, 3});
    const auto c1 = k4_witness_counts(s, {0, 1});
    CHECK(c1.x[1] == 1);  // B = {2,3}
    CHECK(c1.x[0] == 5);

    // star at 0 into the triple's vertices only from v = 3
    ProcessState t(6, ForbiddenClique::K4);
    t.add_open_pair({0, 3});
    t.add_open_pair({1, 3});
    t.add_open_pair({2, 3});
    const auto y = k4_triple_counts(t, make_triple(0, 1, 2)).y;
    CHECK(y == std::array<std::uint64_t, 4>{2, 0, 0, 1});
    CHECK_THROWS_AS(k4_witness_counts(ProcessState(3, ForbiddenClique::K4), {0, 1}), std::invalid_argument);
}

TEST_CASE("K4 witness counts match the four-set oracle along random runs") {
    Rng meta(31);
    for (int trial = 0; trial < 15; ++trial) {
        const Vertex n = 4 + static_cast<Vertex>(meta.below(14));
        ProcessState s(n, ForbiddenClique::K4);
        Rng rng(meta.next());
        const auto pairs = draw_pairs(s.pairs(), 6, rng);
        const auto triples = K4WitnessTracker::draw_triples(n, 6, rng);
        K4WitnessTracker tracker(s, pairs, triples);
        std::vector<std::array<std::uint64_t, 5>> last_x(pairs.size());
        std::vector<std::array<std::uint64_t, 4>> last_y(triples.size());
        while (!s.terminated()) {
            for (std::size_t k = 0; k < pairs.size(); ++k)
                if (s.status(pairs[k]) != PairStatus::Edge) last_x[k] = brute_x(s, pairs[k]);
            for (std::size_t k = 0; k < triples.size(); ++k)
                if (!tracker.triples()[k].frozen) last_y[k] = brute_y(s, triples[k]);
            const auto out = s.advance(rng);
            tracker.on_step(*out, s);
            tracker.refresh(s);
            for (std::size_t k = 0; k < pairs.size(); ++k) {
                const auto& w = tracker.pairs()[k];
                CHECK(w.frozen == (s.status(pairs[k]) == PairStatus::Edge));
                CHECK(w.x == (w.frozen ? last_x[k] : brute_x(s, pairs[k])));
            }
            for (std::size_t k = 0; k < triples.size(); ++k) {
                const auto& w = tracker.triples()[k];
                CHECK(w.y == (w.frozen ? last_y[k] : brute_y(s, triples[k])));
            }
        }
    }
}

TEST_CASE("frozen witness requires its previous value") {
    ProcessState s(6, ForbiddenClique::K4);
    const auto before = k4_witness_counts(s, {0, 1});
    s.add_open_pair({0, 1});
    CHECK_THROWS_AS(k4_witness_counts(s, {0, 1}), std::invalid_argument);
    const auto frozen = k4_witness_counts(s, {0, 1}, &before);
    CHECK(frozen.frozen);
    CHECK(frozen.x == before.x);
}

TEST_CASE("triple draws are distinct and sorted") {
    Rng rng(6);
    const auto t = K4WitnessTracker::draw_triples(10, 120, rng);
    CHECK(t.size() == 120);
    std::set<VertexTriple> uniq(t.begin(), t.end());
    CHECK(uniq.size() == 120);
    for (const auto& x : t) CHECK((x[0] < x[1] && x[1] < x[2]));
    CHECK_THROWS_AS(make_triple(1, 1, 2), std::invalid_argument);
}
