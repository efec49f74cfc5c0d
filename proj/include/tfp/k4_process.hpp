#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "tfp/graph_process.hpp"

namespace tfp {

using VertexTriple = std::array<Vertex, 3>;

inline VertexTriple make_triple(Vertex a, Vertex b, Vertex c) {
    VertexTriple t{a, b, c};
    std::sort(t.begin(), t.end());
    if (t[0] == t[1] || t[1] == t[2]) throw std::invalid_argument("triple needs distinct vertices");
    return t;
}

// X_{A,f}: pairs B disjoint from A with exactly f edges inside A u B and no
// closed pair inside A u B other than A itself.
struct K4WitnessCounts {
    VertexPair a;
    std::array<std::uint64_t, 5> x{};
    bool frozen = false;
};

// Y_{A,f}: vertices v outside the triple A with exactly f edges to A and no
// closed pair {a, v}, a in A (the closedness condition read with B = {v}).
struct K4TripleCounts {
    VertexTriple a{};
    std::array<std::uint64_t, 4> y{};
    bool frozen = false;
};

inline constexpr const char* kTripleClosednessReading = "Y_{A,f} closedness read with B={v}: no closed pair {a,v}, a in A";
inline constexpr const char* kWitnessDisjointness = "X_{A,f} counts only B disjoint from A";

namespace detail {

template <typename StatusFn>
std::array<std::uint64_t, 5> k4_pair_classes(Vertex n, VertexPair a, StatusFn&& status) {
    // Per third vertex c: edges to A, and whether any pair to A is closed.
    std::vector<std::int8_t> edges_to_a(n, -1);
    for (Vertex c = 0; c < n; ++c) {
        if (a.contains(c)) continue;
        const PairStatus s1 = status(a.u, c), s2 = status(a.v, c);
        if (s1 == PairStatus::Closed || s2 == PairStatus::Closed) continue;
        edges_to_a[c] = static_cast<std::int8_t>((s1 == PairStatus::Edge) + (s2 == PairStatus::Edge));
    }
    std::array<std::uint64_t, 5> x{};
    for (Vertex c = 0; c < n; ++c) {
        if (edges_to_a[c] < 0) continue;
        for (Vertex d = c + 1; d < n; ++d) {
            if (edges_to_a[d] < 0) continue;
            const PairStatus s = status(c, d);
            if (s == PairStatus::Closed) continue;
            ++x[edges_to_a[c] + edges_to_a[d] + (s == PairStatus::Edge)];
        }
    }
    return x;
}

template <typename StatusFn>
std::array<std::uint64_t, 4> k4_triple_classes(Vertex n, const VertexTriple& a, StatusFn&& status) {
    std::array<std::uint64_t, 4> y{};
    for (Vertex v = 0; v < n; ++v) {
        if (v == a[0] || v == a[1] || v == a[2]) continue;
        int edges = 0;
        bool closed = false;
        for (Vertex w : a) {
            const PairStatus s = status(w, v);
            edges += s == PairStatus::Edge;
            closed = closed || s == PairStatus::Closed;
        }
        if (!closed) ++y[edges];
    }
    return y;
}

inline bool triple_is_triangle(const ProcessState& s, const VertexTriple& a) {
    return s.status(a[0], a[1]) == PairStatus::Edge && s.status(a[0], a[2]) == PairStatus::Edge &&
           s.status(a[1], a[2]) == PairStatus::Edge;
}

}  // namespace detail

// Brute-force X_{A,f}. An edge A keeps its last tracked value: pass it as
// `previous` and it is returned flagged frozen.
inline K4WitnessCounts k4_witness_counts(const ProcessState& state, VertexPair a,
                                         const K4WitnessCounts* previous = nullptr) {
    if (state.n() < 4) throw std::invalid_argument("k4_witness_counts: n must be at least 4");
    if (a.v >= state.n()) throw std::invalid_argument("k4_witness_counts: vertex out of range");
    if (state.status(a) == PairStatus::Edge) {
        if (previous == nullptr || previous->a != a)
            throw std::invalid_argument("k4_witness_counts: A is an edge and no frozen value was given");
        K4WitnessCounts frozen = *previous;
        frozen.frozen = true;
        return frozen;
    }
    return {a, detail::k4_pair_classes(state.n(), a, [&](Vertex u, Vertex v) { return state.status(u, v); }), false};
}

inline K4TripleCounts k4_triple_counts(const ProcessState& state, const VertexTriple& a,
                                       const K4TripleCounts* previous = nullptr) {
    if (a[2] >= state.n()) throw std::invalid_argument("k4_triple_counts: vertex out of range");
    if (detail::triple_is_triangle(state, a)) {
        if (previous == nullptr || previous->a != a)
            throw std::invalid_argument("k4_triple_counts: A spans a triangle and no frozen value was given");
        K4TripleCounts frozen = *previous;
        frozen.frozen = true;
        return frozen;
    }
    return {a, detail::k4_triple_classes(state.n(), a, [&](Vertex u, Vertex v) { return state.status(u, v); }), false};
}

inline constexpr std::size_t kDefaultK4WitnessPairs = 50;
inline constexpr std::size_t kDefaultK4WitnessTriples = 50;

// Sampled witness families for the K4 process, recomputed at snapshot
// steps. A witness that stops being tracked during a step is frozen at its
// value just before that step.
class K4WitnessTracker {
public:
    K4WitnessTracker(const ProcessState& state, const std::vector<VertexPair>& pairs,
                     const std::vector<VertexTriple>& triples) {
        if (state.n() < 4) throw std::invalid_argument("K4 witnesses need n >= 4");
        if (state.step() != 0) throw std::invalid_argument("K4 witnesses must start on a fresh state");
        for (const auto& p : pairs) pairs_.push_back(k4_witness_counts(state, p));
        for (const auto& t : triples) triples_.push_back(k4_triple_counts(state, t));
    }

    static std::vector<VertexTriple> draw_triples(Vertex n, std::size_t count, Rng& rng) {
        const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) * (n - 2) / 6;
        if (count > total) count = static_cast<std::size_t>(total);
        std::set<VertexTriple> seen;
        std::vector<VertexTriple> out;
        while (out.size() < count) {
            const auto a = static_cast<Vertex>(rng.below(n));
            const auto b = static_cast<Vertex>(rng.below(n));
            const auto c = static_cast<Vertex>(rng.below(n));
            if (a == b || b == c || a == c) continue;
            const auto t = make_triple(a, b, c);
            if (seen.insert(t).second) out.push_back(t);
        }
        return out;
    }

    const std::vector<K4WitnessCounts>& pairs() const { return pairs_; }
    const std::vector<K4TripleCounts>& triples() const { return triples_; }

    // Call after every step so that witnesses leaving the tracked set freeze exactly.
    void on_step(const StepOutcome& outcome, const ProcessState& state) {
        std::vector<PairIndex::Id> changed{state.pairs().id(outcome.edge)};
        for (const auto& p : outcome.pairs_closed) changed.push_back(state.pairs().id(p));
        const auto before = [&](Vertex u, Vertex v) {
            const auto id = state.pairs().id(u, v);
            for (auto c : changed)
                if (c == id) return PairStatus::Open;
            return state.status(id);
        };
        for (auto& w : pairs_) {
            if (w.frozen || w.a != outcome.edge) continue;
            w.x = detail::k4_pair_classes(state.n(), w.a, before);
            w.frozen = true;
        }
        for (auto& w : triples_) {
            if (w.frozen) continue;
            const auto& a = w.a;
            const bool inside = (outcome.edge == VertexPair(a[0], a[1]) || outcome.edge == VertexPair(a[0], a[2]) ||
                                 outcome.edge == VertexPair(a[1], a[2]));
            if (!inside || !detail::triple_is_triangle(state, a)) continue;
            w.y = detail::k4_triple_classes(state.n(), a, before);
            w.frozen = true;
        }
    }

    void refresh(const ProcessState& state) {
        for (auto& w : pairs_)
            if (!w.frozen) w = k4_witness_counts(state, w.a);
        for (auto& w : triples_)
            if (!w.frozen) w = k4_triple_counts(state, w.a);
    }

private:
    std::vector<K4WitnessCounts> pairs_;
    std::vector<K4TripleCounts> triples_;
};

}  // namespace tfp
