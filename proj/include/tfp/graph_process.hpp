#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tfp/bit_graph.hpp"
#include "tfp/random.hpp"

namespace tfp {

// The H in the H-free process.
enum class ForbiddenClique : std::uint8_t { K3 = 3, K4 = 4 };

inline int clique_order(ForbiddenClique rule) { return static_cast<int>(rule); }

inline ForbiddenClique forbidden_clique(int order) {
    if (order == 3) return ForbiddenClique::K3;
    if (order == 4) return ForbiddenClique::K4;
    throw std::invalid_argument("forbidden clique order must be 3 or 4, got " + std::to_string(order));
}

inline std::string to_string(ForbiddenClique rule) { return "K" + std::to_string(clique_order(rule)); }

enum class PairStatus : std::uint8_t { Open, Edge, Closed };

struct StepOutcome {
    std::uint64_t step = 0;  // step count after the edge was added
    VertexPair edge;
    std::vector<VertexPair> pairs_closed;
};

// True iff adding `pair` to `graph` completes a clique of the given order.
inline bool completes_clique(const BitGraph& graph, ForbiddenClique rule, VertexPair pair) {
    const auto ru = graph.row(pair.u);
    const auto rv = graph.row(pair.v);
    if (rule == ForbiddenClique::K3) {
        for (std::size_t k = 0; k < ru.size(); ++k)
            if (ru[k] & rv[k]) return true;
        return false;
    }
    std::vector<std::uint64_t> common(ru.size());
    for (std::size_t k = 0; k < ru.size(); ++k) common[k] = ru[k] & rv[k];
    bool found = false;
    BitGraph::for_each_bit(common, [&](Vertex c) {
        if (found) return;
        const auto rc = graph.row(c);
        for (std::size_t k = 0; k < rc.size(); ++k)
            if (rc[k] & common[k]) { found = true; return; }
    });
    return found;
}

// State of the H-free random greedy process: the graph, the Edge/Open/Closed
// partition of all vertex pairs, and an O(1) uniform sampler over Open pairs
// (dense array plus position map, swap-remove on deletion).
class ProcessState {
public:
    using PairId = PairIndex::Id;

    ProcessState(Vertex n, ForbiddenClique rule)
        : n_(n), rule_(rule), graph_(check_n(n)), index_(n) {
        const auto total = index_.size();
        status_.assign(total, PairStatus::Open);
        open_.resize(total);
        position_.resize(total);
        for (PairId id = 0; id < total; ++id) {
            open_[id] = id;
            position_[id] = id;
        }
    }

    Vertex n() const { return n_; }
    ForbiddenClique rule() const { return rule_; }
    std::uint64_t step() const { return edge_log_.size(); }
    const BitGraph& graph() const { return graph_; }
    const PairIndex& pairs() const { return index_; }
    std::uint64_t pair_count() const { return index_.size(); }

    PairStatus status(PairId id) const { return status_[id]; }
    PairStatus status(Vertex a, Vertex b) const { return status_[index_.id(a, b)]; }
    PairStatus status(VertexPair p) const { return status_[index_.id(p)]; }

    std::uint64_t open_count() const { return open_.size(); }
    std::uint64_t edge_count() const { return edge_log_.size(); }
    std::uint64_t closed_count() const { return closed_; }
    bool terminated() const { return open_.empty(); }

    std::span<const PairId> open_pairs() const { return open_; }
    const std::vector<VertexPair>& edge_log() const { return edge_log_; }

    // One step of the process; nullopt once no open pair remains.
    std::optional<StepOutcome> advance(Rng& rng) {
        if (open_.empty()) return std::nullopt;
        const PairId id = open_[static_cast<std::size_t>(rng.below(open_.size()))];
        return add_open_pair(index_.pair(id));
    }

    // Adds a specific open pair as the next edge (used by exhaustive oracles and replays).
    StepOutcome add_open_pair(VertexPair e) {
        if (e.v >= n_) throw std::invalid_argument("add_open_pair: vertex out of range");
        const PairId eid = index_.id(e);
        if (status_[eid] != PairStatus::Open) throw std::invalid_argument("add_open_pair: pair is not open");

        StepOutcome out;
        remove_open(eid);
        status_[eid] = PairStatus::Edge;
        graph_.add_edge(e.u, e.v);
        edge_log_.push_back(e);
        out.step = edge_log_.size();
        out.edge = e;

        if (rule_ == ForbiddenClique::K3) {
            // Every pair closed now is {u,w} with w ~ v, or {v,w} with w ~ u.
            graph_.for_each_neighbor(e.v, [&](Vertex w) {
                if (w != e.u) close_if_open(VertexPair(e.u, w), out.pairs_closed);
            });
            graph_.for_each_neighbor(e.u, [&](Vertex w) {
                if (w != e.v) close_if_open(VertexPair(e.v, w), out.pairs_closed);
            });
        } else {
            close_after_k4_edge(e, out.pairs_closed);
        }
        return out;
    }

private:
    static Vertex check_n(Vertex n) {
        if (n < 2) throw std::invalid_argument("process needs at least 2 vertices");
        return n;
    }

    void remove_open(PairId id) {
        const PairId pos = position_[id];
        const PairId last = open_.back();
        open_[pos] = last;
        position_[last] = pos;
        open_.pop_back();
    }

    void close_if_open(VertexPair p, std::vector<VertexPair>& closed) {
        const PairId id = index_.id(p);
        if (status_[id] != PairStatus::Open) return;
        remove_open(id);
        status_[id] = PairStatus::Closed;
        ++closed_;
        closed.push_back(p);
    }

    void close_probe_if_open(VertexPair p, std::vector<VertexPair>& closed) {
        if (status_[index_.id(p)] != PairStatus::Open) return;
        if (completes_clique(graph_, rule_, p)) close_if_open(p, closed);
    }

    // A K4 completed through the new edge {x,y} either uses it as the
    // adjacent common-neighbour pair (closed pair inside N(x) & N(y)) or as
    // one of the four spokes (closed pair {x,b}, b ~ y, or {y,b}, b ~ x).
    void close_after_k4_edge(VertexPair e, std::vector<VertexPair>& closed) {
        const auto rx = graph_.row(e.u);
        const auto ry = graph_.row(e.v);
        std::vector<Vertex> common;
        for (std::size_t k = 0; k < rx.size(); ++k) {
            std::uint64_t w = rx[k] & ry[k];
            while (w) {
                common.push_back(static_cast<Vertex>(k * 64 + std::countr_zero(w)));
                w &= w - 1;
            }
        }
        for (std::size_t i = 0; i < common.size(); ++i)
            for (std::size_t j = i + 1; j < common.size(); ++j)
                close_probe_if_open(VertexPair(common[i], common[j]), closed);
        graph_.for_each_neighbor(e.v, [&](Vertex b) {
            if (b != e.u) close_probe_if_open(VertexPair(e.u, b), closed);
        });
        graph_.for_each_neighbor(e.u, [&](Vertex b) {
            if (b != e.v) close_probe_if_open(VertexPair(e.v, b), closed);
        });
    }

    Vertex n_;
    ForbiddenClique rule_;
    BitGraph graph_;
    PairIndex index_;
    std::vector<PairStatus> status_;
    std::vector<PairId> open_;
    std::vector<PairId> position_;
    std::vector<VertexPair> edge_log_;
    std::uint64_t closed_ = 0;
};

// `count` distinct pairs drawn uniformly without replacement (all pairs if fewer exist).
inline std::vector<VertexPair> draw_pairs(const PairIndex& index, std::size_t count, Rng& rng) {
    const std::uint64_t total = index.size();
    std::vector<VertexPair> out;
    if (count >= total) {
        for (PairIndex::Id id = 0; id < total; ++id) out.push_back(index.pair(id));
        return out;
    }
    std::unordered_map<std::uint64_t, std::uint64_t> moved;  // sparse partial Fisher-Yates
    const auto at = [&](std::uint64_t k) {
        const auto it = moved.find(k);
        return it == moved.end() ? k : it->second;
    };
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t j = i + rng.below(total - i);
        const std::uint64_t picked = at(j);
        moved[j] = at(i);
        out.push_back(index.pair(static_cast<PairIndex::Id>(picked)));
    }
    return out;
}

inline ProcessState new_process(Vertex n, ForbiddenClique rule) { return ProcessState(n, rule); }

inline std::optional<StepOutcome> step(ProcessState& state, Rng& rng) { return state.advance(rng); }

struct RunResult {
    std::uint64_t edges = 0;  // M when completed
    bool completed = false;   // every non-edge is Closed
};

// Runs until no open pair remains or the step count reaches max_steps.
// The cap is checked only between steps.
inline RunResult run(ProcessState& state, Rng& rng, std::optional<std::uint64_t> max_steps = std::nullopt) {
    while (!state.terminated() && (!max_steps || state.step() < *max_steps)) state.advance(rng);
    return {state.edge_count(), state.terminated()};
}

// Pure adjacency test used as the oracle for stored statuses.
inline bool is_closed_probe(const ProcessState& state, VertexPair pair) {
    if (pair.v >= state.n()) throw std::invalid_argument("is_closed_probe: vertex out of range");
    if (state.graph().adjacent(pair.u, pair.v)) throw std::invalid_argument("is_closed_probe: pair is an edge");
    return completes_clique(state.graph(), state.rule(), pair);
}

// "n=<n> rule=K<order> seed=<seed>" then one "u v" line per edge in insertion order.
inline void write_edge_log(std::ostream& out, const ProcessState& state, std::uint64_t seed) {
    out << "n=" << state.n() << " rule=" << to_string(state.rule()) << " seed=" << seed << '\n';
    for (const auto& e : state.edge_log()) out << e.u << ' ' << e.v << '\n';
}

}  // namespace tfp
