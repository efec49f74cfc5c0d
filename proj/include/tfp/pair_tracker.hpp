#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "tfp/graph_process.hpp"

namespace tfp {

using Rational = boost::rational<std::int64_t>;

class UnsupportedMode : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Numbers of open (x), partial (y) and complete (z) third vertices of a pair
// in the triangle-free process.
struct PairCounts {
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    std::uint32_t z = 0;

    friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

enum class VertexClass : std::uint8_t { Open, Partial, Complete, None };

inline VertexClass classify(PairStatus a, PairStatus b) {
    const int open = (a == PairStatus::Open) + (b == PairStatus::Open);
    const int edge = (a == PairStatus::Edge) + (b == PairStatus::Edge);
    if (open == 2) return VertexClass::Open;
    if (open == 1 && edge == 1) return VertexClass::Partial;
    if (edge == 2) return VertexClass::Complete;
    return VertexClass::None;
}

namespace detail {

inline void bump(PairCounts& c, VertexClass k, int delta) {
    switch (k) {
        case VertexClass::Open: c.x += delta; break;
        case VertexClass::Partial: c.y += delta; break;
        case VertexClass::Complete: c.z += delta; break;
        case VertexClass::None: break;
    }
}

template <typename StatusFn>
PairCounts classify_pair(Vertex n, VertexPair p, StatusFn&& status) {
    PairCounts c;
    for (Vertex w = 0; w < n; ++w) {
        if (p.contains(w)) continue;
        bump(c, classify(status(p.u, w), status(p.v, w)), 1);
    }
    return c;
}

}  // namespace detail

// From-scratch classification of every third vertex of a non-edge pair.
inline PairCounts recompute_oracle(const ProcessState& state, VertexPair p) {
    if (p.v >= state.n()) throw std::invalid_argument("recompute_oracle: vertex out of range");
    if (state.status(p) == PairStatus::Edge) throw std::invalid_argument("recompute_oracle: pair is an edge");
    return detail::classify_pair(state.n(), p, [&](Vertex a, Vertex b) { return state.status(a, b); });
}

enum class LedgerMode { Full, Sampled };

inline constexpr Vertex kDefaultFullLedgerMaxN = 2000;
inline constexpr std::size_t kDefaultWitnessPairs = 200;

// Per-pair (x, y, z) counts of the K3 process. Full mode tracks every pair
// incrementally; Sampled mode tracks a fixed witness set recomputed by
// refresh(). Counts of a pair freeze at their value just before it becomes
// an edge.
class PairLedger {
public:
    static PairLedger full(const ProcessState& state, Vertex max_n = kDefaultFullLedgerMaxN) {
        check_fresh(state);
        if (state.n() > max_n)
            throw std::invalid_argument("full pair ledger limited to n <= " + std::to_string(max_n));
        PairLedger l(state, LedgerMode::Full);
        l.counts_.assign(state.pair_count(), PairCounts{state.n() - 2, 0, 0});
        l.pending_.assign(state.pair_count(), 0);
        return l;
    }

    static PairLedger sampled(const ProcessState& state, std::vector<VertexPair> witnesses) {
        check_fresh(state);
        PairLedger l(state, LedgerMode::Sampled);
        for (const auto& w : witnesses) {
            if (w.v >= state.n()) throw std::invalid_argument("witness pair out of range");
            const auto id = state.pairs().id(w);
            if (l.slot_.contains(id)) continue;
            l.slot_.emplace(id, l.witnesses_.size());
            l.witnesses_.push_back(w);
        }
        l.counts_.assign(l.witnesses_.size(), PairCounts{state.n() - 2, 0, 0});
        return l;
    }

    static std::vector<VertexPair> draw_witnesses(const ProcessState& state, std::size_t count, Rng& rng) {
        return draw_pairs(state.pairs(), count, rng);
    }

    LedgerMode mode() const { return mode_; }
    Vertex n() const { return n_; }
    std::uint64_t q() const { return q_; }
    std::uint64_t step() const { return step_; }
    const std::vector<VertexPair>& witnesses() const { return witnesses_; }

    bool tracks(const ProcessState& state, VertexPair p) const {
        return mode_ == LedgerMode::Full || slot_.contains(state.pairs().id(p));
    }

    const PairCounts& counts(const ProcessState& state, VertexPair p) const {
        const auto id = state.pairs().id(p);
        if (mode_ == LedgerMode::Full) return counts_[id];
        const auto it = slot_.find(id);
        if (it == slot_.end()) throw UnsupportedMode("pair is not in the sampled witness set");
        return counts_[it->second];
    }

    const PairCounts& witness_counts(std::size_t k) const { return counts_[k]; }

    // Bookkeeping for the step just taken by `state`.
    void apply(const StepOutcome& outcome, const ProcessState& state) {
        if (state.n() != n_ || outcome.step != step_ + 1 || state.step() != outcome.step ||
            state.edge_log().back() != outcome.edge)
            throw std::invalid_argument("apply_edge: outcome is not the most recent step of this state");
        if (mode_ == LedgerMode::Full) apply_full(outcome, state);
        else apply_sampled(outcome, state);
        q_ -= 1 + outcome.pairs_closed.size();
        step_ = outcome.step;
    }

    // Sampled mode: recompute every non-edge witness from adjacency.
    void refresh(const ProcessState& state) {
        if (state.step() != step_) throw std::invalid_argument("refresh: ledger is out of sync with state");
        if (mode_ != LedgerMode::Sampled) return;
        for (std::size_t k = 0; k < witnesses_.size(); ++k)
            if (state.status(witnesses_[k]) != PairStatus::Edge) counts_[k] = recompute_oracle(state, witnesses_[k]);
    }

private:
    PairLedger(const ProcessState& state, LedgerMode mode)
        : mode_(mode), n_(state.n()), q_(state.open_count()), step_(0) {}

    static void check_fresh(const ProcessState& state) {
        if (state.step() != 0) throw std::invalid_argument("init_ledger: state is not fresh");
    }

    void apply_full(const StepOutcome& outcome, const ProcessState& state) {
        const auto& idx = state.pairs();
        std::vector<std::pair<VertexPair, PairStatus>> changed;
        changed.reserve(1 + outcome.pairs_closed.size());
        changed.emplace_back(outcome.edge, PairStatus::Edge);
        for (const auto& p : outcome.pairs_closed) changed.emplace_back(p, PairStatus::Closed);
        for (const auto& [p, s] : changed) pending_[idx.id(p)] = 1;

        // Transitions are replayed one at a time; pairs not yet replayed still read as Open.
        const auto status = [&](Vertex a, Vertex b) {
            const auto id = idx.id(a, b);
            return pending_[id] ? PairStatus::Open : state.status(id);
        };
        for (const auto& [p, s_new] : changed) {
            pending_[idx.id(p)] = 0;
            for (int side = 0; side < 2; ++side) {
                const Vertex c = side == 0 ? p.u : p.v;
                const Vertex w = p.other(c);
                // tracked pair {c,z}, third vertex w, statuses ({c,w}, {z,w})
                for (Vertex z = 0; z < n_; ++z) {
                    if (z == c || z == w) continue;
                    const auto tid = idx.id(c, z);
                    if (state.status(tid) == PairStatus::Edge) continue;  // frozen
                    const PairStatus other = status(z, w);
                    auto& cnt = counts_[tid];
                    detail::bump(cnt, classify(PairStatus::Open, other), -1);
                    detail::bump(cnt, classify(s_new, other), +1);
                }
            }
        }
    }

    void apply_sampled(const StepOutcome& outcome, const ProcessState& state) {
        const auto it = slot_.find(state.pairs().id(outcome.edge));
        if (it == slot_.end()) return;
        // Freeze at the pre-step value: every pair changed this step was Open before it.
        std::vector<PairIndex::Id> changed{state.pairs().id(outcome.edge)};
        for (const auto& p : outcome.pairs_closed) changed.push_back(state.pairs().id(p));
        const auto status = [&](Vertex a, Vertex b) {
            const auto id = state.pairs().id(a, b);
            for (auto c : changed)
                if (c == id) return PairStatus::Open;
            return state.status(id);
        };
        counts_[it->second] = detail::classify_pair(n_, outcome.edge, status);
    }

    LedgerMode mode_;
    Vertex n_;
    std::uint64_t q_;
    std::uint64_t step_;
    std::vector<PairCounts> counts_;
    std::vector<std::uint8_t> pending_;
    std::vector<VertexPair> witnesses_;
    std::unordered_map<PairIndex::Id, std::size_t> slot_;
};

inline PairLedger init_ledger(const ProcessState& state, LedgerMode mode,
                              std::vector<VertexPair> witnesses = {},
                              Vertex full_max_n = kDefaultFullLedgerMaxN) {
    return mode == LedgerMode::Full ? PairLedger::full(state, full_max_n)
                                    : PairLedger::sampled(state, std::move(witnesses));
}

inline void apply_edge(PairLedger& ledger, const StepOutcome& outcome, const ProcessState& state) {
    ledger.apply(outcome, state);
}

// ---------------------------------------------------------------------------
// Exact one-step conditional expectations given the current state.

namespace detail {

inline void check_audit(const PairLedger& ledger, const ProcessState& state, VertexPair p) {
    if (ledger.mode() != LedgerMode::Full) throw UnsupportedMode("conditional expectations need a full ledger");
    if (ledger.step() != state.step()) throw std::invalid_argument("ledger is out of sync with state");
    if (state.status(p) == PairStatus::Edge) throw std::invalid_argument("pair is an edge");
    if (ledger.q() == 0) throw std::invalid_argument("process has terminated");
}

}  // namespace detail

// E[loss of open vertices of p in the next step]. An open w is lost when the
// next edge is {u,w} or {v,w}, or closes one of them (|Y_{u,w}| + |Y_{v,w}|
// candidates). An edge {z,w} with z complete for p is counted twice; only
// open {z,w} are real candidates, so the double count is removed for those.
inline Rational expected_open_loss(const PairLedger& ledger, const ProcessState& state, VertexPair p) {
    detail::check_audit(ledger, state, p);
    std::int64_t total = 0;
    const Vertex n = state.n();
    std::vector<Vertex> complete;
    for (Vertex z = 0; z < n; ++z)
        if (!p.contains(z) && state.status(p.u, z) == PairStatus::Edge && state.status(p.v, z) == PairStatus::Edge)
            complete.push_back(z);
    for (Vertex w = 0; w < n; ++w) {
        if (p.contains(w)) continue;
        if (state.status(p.u, w) != PairStatus::Open || state.status(p.v, w) != PairStatus::Open) continue;
        std::int64_t doubly = 0;
        for (Vertex z : complete)
            if (state.status(z, w) == PairStatus::Open) ++doubly;
        total += 2 + ledger.counts(state, VertexPair(p.u, w)).y + ledger.counts(state, VertexPair(p.v, w)).y - doubly;
    }
    return Rational(total, static_cast<std::int64_t>(ledger.q()));
}

// E[loss of partial vertices of p in the next step]. A partial w (open pair
// {w*,w}) is lost when {w*,w} is chosen or closed; if p itself is open, one
// of the closers of {w*,w} is p, which freezes p instead.
inline Rational expected_partial_loss(const PairLedger& ledger, const ProcessState& state, VertexPair p) {
    detail::check_audit(ledger, state, p);
    const std::int64_t self_open = state.status(p) == PairStatus::Open ? 1 : 0;
    std::int64_t total = 0;
    for (Vertex w = 0; w < state.n(); ++w) {
        if (p.contains(w)) continue;
        const PairStatus su = state.status(p.u, w), sv = state.status(p.v, w);
        if (classify(su, sv) != VertexClass::Partial) continue;
        const Vertex star = su == PairStatus::Open ? p.u : p.v;
        total += 1 + ledger.counts(state, VertexPair(star, w)).y - self_open;
    }
    return Rational(total, static_cast<std::int64_t>(ledger.q()));
}

// E[new partial vertices of p] = 2 x / q.
inline Rational expected_partial_gain(const PairLedger& ledger, const ProcessState& state, VertexPair p) {
    detail::check_audit(ledger, state, p);
    return Rational(2 * static_cast<std::int64_t>(ledger.counts(state, p).x), static_cast<std::int64_t>(ledger.q()));
}

// E[Q(i) - Q(i+1)] = 1 + (sum of y over open pairs) / q.
inline Rational expected_q_drop(const PairLedger& ledger, const ProcessState& state) {
    if (ledger.mode() != LedgerMode::Full) throw UnsupportedMode("expected_q_drop needs a full ledger");
    if (ledger.step() != state.step()) throw std::invalid_argument("ledger is out of sync with state");
    if (ledger.q() == 0) throw std::invalid_argument("process has terminated");
    std::int64_t sum = 0;
    for (auto id : state.open_pairs()) sum += ledger.counts(state, state.pairs().pair(id)).y;
    return Rational(1) + Rational(sum, static_cast<std::int64_t>(ledger.q()));
}

// Variant that subtracts |Z_{u,v}| for every open w. It agrees with
// expected_open_loss unless some {z,w} with z complete is not open.
inline Rational expected_open_loss_uncorrected(const PairLedger& ledger, const ProcessState& state, VertexPair p) {
    detail::check_audit(ledger, state, p);
    const auto& c = ledger.counts(state, p);
    std::int64_t total = 0;
    for (Vertex w = 0; w < state.n(); ++w) {
        if (p.contains(w)) continue;
        if (state.status(p.u, w) != PairStatus::Open || state.status(p.v, w) != PairStatus::Open) continue;
        total += 2 + ledger.counts(state, VertexPair(p.u, w)).y + ledger.counts(state, VertexPair(p.v, w)).y - c.z;
    }
    return Rational(total, static_cast<std::int64_t>(ledger.q()));
}

}  // namespace tfp
