#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "tfp/graph_process.hpp"
#include "tfp/pair_tracker.hpp"
#include "tfp/random.hpp"
#include "tfp/trajectory.hpp"

namespace tfp {

struct OracleSuiteResult {
    std::uint64_t runs = 0;
    std::uint64_t steps = 0;
    std::uint64_t pair_checks = 0;
    std::uint64_t ledger_mismatches = 0;
    std::uint64_t status_mismatches = 0;
    std::uint64_t q_identity_failures = 0;
};

// K3 runs with a full ledger, checked after every step against from-scratch
// recomputation: counts of every non-edge pair, Closed status against the
// clique probe, and Q(i+1) = Q(i) - 1 - y(chosen pair).
inline OracleSuiteResult oracle_equivalence_suite(const std::vector<Vertex>& ns, std::uint64_t runs_per_n,
                                                  std::uint64_t base_seed) {
    OracleSuiteResult res;
    for (Vertex n : ns) {
        for (std::uint64_t k = 0; k < runs_per_n; ++k) {
            Rng rng(substream_seed(trial_seed(base_seed, k), n));
            ProcessState state(n, ForbiddenClique::K3);
            PairLedger ledger = PairLedger::full(state, n);
            ++res.runs;
            while (!state.terminated()) {
                const std::uint64_t q_before = state.open_count();
                // Peek at the pair the next step will choose, so its y is read beforehand.
                Rng peek = rng;
                const auto pick = state.pairs().pair(state.open_pairs()[peek.below(state.open_count())]);
                const std::uint64_t y_chosen = recompute_oracle(state, pick).y;
                const auto outcome = state.advance(rng);
                if (outcome->edge != pick) ++res.q_identity_failures;
                ledger.apply(*outcome, state);
                ++res.steps;
                if (state.open_count() != q_before - 1 - y_chosen || ledger.q() != state.open_count())
                    ++res.q_identity_failures;
                for (PairIndex::Id id = 0; id < state.pair_count(); ++id) {
                    const auto st = state.status(id);
                    if (st == PairStatus::Edge) continue;
                    const auto p = state.pairs().pair(id);
                    ++res.pair_checks;
                    if (!(ledger.counts(state, p) == recompute_oracle(state, p))) ++res.ledger_mismatches;
                    if ((st == PairStatus::Closed) != is_closed_probe(state, p)) ++res.status_mismatches;
                }
            }
        }
    }
    return res;
}

struct ResidualSuiteResult {
    int grid_points = 0;
    double k3_max = 0;
    double k4_max = 0;
};

// Largest absolute ODE residual of the K3 and K4 closed forms on an evenly spaced grid.
inline ResidualSuiteResult ode_residual_suite(double t_lo = 0.01, double t_hi = 3.0, int points = 300) {
    ResidualSuiteResult r;
    r.grid_points = points;
    for (int k = 0; k < points; ++k) {
        const double t = t_lo + (t_hi - t_lo) * k / (points - 1);
        const auto a = k3_ode_residual(t);
        r.k3_max = std::max({r.k3_max, std::abs(a.q), std::abs(a.x), std::abs(a.y)});
        const auto b = k4_ode_residual(t);
        r.k4_max = std::max(r.k4_max, std::abs(b.q));
        for (double v : b.x) r.k4_max = std::max(r.k4_max, std::abs(v));
        for (double v : b.y) r.k4_max = std::max(r.k4_max, std::abs(v));
    }
    return r;
}

}  // namespace tfp
