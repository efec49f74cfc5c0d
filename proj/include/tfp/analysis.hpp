#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "tfp/bit_graph.hpp"
#include "tfp/random.hpp"
#include "tfp/records.hpp"

namespace tfp {

struct AlphaResult {
    std::uint64_t value = 0;
    bool exact = false;
    std::vector<Vertex> witness;
};

inline bool is_independent(const BitGraph& g, std::span<const Vertex> set) {
    for (std::size_t i = 0; i < set.size(); ++i)
        for (std::size_t j = i + 1; j < set.size(); ++j)
            if (set[i] == set[j] || g.adjacent(set[i], set[j])) return false;
    return true;
}

inline std::uint32_t max_degree(const BitGraph& g) {
    std::uint32_t d = 0;
    for (Vertex v = 0; v < g.n(); ++v) d = std::max(d, g.degree(v));
    return d;
}

// A vertex of maximum degree (lowest id among ties); n must be positive.
inline Vertex max_degree_vertex(const BitGraph& g) {
    Vertex best = 0;
    for (Vertex v = 1; v < g.n(); ++v)
        if (g.degree(v) > g.degree(best)) best = v;
    return best;
}

// Best of `repeats` randomized minimum-degree-first greedy runs
// (uniform choice among the current minimum-degree vertices).
inline AlphaResult independence_greedy(const BitGraph& g, Rng& rng, int repeats = 32) {
    const Vertex n = g.n();
    AlphaResult best;
    if (n == 0) return best;
    std::vector<std::vector<Vertex>> adj(n);
    for (Vertex v = 0; v < n; ++v) adj[v] = g.neighbors(v);

    std::vector<std::uint32_t> deg(n), pos(n);
    std::vector<char> alive(n);
    std::vector<std::vector<Vertex>> bucket;
    for (int rep = 0; rep < std::max(repeats, 1); ++rep) {
        bucket.assign(max_degree(g) + 1, {});
        for (Vertex v = 0; v < n; ++v) {
            deg[v] = g.degree(v);
            alive[v] = 1;
            pos[v] = static_cast<std::uint32_t>(bucket[deg[v]].size());
            bucket[deg[v]].push_back(v);
        }
        const auto unlink = [&](Vertex v) {
            auto& b = bucket[deg[v]];
            const Vertex last = b.back();
            b[pos[v]] = last;
            pos[last] = pos[v];
            b.pop_back();
        };
        std::size_t low = 0;
        std::vector<Vertex> chosen;
        Vertex remaining = n;
        while (remaining > 0) {
            while (bucket[low].empty()) ++low;
            auto& b = bucket[low];
            const Vertex v = b[static_cast<std::size_t>(rng.below(b.size()))];
            chosen.push_back(v);
            std::vector<Vertex> removed{v};
            for (Vertex w : adj[v])
                if (alive[w]) removed.push_back(w);
            for (Vertex r : removed) {
                unlink(r);
                alive[r] = 0;
                --remaining;
            }
            for (Vertex r : removed) {
                for (Vertex w : adj[r]) {
                    if (!alive[w]) continue;
                    unlink(w);
                    --deg[w];
                    pos[w] = static_cast<std::uint32_t>(bucket[deg[w]].size());
                    bucket[deg[w]].push_back(w);
                    low = std::min<std::size_t>(low, deg[w]);
                }
            }
        }
        if (chosen.size() > best.value) {
            best.value = chosen.size();
            best.witness = std::move(chosen);
        }
    }
    std::sort(best.witness.begin(), best.witness.end());
    return best;
}

inline constexpr Vertex kExactAlphaMaxN = 60;

namespace detail {

// Branch and bound over 64-bit vertex masks: vertices of degree <= 1 are
// taken directly; otherwise branch on a maximum-degree vertex. The bound is
// |P| minus a greedy matching of G[P] (each edge holds at most one chosen
// vertex), tightened by |P| - m(P)/Delta(P).
class MisSearch {
public:
    explicit MisSearch(const BitGraph& g) : n_(g.n()), adj_(g.n(), 0) {
        for (Vertex v = 0; v < n_; ++v)
            g.for_each_neighbor(v, [&](Vertex w) { adj_[v] |= std::uint64_t{1} << w; });
    }

    void seed(const std::vector<Vertex>& lower) {
        best_ = lower;
    }

    std::vector<Vertex> solve() {
        const std::uint64_t all = n_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_) - 1);
        std::vector<Vertex> cur;
        expand(all, cur);
        std::sort(best_.begin(), best_.end());
        return best_;
    }

private:
    int degree_in(Vertex v, std::uint64_t p) const { return std::popcount(adj_[v] & p); }

    int upper_bound(std::uint64_t p) const {
        const int size = std::popcount(p);
        std::uint64_t left = p;
        int matching = 0, edges2 = 0, maxdeg = 0;
        for (std::uint64_t q = p; q; q &= q - 1) {
            const Vertex v = static_cast<Vertex>(std::countr_zero(q));
            const int d = degree_in(v, p);
            edges2 += d;
            maxdeg = std::max(maxdeg, d);
        }
        while (left) {
            const Vertex v = static_cast<Vertex>(std::countr_zero(left));
            left &= left - 1;
            const std::uint64_t nb = adj_[v] & left;
            if (nb) {
                ++matching;
                left &= ~(nb & (~nb + 1));
            }
        }
        int ub = size - matching;
        if (maxdeg > 0) ub = std::min(ub, size - (edges2 / 2 + maxdeg - 1) / maxdeg);
        return ub;
    }

    void expand(std::uint64_t p, std::vector<Vertex>& cur) {
        const std::size_t base = cur.size();
        // Degree <= 1 vertices belong to some maximum independent set of G[P].
        for (bool again = true; again && p;) {
            again = false;
            for (std::uint64_t q = p; q; q &= q - 1) {
                const Vertex v = static_cast<Vertex>(std::countr_zero(q));
                if (!((p >> v) & 1)) continue;
                if (degree_in(v, p) <= 1) {
                    cur.push_back(v);
                    p &= ~(adj_[v] | (std::uint64_t{1} << v));
                    again = true;
                }
            }
        }
        if (!p) {
            if (cur.size() > best_.size()) best_ = cur;
            cur.resize(base);
            return;
        }
        if (static_cast<int>(cur.size()) + upper_bound(p) <= static_cast<int>(best_.size())) {
            cur.resize(base);
            return;
        }
        Vertex pivot = 0;
        int pd = -1;
        for (std::uint64_t q = p; q; q &= q - 1) {
            const Vertex v = static_cast<Vertex>(std::countr_zero(q));
            const int d = degree_in(v, p);
            if (d > pd) {
                pd = d;
                pivot = v;
            }
        }
        cur.push_back(pivot);
        expand(p & ~(adj_[pivot] | (std::uint64_t{1} << pivot)), cur);
        cur.pop_back();
        expand(p & ~(std::uint64_t{1} << pivot), cur);
        cur.resize(base);
    }

    Vertex n_;
    std::vector<std::uint64_t> adj_;
    std::vector<Vertex> best_;
};

}  // namespace detail

// Exact independence number for n <= cap (at most 64).
inline AlphaResult independence_exact(const BitGraph& g, Vertex cap = kExactAlphaMaxN) {
    if (cap > 64) throw std::invalid_argument("independence_exact: cap cannot exceed 64");
    if (g.n() > cap)
        throw std::invalid_argument("independence_exact: n = " + std::to_string(g.n()) + " exceeds cap " +
                                    std::to_string(cap) + "; use independence_greedy");
    AlphaResult r;
    r.exact = true;
    if (g.n() == 0) return r;
    Rng rng(0x5eed);
    detail::MisSearch search(g);
    search.seed(independence_greedy(g, rng, 4).witness);
    r.witness = search.solve();
    r.value = r.witness.size();
    return r;
}

// ---------------------------------------------------------------------------
// Ramsey-ratio summaries

struct SummaryRow {
    ForbiddenClique rule = ForbiddenClique::K3;
    Vertex n = 0;
    std::uint64_t trials = 0;
    double mean_m_ratio = 0;
    double std_m_ratio = 0;
    double mean_alpha_ratio = 0;
    double mean_delta_ratio = 0;
    double implied_ramsey_ratio = 0;
};

// Normalizations per rule. K3: M / (n^{3/2} sqrt(ln n)), alpha and Delta by
// sqrt(n ln n), Ramsey ratio n ln t / t^2. K4: M / (n^{8/5} ln^{1/5} n),
// alpha / (n^{2/5} ln^{4/5} n), Delta / (n^{3/5} ln^{1/5} n),
// Ramsey ratio n ln^2 t / t^{5/2}. Here t = alpha + 1.
struct Normalization {
    static double edges(ForbiddenClique rule, double n, double m) {
        const double ln = std::log(n);
        return rule == ForbiddenClique::K3 ? m / (std::pow(n, 1.5) * std::sqrt(ln))
                                           : m / (std::pow(n, 1.6) * std::pow(ln, 0.2));
    }
    static double alpha(ForbiddenClique rule, double n, double a) {
        const double ln = std::log(n);
        return rule == ForbiddenClique::K3 ? a / std::sqrt(n * ln) : a / (std::pow(n, 0.4) * std::pow(ln, 0.8));
    }
    static double degree(ForbiddenClique rule, double n, double d) {
        const double ln = std::log(n);
        return rule == ForbiddenClique::K3 ? d / std::sqrt(n * ln) : d / (std::pow(n, 0.6) * std::pow(ln, 0.2));
    }
    static double ramsey(ForbiddenClique rule, double n, double alpha) {
        const double t = alpha + 1.0;
        const double lt = std::log(t);
        return rule == ForbiddenClique::K3 ? n * lt / (t * t) : n * lt * lt / std::pow(t, 2.5);
    }
};

namespace detail {
inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::nan("");
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}
inline double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}
}  // namespace detail

// One row per (rule, n). M ratios use completed runs only; alpha is the
// exact value when recorded, otherwise the greedy lower bound.
inline std::vector<SummaryRow> ramsey_summary(std::span<const RunRecord> records) {
    if (records.empty()) throw std::invalid_argument("ramsey_summary: no records");
    std::map<std::pair<int, Vertex>, std::vector<const RunRecord*>> groups;
    for (const auto& r : records) groups[{clique_order(r.rule), r.n}].push_back(&r);
    std::vector<SummaryRow> rows;
    for (const auto& [key, recs] : groups) {
        SummaryRow row;
        row.rule = forbidden_clique(key.first);
        row.n = key.second;
        row.trials = recs.size();
        const double n = row.n;
        std::vector<double> m_ratio, a_ratio, d_ratio, ramsey;
        for (const RunRecord* r : recs) {
            if (r->edges_final) m_ratio.push_back(Normalization::edges(row.rule, n, double(*r->edges_final)));
            const double alpha = r->alpha_exact ? double(*r->alpha_exact) : double(r->alpha_greedy);
            a_ratio.push_back(Normalization::alpha(row.rule, n, alpha));
            d_ratio.push_back(Normalization::degree(row.rule, n, r->max_degree));
            ramsey.push_back(Normalization::ramsey(row.rule, n, alpha));
        }
        row.mean_m_ratio = detail::mean_of(m_ratio);
        row.std_m_ratio = detail::sample_std(m_ratio);
        row.mean_alpha_ratio = detail::mean_of(a_ratio);
        row.mean_delta_ratio = detail::mean_of(d_ratio);
        row.implied_ramsey_ratio = detail::mean_of(ramsey);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace tfp
