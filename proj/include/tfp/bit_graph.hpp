#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tfp {

using Vertex = std::uint32_t;

// Unordered vertex pair, always stored with u < v.
struct VertexPair {
    Vertex u = 0;
    Vertex v = 0;

    VertexPair() = default;
    VertexPair(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {
        if (a == b) throw std::invalid_argument("VertexPair: endpoints must differ");
    }

    bool contains(Vertex w) const { return u == w || v == w; }
    Vertex other(Vertex w) const { return w == u ? v : u; }

    friend bool operator==(const VertexPair&, const VertexPair&) = default;
    friend auto operator<=>(const VertexPair&, const VertexPair&) = default;
};

// Bijection between unordered pairs of [n] and [0, n(n-1)/2), row-major over u < v.
class PairIndex {
public:
    using Id = std::uint32_t;

    PairIndex() = default;
    explicit PairIndex(Vertex n) : n_(n), row_start_(n + 1, 0) {
        const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        if (total > 0xFFFFFFFFULL) throw std::invalid_argument("PairIndex: too many pairs for 32-bit ids");
        for (Vertex u = 0; u < n; ++u) row_start_[u + 1] = row_start_[u] + (n - 1 - u);
    }

    Vertex n() const { return n_; }
    std::uint64_t size() const { return row_start_.empty() ? 0 : row_start_[n_]; }

    Id id(Vertex a, Vertex b) const {
        if (a > b) std::swap(a, b);
        return static_cast<Id>(row_start_[a] + (b - a - 1));
    }
    Id id(const VertexPair& p) const { return id(p.u, p.v); }

    VertexPair pair(Id id) const {
        const auto it = std::upper_bound(row_start_.begin(), row_start_.begin() + (n_ - 1), std::uint64_t{id});
        const auto u = static_cast<Vertex>(it - row_start_.begin() - 1);
        return VertexPair(u, static_cast<Vertex>(u + 1 + (id - row_start_[u])));
    }

private:
    Vertex n_ = 0;
    std::vector<std::uint64_t> row_start_;
};

// Simple undirected graph with adjacency rows stored as bit vectors.
class BitGraph {
public:
    BitGraph() = default;
    explicit BitGraph(Vertex n)
        : n_(n), words_((n + 63) / 64), bits_(static_cast<std::size_t>(n) * words_, 0), degree_(n, 0) {}

    Vertex n() const { return n_; }
    std::size_t words_per_row() const { return words_; }
    std::uint64_t edge_count() const { return edges_; }

    bool adjacent(Vertex a, Vertex b) const {
        return (bits_[static_cast<std::size_t>(a) * words_ + (b >> 6)] >> (b & 63)) & 1U;
    }

    void add_edge(Vertex a, Vertex b) {
        if (a == b || adjacent(a, b)) throw std::invalid_argument("BitGraph::add_edge: loop or duplicate edge");
        bits_[static_cast<std::size_t>(a) * words_ + (b >> 6)] |= std::uint64_t{1} << (b & 63);
        bits_[static_cast<std::size_t>(b) * words_ + (a >> 6)] |= std::uint64_t{1} << (a & 63);
        ++degree_[a];
        ++degree_[b];
        ++edges_;
    }

    std::span<const std::uint64_t> row(Vertex a) const {
        return {bits_.data() + static_cast<std::size_t>(a) * words_, words_};
    }

    std::uint32_t degree(Vertex a) const { return degree_[a]; }

    std::vector<Vertex> neighbors(Vertex a) const {
        std::vector<Vertex> out;
        out.reserve(degree_[a]);
        for_each_neighbor(a, [&](Vertex w) { out.push_back(w); });
        return out;
    }

    template <typename F>
    void for_each_neighbor(Vertex a, F&& f) const {
        for_each_bit(row(a), std::forward<F>(f));
    }

    template <typename F>
    static void for_each_bit(std::span<const std::uint64_t> words, F&& f) {
        for (std::size_t k = 0; k < words.size(); ++k) {
            std::uint64_t w = words[k];
            while (w) {
                const int b = std::countr_zero(w);
                f(static_cast<Vertex>(k * 64 + b));
                w &= w - 1;
            }
        }
    }

    friend bool operator==(const BitGraph& a, const BitGraph& b) { return a.n_ == b.n_ && a.bits_ == b.bits_; }

private:
    Vertex n_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint32_t> degree_;
    std::uint64_t edges_ = 0;
};

}  // namespace tfp
