#pragma once

#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfp/bit_graph.hpp"
#include "tfp/graph_process.hpp"

namespace tfp {

// graph6 encoding (McKay): N(n) followed by the upper triangle read column
// by column, six bits per printable character (value + 63).
inline std::string to_graph6(const BitGraph& g) {
    const std::uint64_t n = g.n();
    std::string out;
    if (n <= 62) {
        out.push_back(static_cast<char>(n + 63));
    } else if (n <= 258047) {
        out.push_back('~');
        for (int shift = 12; shift >= 0; shift -= 6) out.push_back(static_cast<char>(((n >> shift) & 63) + 63));
    } else {
        out.append("~~");
        for (int shift = 30; shift >= 0; shift -= 6) out.push_back(static_cast<char>(((n >> shift) & 63) + 63));
    }
    int acc = 0, nbits = 0;
    for (Vertex j = 1; j < n; ++j) {
        for (Vertex i = 0; i < j; ++i) {
            acc = (acc << 1) | (g.adjacent(i, j) ? 1 : 0);
            if (++nbits == 6) {
                out.push_back(static_cast<char>(acc + 63));
                acc = 0;
                nbits = 0;
            }
        }
    }
    if (nbits > 0) out.push_back(static_cast<char>((acc << (6 - nbits)) + 63));
    return out;
}

inline BitGraph from_graph6(const std::string& text) {
    std::size_t pos = 0;
    auto next = [&]() -> std::uint64_t {
        if (pos >= text.size()) throw std::invalid_argument("graph6: truncated input");
        const int c = static_cast<unsigned char>(text[pos++]);
        if (c < 63 || c > 126) throw std::invalid_argument("graph6: invalid character");
        return static_cast<std::uint64_t>(c - 63);
    };
    std::uint64_t n = next();
    if (n == 63) {
        if (pos < text.size() && text[pos] == '~') {
            ++pos;
            n = 0;
            for (int k = 0; k < 6; ++k) n = (n << 6) | next();
        } else {
            n = 0;
            for (int k = 0; k < 3; ++k) n = (n << 6) | next();
        }
    }
    BitGraph g(static_cast<Vertex>(n));
    std::uint64_t chunk = 0;
    int left = 0;
    for (Vertex j = 1; j < n; ++j) {
        for (Vertex i = 0; i < j; ++i) {
            if (left == 0) {
                chunk = next();
                left = 6;
            }
            --left;
            if ((chunk >> left) & 1) g.add_edge(i, j);
        }
    }
    return g;
}

struct EdgeLog {
    Vertex n = 0;
    ForbiddenClique rule = ForbiddenClique::K3;
    std::uint64_t seed = 0;
    std::vector<VertexPair> edges;
};

inline EdgeLog read_edge_log(std::istream& in) {
    EdgeLog log;
    std::string header;
    if (!std::getline(in, header)) throw std::invalid_argument("edge log: missing header");
    std::istringstream hs(header);
    std::string tok;
    bool have_n = false, have_rule = false, have_seed = false;
    while (hs >> tok) {
        if (tok.rfind("n=", 0) == 0) {
            log.n = static_cast<Vertex>(std::stoul(tok.substr(2)));
            have_n = true;
        } else if (tok.rfind("rule=K", 0) == 0) {
            log.rule = forbidden_clique(std::stoi(tok.substr(6)));
            have_rule = true;
        } else if (tok.rfind("seed=", 0) == 0) {
            log.seed = std::stoull(tok.substr(5));
            have_seed = true;
        }
    }
    if (!have_n || !have_rule || !have_seed) throw std::invalid_argument("edge log: malformed header: " + header);
    Vertex u, v;
    while (in >> u >> v) {
        if (u >= v || v >= log.n) throw std::invalid_argument("edge log: edge must satisfy u < v < n");
        log.edges.emplace_back(u, v);
    }
    return log;
}

}  // namespace tfp
