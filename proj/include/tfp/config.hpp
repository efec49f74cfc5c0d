#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfp/graph_process.hpp"
#include "tfp/k4_process.hpp"
#include "tfp/pair_tracker.hpp"
#include "tfp/records.hpp"
#include "tfp/trajectory.hpp"

namespace tfp {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class StopKind { Full, Paper, Steps, Time };

struct StopRule {
    StopKind kind = StopKind::Full;
    double value = 0;  // step count for Steps, scaled time for Time
};

enum class LedgerChoice { Sampled, Full };

struct ExperimentConfig {
    ForbiddenClique process = ForbiddenClique::K3;
    std::vector<Vertex> n_list;
    std::uint64_t trials = 1;
    std::uint64_t base_seed = 1;
    std::uint64_t snapshot_stride = 0;  // 0 = auto
    LedgerChoice ledger = LedgerChoice::Sampled;
    Vertex n_ledger_max = kDefaultFullLedgerMaxN;
    std::uint64_t witness_pairs = kDefaultWitnessPairs;
    std::uint64_t k4_witness_pairs = kDefaultK4WitnessPairs;
    std::uint64_t k4_witness_triples = kDefaultK4WitnessTriples;
    K4Polynomial k4_poly = kDefaultK4Polynomial;
    StopRule stop;
    double mu = 1.0 / 32.0;
    double beta = 0.5;
    double gamma = 161.0;
    double rho = 1.0 / 32.0;
    unsigned workers = 1;
    Vertex exact_alpha_cap = 60;
    int greedy_repeats = 32;
    bool export_graphs = false;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(std::string v) {
    v = trim(v);
    if (!v.empty() && v.front() == '[') {
        if (v.back() != ']') throw ConfigError("unterminated list: " + v);
        v = v.substr(1, v.size() - 2);
    }
    std::vector<std::string> out;
    std::stringstream ss(v);
    for (std::string item; std::getline(ss, item, ',');) {
        item = trim(item);
        if (item.empty()) throw ConfigError("empty list element in: " + v);
        out.push_back(item);
    }
    return out;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
        const auto x = std::stoull(v, &used, 0);
        if (used != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a nonnegative integer, got '" + v + "'");
    }
}

// Accepts decimals and fractions such as 1/32.
inline double parse_real(const std::string& key, const std::string& v) {
    try {
        const auto slash = v.find('/');
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const double x = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument("trailing");
            return x;
        }
        const auto num = v.substr(0, slash), den = v.substr(slash + 1);
        const double a = std::stod(num, &used);
        if (used != num.size()) throw std::invalid_argument("trailing");
        const double b = std::stod(den, &used);
        if (used != den.size() || b == 0) throw std::invalid_argument("bad denominator");
        return a / b;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

}  // namespace detail

// Applies one key=value setting.
inline void set_config_key(ExperimentConfig& c, const std::string& key, const std::string& raw) {
    using namespace detail;
    const std::string v = trim(raw);
    if (key == "process") {
        if (v == "K3") c.process = ForbiddenClique::K3;
        else if (v == "K4") c.process = ForbiddenClique::K4;
        else throw ConfigError("process: expected K3 or K4, got '" + v + "'");
    } else if (key == "n_list" || key == "n") {
        c.n_list.clear();
        for (const auto& item : split_list(v)) {
            const auto n = parse_uint(key, item);
            if (n < 2 || n > 65535) throw ConfigError("n_list: n must lie in [2, 65535], got " + item);
            c.n_list.push_back(static_cast<Vertex>(n));
        }
    } else if (key == "trials") {
        c.trials = parse_uint(key, v);
    } else if (key == "base_seed" || key == "seed") {
        c.base_seed = parse_uint(key, v);
    } else if (key == "snapshot_stride") {
        c.snapshot_stride = v == "auto" ? 0 : parse_uint(key, v);
        if (v != "auto" && c.snapshot_stride == 0) throw ConfigError("snapshot_stride: must be positive or auto");
    } else if (key == "ledger") {
        if (v == "sampled") c.ledger = LedgerChoice::Sampled;
        else if (v == "full") c.ledger = LedgerChoice::Full;
        else throw ConfigError("ledger: expected sampled or full, got '" + v + "'");
    } else if (key == "n_ledger_max") {
        c.n_ledger_max = static_cast<Vertex>(parse_uint(key, v));
    } else if (key == "witness_pairs") {
        c.witness_pairs = parse_uint(key, v);
    } else if (key == "k4_witness_pairs") {
        c.k4_witness_pairs = parse_uint(key, v);
    } else if (key == "k4_witness_triples") {
        c.k4_witness_triples = parse_uint(key, v);
    } else if (key == "k4_poly") {
        const auto items = split_list(v);
        if (items.size() != 6) throw ConfigError("k4_poly: expected 6 coefficients");
        for (std::size_t k = 0; k < 6; ++k) c.k4_poly[k] = parse_real(key, items[k]);
    } else if (key == "stop") {
        if (v == "full") c.stop = {StopKind::Full, 0};
        else if (v == "paper") c.stop = {StopKind::Paper, 0};
        else if (v.rfind("steps:", 0) == 0) c.stop = {StopKind::Steps, double(parse_uint(key, v.substr(6)))};
        else if (v.rfind("time:", 0) == 0) c.stop = {StopKind::Time, parse_real(key, v.substr(5))};
        else throw ConfigError("stop: expected full, paper, steps:N or time:T, got '" + v + "'");
    } else if (key == "mu") {
        c.mu = parse_real(key, v);
    } else if (key == "beta") {
        c.beta = parse_real(key, v);
    } else if (key == "gamma") {
        c.gamma = parse_real(key, v);
    } else if (key == "rho") {
        c.rho = parse_real(key, v);
    } else if (key == "workers") {
        c.workers = static_cast<unsigned>(parse_uint(key, v));
    } else if (key == "exact_alpha_cap") {
        c.exact_alpha_cap = static_cast<Vertex>(parse_uint(key, v));
    } else if (key == "greedy_repeats") {
        c.greedy_repeats = static_cast<int>(parse_uint(key, v));
    } else if (key == "export_graphs") {
        c.export_graphs = parse_bool(key, v);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

inline void validate(const ExperimentConfig& c) {
    if (c.n_list.empty()) throw ConfigError("n_list must be nonempty");
    if (c.trials < 1) throw ConfigError("trials must be at least 1");
    if (!(c.mu > 0 && c.beta > 0 && c.gamma > 0 && c.rho > 0)) throw ConfigError("constants must be positive");
    if (c.workers < 1) throw ConfigError("workers must be at least 1");
    if (c.exact_alpha_cap > 64) throw ConfigError("exact_alpha_cap cannot exceed 64");
    if (c.greedy_repeats < 1) throw ConfigError("greedy_repeats must be at least 1");
    if (c.stop.kind == StopKind::Time && !(c.stop.value > 0)) throw ConfigError("stop time must be positive");
    for (double p : c.k4_poly)
        if (!(p > 0)) throw ConfigError("k4_poly coefficients must be positive");
    for (Vertex n : c.n_list) {
        if (c.process == ForbiddenClique::K4 && n < 4) throw ConfigError("K4 runs need n >= 4");
        if (c.process == ForbiddenClique::K3 && c.ledger == LedgerChoice::Full && n > c.n_ledger_max)
            throw ConfigError("n = " + std::to_string(n) + " exceeds the full-ledger cap " +
                              std::to_string(c.n_ledger_max) + "; use ledger=sampled");
    }
}

// Parses a key=value file. '#' starts a comment; later keys override earlier ones.
inline ExperimentConfig parse_config(std::istream& in, const std::string& origin = "config") {
    ExperimentConfig c;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
        try {
            set_config_key(c, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse_config(in, path);
}

inline ExperimentConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

// Snapshot stride in steps: configured, or n^{3/2}/100 (K3) / n^{8/5}/100 (K4) rounded, at least 1.
inline std::uint64_t resolved_stride(const ExperimentConfig& c, Vertex n) {
    if (c.snapshot_stride > 0) return c.snapshot_stride;
    const double e = c.process == ForbiddenClique::K3 ? 1.5 : 1.6;
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(std::pow(double(n), e) / 100.0)));
}

// Step cap for one run, or nullopt for a full run. The analysed-horizon cap is
// mu sqrt(ln n) n^{3/2} (K3) and mu n^{8/5} ln^{1/5} n (K4).
inline std::optional<std::uint64_t> resolved_step_cap(const ExperimentConfig& c, Vertex n) {
    const double nd = n;
    const double scale = c.process == ForbiddenClique::K3 ? std::pow(nd, 1.5) : std::pow(nd, 1.6);
    switch (c.stop.kind) {
        case StopKind::Full: return std::nullopt;
        case StopKind::Steps: return static_cast<std::uint64_t>(c.stop.value);
        case StopKind::Time: return static_cast<std::uint64_t>(std::floor(c.stop.value * scale));
        case StopKind::Paper: {
            const double ln = std::log(nd);
            const double m = c.process == ForbiddenClique::K3 ? c.mu * std::sqrt(ln) * scale
                                                              : c.mu * scale * std::pow(ln, 0.2);
            return static_cast<std::uint64_t>(std::floor(m));
        }
    }
    return std::nullopt;
}

inline std::string stop_string(const StopRule& s) {
    std::ostringstream o;
    switch (s.kind) {
        case StopKind::Full: return "full";
        case StopKind::Paper: return "paper";
        case StopKind::Steps: o << "steps:" << static_cast<std::uint64_t>(s.value); return o.str();
        case StopKind::Time: o << "time:" << s.value; return o.str();
    }
    return "full";
}

// The resolved configuration, including derived per-n values, as JSON.
inline Json config_to_json(const ExperimentConfig& c) {
    Json j;
    j["kind"] = "config";
    j["process"] = to_string(c.process);
    j["n_list"] = c.n_list;
    j["trials"] = c.trials;
    j["base_seed"] = c.base_seed;
    j["snapshot_stride"] = c.snapshot_stride == 0 ? Json("auto") : Json(c.snapshot_stride);
    j["ledger"] = c.ledger == LedgerChoice::Full ? "full" : "sampled";
    j["n_ledger_max"] = c.n_ledger_max;
    j["witness_pairs"] = c.witness_pairs;
    j["k4_witness_pairs"] = c.k4_witness_pairs;
    j["k4_witness_triples"] = c.k4_witness_triples;
    j["k4_poly"] = c.k4_poly;
    j["stop"] = stop_string(c.stop);
    j["constants"] = {{"mu", c.mu}, {"beta", c.beta}, {"gamma", c.gamma}, {"rho", c.rho}};
    j["exact_alpha_cap"] = c.exact_alpha_cap;
    j["greedy_repeats"] = c.greedy_repeats;
    j["export_graphs"] = c.export_graphs;
    j["rng"] = std::string(Rng::name);
    j["trial_seed_multiplier"] = kTrialSeedMultiplier;
    Json per_n = Json::array();
    for (Vertex n : c.n_list) {
        const auto cap = resolved_step_cap(c, n);
        per_n.push_back({{"n", n}, {"stride", resolved_stride(c, n)}, {"step_cap", cap ? Json(*cap) : Json(nullptr)}});
    }
    j["resolved"] = std::move(per_n);
    return j;
}

}  // namespace tfp
