#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tfp/graph_process.hpp"

namespace tfp {

using Json = nlohmann::ordered_json;

// One audited point of a run. For K4 runs the x/y/z fields carry the f = 0
// witness families (X_{A,0}, Y_{A,0}) and the maximum of Y_{A,3}; the full
// families are in x_f_* / y_f_*.
struct SnapshotRecord {
    std::uint64_t i = 0;
    double t = 0;
    std::uint64_t q = 0;
    double q_pred = 0;
    std::uint64_t tracked = 0;  // non-edge witnesses averaged below
    double x_mean = 0;
    double x_pred = 0;
    double y_mean = 0;
    double y_pred = 0;
    std::uint64_t z_max = 0;
    std::uint64_t violations = 0;
    std::vector<double> x_f_mean;  // K4: mean |X_{A,f}|, f = 0..4
    std::vector<double> x_f_pred;  // K4: x_f(t) n^{2-2f/5}
    std::vector<double> y_f_mean;  // K4: mean |Y_{A,f}|, f = 0..3
    std::vector<double> y_f_pred;  // K4: y_f(t) n^{1-2f/5}, f = 0..2
};

struct RunRecord {
    std::string run_id;
    ForbiddenClique rule = ForbiddenClique::K3;
    Vertex n = 0;
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;
    std::string rng;
    bool completed = false;
    std::optional<std::uint64_t> edges_final;  // M, present iff completed
    std::uint64_t steps = 0;
    std::vector<SnapshotRecord> snapshots;
    std::uint64_t alpha_greedy = 0;
    std::optional<std::uint64_t> alpha_exact;
    std::uint32_t max_degree = 0;
    bool degree_certified = false;  // N(v) of a max-degree vertex verified independent
    std::string ledger;
    std::string witness_reading;
    double runtime_seconds = 0;  // kept out of the record file
};

inline Json snapshot_to_json(const SnapshotRecord& s) {
    Json j;
    j["i"] = s.i;
    j["t"] = s.t;
    j["Q"] = s.q;
    j["Q_pred"] = s.q_pred;
    j["tracked"] = s.tracked;
    j["X_mean"] = s.x_mean;
    j["X_pred"] = s.x_pred;
    j["Y_mean"] = s.y_mean;
    j["Y_pred"] = s.y_pred;
    j["Z_max"] = s.z_max;
    j["violations"] = s.violations;
    if (!s.x_f_mean.empty()) {
        j["x_f_mean"] = s.x_f_mean;
        j["x_f_pred"] = s.x_f_pred;
        j["y_f_mean"] = s.y_f_mean;
        j["y_f_pred"] = s.y_f_pred;
    }
    return j;
}

inline double json_real(const Json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

inline std::vector<double> json_reals(const Json& j) {
    std::vector<double> out;
    for (const auto& e : j) out.push_back(json_real(e));
    return out;
}

inline SnapshotRecord snapshot_from_json(const Json& j) {
    SnapshotRecord s;
    s.i = j.at("i").get<std::uint64_t>();
    s.t = json_real(j.at("t"));
    s.q = j.at("Q").get<std::uint64_t>();
    s.q_pred = json_real(j.at("Q_pred"));
    s.tracked = j.at("tracked").get<std::uint64_t>();
    s.x_mean = json_real(j.at("X_mean"));
    s.x_pred = json_real(j.at("X_pred"));
    s.y_mean = json_real(j.at("Y_mean"));
    s.y_pred = json_real(j.at("Y_pred"));
    s.z_max = j.at("Z_max").get<std::uint64_t>();
    s.violations = j.at("violations").get<std::uint64_t>();
    if (j.contains("x_f_mean")) {
        s.x_f_mean = json_reals(j.at("x_f_mean"));
        s.x_f_pred = json_reals(j.at("x_f_pred"));
        s.y_f_mean = json_reals(j.at("y_f_mean"));
        s.y_f_pred = json_reals(j.at("y_f_pred"));
    }
    return s;
}

inline Json record_to_json(const RunRecord& r) {
    Json j;
    j["kind"] = "run";
    j["run_id"] = r.run_id;
    j["rule"] = to_string(r.rule);
    j["n"] = r.n;
    j["trial"] = r.trial;
    j["seed"] = r.seed;
    j["rng"] = r.rng;
    j["completed"] = r.completed;
    j["M"] = r.edges_final ? Json(*r.edges_final) : Json(nullptr);
    j["steps"] = r.steps;
    j["alpha_greedy"] = r.alpha_greedy;
    j["alpha_exact"] = r.alpha_exact ? Json(*r.alpha_exact) : Json(nullptr);
    j["max_degree"] = r.max_degree;
    j["degree_certified"] = r.degree_certified;
    j["ledger"] = r.ledger;
    if (!r.witness_reading.empty()) j["witness_reading"] = r.witness_reading;
    Json snaps = Json::array();
    for (const auto& s : r.snapshots) snaps.push_back(snapshot_to_json(s));
    j["snapshots"] = std::move(snaps);
    return j;
}

inline RunRecord record_from_json(const Json& j) {
    RunRecord r;
    r.run_id = j.at("run_id").get<std::string>();
    const auto rule = j.at("rule").get<std::string>();
    if (rule.size() != 2 || rule[0] != 'K') throw std::invalid_argument("record: bad rule " + rule);
    r.rule = forbidden_clique(rule[1] - '0');
    r.n = j.at("n").get<Vertex>();
    r.trial = j.at("trial").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.rng = j.at("rng").get<std::string>();
    r.completed = j.at("completed").get<bool>();
    if (!j.at("M").is_null()) r.edges_final = j.at("M").get<std::uint64_t>();
    r.steps = j.at("steps").get<std::uint64_t>();
    r.alpha_greedy = j.at("alpha_greedy").get<std::uint64_t>();
    if (!j.at("alpha_exact").is_null()) r.alpha_exact = j.at("alpha_exact").get<std::uint64_t>();
    r.max_degree = j.at("max_degree").get<std::uint32_t>();
    r.degree_certified = j.at("degree_certified").get<bool>();
    r.ledger = j.at("ledger").get<std::string>();
    if (j.contains("witness_reading")) r.witness_reading = j.at("witness_reading").get<std::string>();
    for (const auto& s : j.at("snapshots")) r.snapshots.push_back(snapshot_from_json(s));
    return r;
}

}  // namespace tfp
