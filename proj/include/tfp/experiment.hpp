#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tfp/analysis.hpp"
#include "tfp/config.hpp"
#include "tfp/graph_io.hpp"
#include "tfp/graph_process.hpp"
#include "tfp/k4_process.hpp"
#include "tfp/pair_tracker.hpp"
#include "tfp/records.hpp"
#include "tfp/trajectory.hpp"

namespace tfp {

// Stream tags: every random choice of a trial comes from
// substream_seed(trial seed, tag ^ n).
inline constexpr std::uint64_t kProcessStreamTag = 0;
inline constexpr std::uint64_t kWitnessStreamTag = std::uint64_t{1} << 40;
inline constexpr std::uint64_t kAlphaStreamTag = std::uint64_t{2} << 40;

struct TrialOutput {
    RunRecord record;
    std::string graph6;
    std::string edge_log;
};

namespace detail {

inline double mean_or_nan(double sum, std::uint64_t count) {
    return count == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(count);
}

inline SnapshotRecord k3_snapshot(const ProcessState& state, const PairLedger& ledger) {
    const Vertex n = state.n();
    const double nd = n;
    std::vector<TrackedPair> tracked;
    if (ledger.mode() == LedgerMode::Full) {
        for (PairIndex::Id id = 0; id < state.pair_count(); ++id) {
            if (state.status(id) == PairStatus::Edge) continue;
            const auto p = state.pairs().pair(id);
            tracked.push_back({p, ledger.counts(state, p)});
        }
    } else {
        for (std::size_t k = 0; k < ledger.witnesses().size(); ++k) {
            const auto& p = ledger.witnesses()[k];
            if (state.status(p) != PairStatus::Edge) tracked.push_back({p, ledger.witness_counts(k)});
        }
    }
    SnapshotRecord s;
    s.i = state.step();
    s.t = k3_time(s.i, n);
    s.q = state.open_count();
    const auto c = k3_eval(s.t);
    s.q_pred = c.q * nd * nd;
    s.x_pred = c.x * nd;
    s.y_pred = c.y * std::sqrt(nd);
    double sx = 0, sy = 0;
    for (const auto& tp : tracked) {
        sx += tp.counts.x;
        sy += tp.counts.y;
        s.z_max = std::max<std::uint64_t>(s.z_max, tp.counts.z);
    }
    s.tracked = tracked.size();
    s.x_mean = mean_or_nan(sx, tracked.size());
    s.y_mean = mean_or_nan(sy, tracked.size());
    s.violations = k3_bad_event(s.q, tracked, n, s.i).violations.size();
    return s;
}

inline SnapshotRecord k4_snapshot(const ProcessState& state, const K4WitnessTracker& tracker,
                                  const K4Polynomial& poly) {
    const Vertex n = state.n();
    const double nd = n;
    SnapshotRecord s;
    s.i = state.step();
    s.t = k4_time(s.i, n);
    s.q = state.open_count();
    const auto c = k4_eval(s.t);
    s.q_pred = c.q * nd * nd;
    std::array<double, 5> sx{};
    std::array<double, 4> sy{};
    std::uint64_t live_pairs = 0, live_triples = 0;
    for (const auto& w : tracker.pairs()) {
        if (w.frozen) continue;
        ++live_pairs;
        for (int f = 0; f < 5; ++f) sx[f] += static_cast<double>(w.x[f]);
    }
    for (const auto& w : tracker.triples()) {
        if (w.frozen) continue;
        ++live_triples;
        for (int f = 0; f < 4; ++f) sy[f] += static_cast<double>(w.y[f]);
        s.z_max = std::max<std::uint64_t>(s.z_max, w.y[3]);
    }
    for (int f = 0; f < 5; ++f) {
        s.x_f_mean.push_back(mean_or_nan(sx[f], live_pairs));
        s.x_f_pred.push_back(c.x[f] * k4_x_scale(f, n));
    }
    for (int f = 0; f < 4; ++f) s.y_f_mean.push_back(mean_or_nan(sy[f], live_triples));
    for (int f = 0; f < 3; ++f) s.y_f_pred.push_back(c.y[f] * k4_y_scale(f, n));
    s.tracked = live_pairs;
    s.x_mean = s.x_f_mean[0];
    s.x_pred = s.x_f_pred[0];
    s.y_mean = s.y_f_mean[0];
    s.y_pred = s.y_f_pred[0];
    s.violations = k4_bad_event(s.q, tracker.pairs(), tracker.triples(), n, s.i, poly).violations.size();
    return s;
}

}  // namespace detail

inline std::string run_id_for(ForbiddenClique rule, Vertex n, std::uint64_t trial) {
    return to_string(rule) + "-n" + std::to_string(n) + "-t" + std::to_string(trial);
}

// One seeded trial: the process with snapshots, then alpha and Delta of the final graph.
inline TrialOutput run_trial(const ExperimentConfig& c, Vertex n, std::uint64_t trial) {
    const auto started = std::chrono::steady_clock::now();
    TrialOutput out;
    RunRecord& r = out.record;
    r.run_id = run_id_for(c.process, n, trial);
    r.rule = c.process;
    r.n = n;
    r.trial = trial;
    r.seed = trial_seed(c.base_seed, trial);
    r.rng = std::string(Rng::name);

    Rng process_rng(substream_seed(r.seed, kProcessStreamTag ^ n));
    Rng witness_rng(substream_seed(r.seed, kWitnessStreamTag ^ n));
    ProcessState state(n, c.process);
    const auto stride = resolved_stride(c, n);
    const auto cap = resolved_step_cap(c, n);
    const auto more = [&] { return !state.terminated() && (!cap || state.step() < *cap); };

    if (c.process == ForbiddenClique::K3) {
        std::optional<PairLedger> ledger;
        if (c.ledger == LedgerChoice::Full) {
            ledger = PairLedger::full(state, c.n_ledger_max);
            r.ledger = "full";
        } else {
            ledger = PairLedger::sampled(state, draw_pairs(state.pairs(), c.witness_pairs, witness_rng));
            r.ledger = "sampled:" + std::to_string(ledger->witnesses().size());
        }
        const auto snap = [&] {
            ledger->refresh(state);
            r.snapshots.push_back(detail::k3_snapshot(state, *ledger));
        };
        snap();
        while (more()) {
            const auto outcome = state.advance(process_rng);
            ledger->apply(*outcome, state);
            if (state.step() % stride == 0) snap();
        }
        if (r.snapshots.back().i != state.step()) snap();
    } else {
        const auto pairs = draw_pairs(state.pairs(), c.k4_witness_pairs, witness_rng);
        const auto triples = K4WitnessTracker::draw_triples(n, c.k4_witness_triples, witness_rng);
        K4WitnessTracker tracker(state, pairs, triples);
        r.ledger = "k4-witness:" + std::to_string(pairs.size()) + "+" + std::to_string(triples.size());
        r.witness_reading = std::string(kTripleClosednessReading) + "; " + kWitnessDisjointness;
        const auto snap = [&] {
            tracker.refresh(state);
            r.snapshots.push_back(detail::k4_snapshot(state, tracker, c.k4_poly));
        };
        snap();
        while (more()) {
            const auto outcome = state.advance(process_rng);
            tracker.on_step(*outcome, state);
            if (state.step() % stride == 0) snap();
        }
        if (r.snapshots.back().i != state.step()) snap();
    }

    r.steps = state.step();
    r.completed = state.terminated();
    if (r.completed) r.edges_final = state.edge_count();

    const BitGraph& g = state.graph();
    Rng alpha_rng(substream_seed(r.seed, kAlphaStreamTag ^ n));
    r.alpha_greedy = independence_greedy(g, alpha_rng, c.greedy_repeats).value;
    if (n <= c.exact_alpha_cap) r.alpha_exact = independence_exact(g, c.exact_alpha_cap).value;
    r.max_degree = max_degree(g);
    if (c.process == ForbiddenClique::K3) {
        const auto nb = g.neighbors(max_degree_vertex(g));
        r.degree_certified = is_independent(g, nb);
    }

    if (c.export_graphs) {
        out.graph6 = to_graph6(g);
        std::ostringstream log;
        write_edge_log(log, state, r.seed);
        out.edge_log = log.str();
    }
    r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

namespace detail {

inline std::ofstream open_for_write(const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
}

inline void check_stream(std::ostream& f, const std::filesystem::path& p) {
    if (!f) throw std::runtime_error("write failed: " + p.string());
}

}  // namespace detail

// Runs trials x n_list, in parallel up to `workers`. With an output
// directory, records.jsonl receives the config line and then one record per
// trial in (n, trial) order, flushed as each becomes writable; runtimes go to
// timing.jsonl so that the record file stays reproducible.
inline std::vector<RunRecord> run_experiment(const ExperimentConfig& config,
                                             const std::optional<std::filesystem::path>& out_dir = std::nullopt) {
    validate(config);
    struct Job {
        Vertex n;
        std::uint64_t trial;
    };
    std::vector<Job> jobs;
    for (Vertex n : config.n_list)
        for (std::uint64_t k = 0; k < config.trials; ++k) jobs.push_back({n, k});

    const Json config_json = config_to_json(config);
    std::ofstream records, timing, graphs;
    std::filesystem::path records_path, timing_path, graphs_path, edges_dir;
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        records_path = *out_dir / "records.jsonl";
        timing_path = *out_dir / "timing.jsonl";
        records = detail::open_for_write(records_path);
        timing = detail::open_for_write(timing_path);
        records << config_json.dump() << '\n' << std::flush;
        detail::check_stream(records, records_path);
        if (config.export_graphs) {
            graphs_path = *out_dir / "graphs.g6";
            graphs = detail::open_for_write(graphs_path);
            edges_dir = *out_dir / "edges";
            std::filesystem::create_directories(edges_dir);
        }
    }

    std::vector<std::optional<TrialOutput>> done(jobs.size());
    std::mutex mu;
    std::condition_variable ready;
    std::exception_ptr failure;
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= jobs.size()) return;
            try {
                auto result = run_trial(config, jobs[k].n, jobs[k].trial);
                std::lock_guard lock(mu);
                done[k] = std::move(result);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                next = jobs.size();
            }
            ready.notify_all();
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(jobs.size())));
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(worker);

    std::vector<RunRecord> result;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        TrialOutput item;
        {
            std::unique_lock lock(mu);
            ready.wait(lock, [&] { return done[k].has_value() || failure; });
            if (!done[k]) break;
            item = std::move(*done[k]);
            done[k].reset();
        }
        if (out_dir) {
            records << record_to_json(item.record).dump() << '\n' << std::flush;
            detail::check_stream(records, records_path);
            Json t;
            t["run_id"] = item.record.run_id;
            t["runtime_seconds"] = item.record.runtime_seconds;
            timing << t.dump() << '\n' << std::flush;
            if (config.export_graphs) {
                graphs << item.graph6 << '\n' << std::flush;
                detail::check_stream(graphs, graphs_path);
                const auto p = edges_dir / (item.record.run_id + ".txt");
                auto f = detail::open_for_write(p);
                f << item.edge_log;
                detail::check_stream(f, p);
            }
        }
        result.push_back(std::move(item.record));
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
    return result;
}

// Reads records.jsonl: the config line, then run records.
struct RecordFile {
    Json config;
    std::vector<RunRecord> records;
};

inline RecordFile read_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    RecordFile rf;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        if (line.empty()) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::parse_error& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (j.value("kind", "") == "config") rf.config = std::move(j);
        else rf.records.push_back(record_from_json(j));
    }
    return rf;
}

namespace detail {

inline std::string csv_real(double x) {
    if (std::isnan(x)) return "";
    std::ostringstream o;
    o << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
    return o.str();
}

}  // namespace detail

// Writes trajectory.csv and summary.csv (plus k4_families.csv for K4 runs)
// into out_dir. Each file starts with a "# config: ..." line. The summary
// covers completed runs only.
inline std::vector<std::filesystem::path> emit_plotdata(const RecordFile& rf, const std::filesystem::path& out_dir) {
    if (rf.records.empty()) throw std::invalid_argument("emit_plotdata: no records");
    std::filesystem::create_directories(out_dir);
    const std::string header = "# config: " + rf.config.dump() + "\n";
    std::vector<std::filesystem::path> written;
    using detail::csv_real;

    const auto traj_path = out_dir / "trajectory.csv";
    {
        auto f = detail::open_for_write(traj_path);
        f << header << "n,run_id,i,t,Q,Q_pred,X_mean,X_pred,Y_mean,Y_pred,Z_max,violations\n";
        for (const auto& r : rf.records)
            for (const auto& s : r.snapshots)
                f << r.n << ',' << r.run_id << ',' << s.i << ',' << csv_real(s.t) << ',' << s.q << ','
                  << csv_real(s.q_pred) << ',' << csv_real(s.x_mean) << ',' << csv_real(s.x_pred) << ','
                  << csv_real(s.y_mean) << ',' << csv_real(s.y_pred) << ',' << s.z_max << ',' << s.violations << '\n';
        detail::check_stream(f, traj_path);
    }
    written.push_back(traj_path);

    std::vector<RunRecord> completed;
    for (const auto& r : rf.records)
        if (r.completed) completed.push_back(r);
    if (!completed.empty()) {
        const auto sum_path = out_dir / "summary.csv";
        auto f = detail::open_for_write(sum_path);
        f << header << "n,trials,mean_M_ratio,std_M_ratio,mean_alpha_ratio,mean_delta_ratio,implied_ramsey_ratio\n";
        for (const auto& row : ramsey_summary(completed))
            f << row.n << ',' << row.trials << ',' << csv_real(row.mean_m_ratio) << ',' << csv_real(row.std_m_ratio)
              << ',' << csv_real(row.mean_alpha_ratio) << ',' << csv_real(row.mean_delta_ratio) << ','
              << csv_real(row.implied_ramsey_ratio) << '\n';
        detail::check_stream(f, sum_path);
        written.push_back(sum_path);
    }

    const bool any_k4 = std::any_of(rf.records.begin(), rf.records.end(),
                                    [](const RunRecord& r) { return r.rule == ForbiddenClique::K4; });
    if (any_k4) {
        const auto fam_path = out_dir / "k4_families.csv";
        auto f = detail::open_for_write(fam_path);
        f << header << "n,run_id,i,t,family,f,mean,pred\n";
        for (const auto& r : rf.records) {
            if (r.rule != ForbiddenClique::K4) continue;
            for (const auto& s : r.snapshots) {
                for (std::size_t k = 0; k < s.x_f_mean.size(); ++k)
                    f << r.n << ',' << r.run_id << ',' << s.i << ',' << csv_real(s.t) << ",X," << k << ','
                      << csv_real(s.x_f_mean[k]) << ',' << csv_real(s.x_f_pred[k]) << '\n';
                for (std::size_t k = 0; k < s.y_f_mean.size(); ++k)
                    f << r.n << ',' << r.run_id << ',' << s.i << ',' << csv_real(s.t) << ",Y," << k << ','
                      << csv_real(s.y_f_mean[k]) << ',' << (k < s.y_f_pred.size() ? csv_real(s.y_f_pred[k]) : "")
                      << '\n';
            }
        }
        detail::check_stream(f, fam_path);
        written.push_back(fam_path);
    }
    return written;
}

}  // namespace tfp
