#include "catch_amalgamated.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tfp/config.hpp"
#include "tfp/experiment.hpp"

using namespace tfp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("tfp_harness_" + name);
    fs::remove_all(p);
    return p;
}

std::vector<std::string> data_lines(const fs::path& csv) {
    std::ifstream in(csv);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#') out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("config parsing") {
    const auto c = parse_config_string(
        "# comment\n"
        "process = K4\n"
        "n_list = [100, 200,300]\n"
        "trials=7\n"
        "base_seed=0x10\n"
        "mu = 1/16   # fraction\n"
        "stop = time:0.25\n"
        "k4_poly = 1,2,3,4,5,6\n"
        "snapshot_stride = 17\n");
    CHECK(c.process == ForbiddenClique::K4);
    CHECK(c.n_list == std::vector<Vertex>{100, 200, 300});
    CHECK(c.trials == 7);
    CHECK(c.base_seed == 16);
    CHECK(c.mu == 1.0 / 16.0);
    CHECK(c.stop.kind == StopKind::Time);
    CHECK(c.stop.value == 0.25);
    CHECK(c.k4_poly[5] == 6.0);
    CHECK(resolved_stride(c, 100) == 17);
    CHECK(c.beta == 0.5);
    CHECK(c.gamma == 161.0);
    CHECK(c.rho == 1.0 / 32.0);

    CHECK_THROWS_AS(parse_config_string("bogus=1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_string("trials\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_string("n_list=[1,2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_string("mu=abc\n"), ConfigError);

    auto o = parse_config_string("n_list=10\ntrials=2\n");
    set_config_key(o, "trials", "5");
    CHECK(o.trials == 5);
}

TEST_CASE("config validation and resolved values") {
    auto c = parse_config_string("n_list=[3000]\nledger=full\n");
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.ledger = LedgerChoice::Sampled;
    CHECK_NOTHROW(validate(c));
    CHECK_THROWS_AS(validate(parse_config_string("trials=3\n")), ConfigError);
    CHECK_THROWS_AS(validate(parse_config_string("n_list=5\ntrials=0\n")), ConfigError);
    CHECK_THROWS_AS(validate(parse_config_string("n_list=5\nbeta=-1\n")), ConfigError);

    const auto k3 = parse_config_string("n_list=1000\nstop=paper\n");
    CHECK(resolved_stride(k3, 1000) == 316);
    CHECK(resolved_stride(k3, 3) == 1);
    CHECK(*resolved_step_cap(k3, 1000) ==
          static_cast<std::uint64_t>(std::floor(std::sqrt(std::log(1000.0)) * std::pow(1000.0, 1.5) / 32)));
    const auto k4 = parse_config_string("process=K4\nn_list=400\nstop=paper\n");
    CHECK(resolved_stride(k4, 400) == static_cast<std::uint64_t>(std::llround(std::pow(400.0, 1.6) / 100)));
    CHECK(*resolved_step_cap(k4, 400) ==
          static_cast<std::uint64_t>(std::floor(std::pow(400.0, 1.6) * std::pow(std::log(400.0), 0.2) / 32)));
    CHECK_FALSE(resolved_step_cap(parse_config_string("n_list=5\n"), 5).has_value());
}

TEST_CASE("n=3 trials all stop at two edges") {
    auto c = parse_config_string("n_list=[3]\ntrials=100\n");
    const auto records = run_experiment(c);
    REQUIRE(records.size() == 100);
    for (const auto& r : records) {
        CHECK(r.completed);
        CHECK(r.edges_final == std::optional<std::uint64_t>(2));
        CHECK(r.alpha_exact == std::optional<std::uint64_t>(2));
        CHECK(r.max_degree <= *r.alpha_exact);
        REQUIRE(r.snapshots.size() == 3);
        for (std::size_t k = 0; k < 3; ++k) CHECK(r.snapshots[k].i == k);
    }
}

TEST_CASE("records, plot data and determinism") {
    const auto dir_a = scratch("a"), dir_b = scratch("b"), dir_c = scratch("c");
    auto c = parse_config_string("n_list=[3,40,70]\ntrials=4\nbase_seed=99\nexport_graphs=true\n");
    const auto ra = run_experiment(c, dir_a);
    c.workers = 3;
    run_experiment(c, dir_b);
    CHECK(slurp(dir_a / "records.jsonl") == slurp(dir_b / "records.jsonl"));
    CHECK(slurp(dir_a / "graphs.g6") == slurp(dir_b / "graphs.g6"));
    c.base_seed = 100;
    run_experiment(c, dir_c);
    CHECK(slurp(dir_a / "records.jsonl") != slurp(dir_c / "records.jsonl"));

    const auto rf = read_records(dir_a / "records.jsonl");
    CHECK(rf.config.at("base_seed") == 99);
    CHECK(rf.config.at("constants").at("gamma") == 161.0);
    REQUIRE(rf.records.size() == 12);
    for (std::size_t k = 0; k < ra.size(); ++k) {
        CHECK(record_to_json(rf.records[k]).dump() == record_to_json(ra[k]).dump());
        CHECK(rf.records[k].run_id == run_id_for(ForbiddenClique::K3, c.n_list[k / 4], k % 4));
    }

    // snapshot fields
    for (const auto& r : ra) {
        for (std::size_t k = 1; k < r.snapshots.size(); ++k) CHECK(r.snapshots[k - 1].i < r.snapshots[k].i);
        for (const auto& s : r.snapshots) {
            CHECK(s.t == static_cast<double>(s.i) / std::pow(static_cast<double>(r.n), 1.5));
            CHECK(s.q_pred == k3_eval(s.t).q * r.n * r.n);
        }
        CHECK(r.snapshots.front().violations == 0);
        CHECK(r.degree_certified);
    }

    // graph exports agree with the edge logs
    std::ifstream g6(dir_a / "graphs.g6");
    for (const auto& r : ra) {
        std::string line;
        REQUIRE(std::getline(g6, line));
        std::ifstream log_in(dir_a / "edges" / (r.run_id + ".txt"));
        const auto log = read_edge_log(log_in);
        BitGraph g(log.n);
        for (const auto& e : log.edges) g.add_edge(e.u, e.v);
        CHECK(from_graph6(line) == g);
        CHECK(log.edges.size() == *r.edges_final);
        CHECK(log.seed == r.seed);
    }

    const auto files = emit_plotdata(rf, dir_a / "csv");
    CHECK(files.size() == 2);
    const auto traj = data_lines(dir_a / "csv" / "trajectory.csv");
    std::size_t snapshots = 0;
    for (const auto& r : ra) snapshots += r.snapshots.size();
    CHECK(traj.size() == snapshots + 1);
    CHECK(traj[0] == "n,run_id,i,t,Q,Q_pred,X_mean,X_pred,Y_mean,Y_pred,Z_max,violations");
    const auto summary = data_lines(dir_a / "csv" / "summary.csv");
    REQUIRE(summary.size() == 4);
    CHECK(summary[0] == "n,trials,mean_M_ratio,std_M_ratio,mean_alpha_ratio,mean_delta_ratio,implied_ramsey_ratio");
    CHECK(summary[1].rfind("3,4,", 0) == 0);
    std::ifstream head(dir_a / "csv" / "summary.csv");
    std::string first;
    std::getline(head, first);
    CHECK(first.rfind("# config: {", 0) == 0);

    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    fs::remove_all(dir_c);
}

TEST_CASE("sampled and full ledgers give the same Q trajectory") {
    auto c = parse_config_string("n_list=[50]\ntrials=2\nbase_seed=5\nwitness_pairs=1225\n");
    const auto sampled = run_experiment(c);
    c.ledger = LedgerChoice::Full;
    const auto full = run_experiment(c);
    for (std::size_t k = 0; k < sampled.size(); ++k) {
        REQUIRE(sampled[k].snapshots.size() == full[k].snapshots.size());
        for (std::size_t j = 0; j < sampled[k].snapshots.size(); ++j) {
            const auto& a = sampled[k].snapshots[j];
            const auto& b = full[k].snapshots[j];
            CHECK(a.q == b.q);
            CHECK(a.tracked == b.tracked);
            if (a.tracked > 0) {
                CHECK(a.x_mean == Catch::Approx(b.x_mean));
                CHECK(a.y_mean == Catch::Approx(b.y_mean));
                CHECK(a.z_max == b.z_max);
            }
        }
    }
}

TEST_CASE("step caps and K4 runs") {
    auto c = parse_config_string("process=K4\nn_list=[30]\ntrials=2\nstop=steps:50\n");
    const auto recs = run_experiment(c);
    for (const auto& r : recs) {
        CHECK(r.steps == 50);
        CHECK_FALSE(r.completed);
        CHECK_FALSE(r.edges_final.has_value());
        CHECK(r.snapshots.back().i == 50);
        CHECK(r.snapshots.front().x_f_mean.size() == 5);
        CHECK(r.snapshots.front().y_f_mean.size() == 4);
        CHECK(r.snapshots.front().x_f_mean[0] == 28.0 * 27.0 / 2.0);
        CHECK(r.snapshots.front().y_f_mean[0] == 27.0);
        CHECK(r.snapshots.back().t == 50.0 / std::pow(30.0, 1.6));
    }
}
