#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tfp/concentration.hpp"
#include "tfp/config.hpp"
#include "tfp/experiment.hpp"
#include "tfp/verify.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::optional<std::uint64_t>& seed, const std::optional<unsigned>& workers,
            const std::string& out) {
    auto config = tfp::load_config(config_path);
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw tfp::ConfigError("--set expects key=value, got '" + kv + "'");
        tfp::set_config_key(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) config.base_seed = *seed;
    if (workers) config.workers = *workers;
    const auto records = tfp::run_experiment(config, std::filesystem::path(out));
    std::uint64_t completed = 0;
    for (const auto& r : records) completed += r.completed;
    std::cout << "wrote " << records.size() << " records (" << completed << " completed) to "
              << (std::filesystem::path(out) / "records.jsonl").string() << '\n';
    return 0;
}

int cmd_plot_data(const std::string& records_dir, const std::string& out) {
    const auto rf = tfp::read_records(std::filesystem::path(records_dir) / "records.jsonl");
    for (const auto& p : tfp::emit_plotdata(rf, out.empty() ? records_dir : out)) std::cout << p.string() << '\n';
    return 0;
}

int cmd_verify(const std::vector<tfp::Vertex>& ns, std::uint64_t runs, std::uint64_t seed) {
    const auto o = tfp::oracle_equivalence_suite(ns, runs, seed);
    std::printf("oracle equivalence: %llu runs, %llu steps, %llu pair checks, %llu ledger mismatches, "
                "%llu status mismatches, %llu step-identity failures\n",
                (unsigned long long)o.runs, (unsigned long long)o.steps, (unsigned long long)o.pair_checks,
                (unsigned long long)o.ledger_mismatches, (unsigned long long)o.status_mismatches,
                (unsigned long long)o.q_identity_failures);
    const auto r = tfp::ode_residual_suite();
    std::printf("ode residuals on %d points in [0.01, 3]: K3 max %.3e, K4 max %.3e\n", r.grid_points, r.k3_max,
                r.k4_max);
    const bool ok = o.ledger_mismatches == 0 && o.status_mismatches == 0 && o.q_identity_failures == 0 &&
                    r.k3_max < 1e-10 && r.k4_max < 1e-10;
    std::puts(ok ? "verify: PASS" : "verify: FAIL");
    return ok ? 0 : 1;
}

void print_bound(const char* side, const tfp::MartingaleSpec& s,
                 tfp::TailBound (*fn)(const tfp::MartingaleSpec&)) {
    try {
        const auto b = fn(s);
        std::printf("%s: lemma %.6g  proof %.6g  hoeffding %.6g\n", side, b.lemma, b.proof, b.hoeffding);
    } catch (const std::invalid_argument& e) {
        std::printf("%s: not applicable (%s)\n", side, e.what());
    }
}

int cmd_bounds(double eta, double big_n, double m, double a) {
    const tfp::MartingaleSpec s{eta, big_n, m, a};
    tfp::validate(s);
    std::printf("eta=%g N=%g m=%g a=%g\n", eta, big_n, m, a);
    print_bound("submartingale Pr[A_m <= -a]", s, &tfp::submartingale_tail);
    print_bound("supermartingale Pr[A_m >= a]", s, &tfp::supermartingale_tail);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random H-free graph process experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    auto* run = app.add_subcommand("run", "Run an experiment from a config file");
    run->add_option("config", config_path, "key=value config file")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "Override base_seed");
    run->add_option("--workers", workers, "Override worker count");
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();
    run->add_option("--set", overrides, "Override a config key (key=value), repeatable");

    std::string records_dir, plot_out;
    auto* plot = app.add_subcommand("plot-data", "Turn a records directory into CSV files");
    plot->add_option("records", records_dir, "Directory holding records.jsonl")->required()->check(CLI::ExistingDirectory);
    plot->add_option("--out", plot_out, "CSV directory (default: the records directory)");

    std::vector<tfp::Vertex> verify_ns{8, 16, 32, 40};
    std::uint64_t verify_runs = 50, verify_seed = 20240601;
    auto* verify = app.add_subcommand("verify", "Oracle-equivalence and ODE residual suites");
    verify->add_option("--n", verify_ns, "Vertex counts")->capture_default_str();
    verify->add_option("--runs", verify_runs, "Runs per n")->capture_default_str();
    verify->add_option("--seed", verify_seed, "Base seed")->capture_default_str();

    double eta = 0, big_n = 0, m = 0, a = 0;
    auto* bounds = app.add_subcommand("bounds", "Evaluate the (eta, N)-bounded martingale tail bounds");
    bounds->add_option("--eta", eta)->required();
    bounds->add_option("--N", big_n)->required();
    bounds->add_option("--m", m)->required();
    bounds->add_option("--a", a)->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return cmd_run(config_path, overrides, seed, workers, out_dir);
        if (*plot) return cmd_plot_data(records_dir, plot_out);
        if (*verify) return cmd_verify(verify_ns, verify_runs, verify_seed);
        if (*bounds) return cmd_bounds(eta, big_n, m, a);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
