// Benchmark driver for the variance-dependent best-arm identification
// library: seeded Monte Carlo runs, scaling sweeps, and lower-bound
// consistency tables.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vdb/bench.hpp"

namespace {

std::uint64_t parse_seed(const std::string& text) {
    // Accepts decimal or 0x-prefixed hex.
    return std::stoull(text, nullptr, 0);
}

std::vector<double> parse_reals(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

std::vector<int> parse_ints(const std::string& csv) {
    std::vector<int> out;
    for (double v : parse_reals(csv)) out.push_back(static_cast<int>(v));
    return out;
}

struct InstanceOpts {
    std::string file;
    int example1_n = 0;
    std::string lb_sigmas;
    std::string lb_deltas;
};

vdb::BanditInstance resolve_instance(const InstanceOpts& opts) {
    const int sources = (!opts.file.empty() ? 1 : 0) + (opts.example1_n > 0 ? 1 : 0) +
                        (!opts.lb_sigmas.empty() ? 1 : 0);
    if (sources != 1) {
        throw std::invalid_argument(
            "specify exactly one of --instance, --example1, --lb-sigmas/--lb-deltas");
    }
    if (!opts.file.empty()) return vdb::load_instance(opts.file);
    if (opts.example1_n > 0) return vdb::make_example1(opts.example1_n);
    return vdb::make_lower_bound_instance(parse_reals(opts.lb_sigmas),
                                          parse_reals(opts.lb_deltas));
}

void print_aggregate(const vdb::AggregateReport& agg) {
    std::printf("instance        %s (n=%d)\n", agg.instance_name.c_str(), agg.n);
    std::printf("algorithm       %s [%s], delta=%g, trials=%d\n", agg.algorithm.c_str(),
                agg.profile.c_str(), agg.delta, agg.trials);
    std::printf("success rate    %.4f  (95%% CI %.4f..%.4f)\n", agg.success_rate, agg.ci_low,
                agg.ci_high);
    std::printf("total samples   mean %.1f, median %.0f, p95 %.0f\n", agg.mean_total,
                agg.median_total, agg.p95_total);
    std::printf("hardness        upper proxy %.1f, lower bound %.1f\n", agg.upper_proxy,
                agg.lower_bound);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"variance-dependent best-arm identification benchmark"};
    app.require_subcommand(1);

    // ---- run ----
    auto* run = app.add_subcommand("run", "run one algorithm for many seeded trials");
    InstanceOpts run_inst;
    std::string run_algo = "vd";
    double run_delta = 0.1;
    double run_epsilon = 0.1;
    int run_trials = 100;
    std::string run_seed = "1";
    std::string run_profile = "practical";
    std::uint64_t run_budget = vdb::kDefaultBudget;
    int run_workers = 0;
    std::string run_csv, run_json;
    run->add_option("--instance", run_inst.file, "instance JSON file");
    run->add_option("--example1", run_inst.example1_n, "generator: n arms with means 1-i/n");
    run->add_option("--lb-sigmas", run_inst.lb_sigmas, "generator: hard-instance sigmas (csv)");
    run->add_option("--lb-deltas", run_inst.lb_deltas, "generator: hard-instance gaps (csv)");
    run->add_option("--algo", run_algo, "vd | vd_star | naive | median_elim | succ_elim")
        ->check(CLI::IsMember(vdb::identifier_names()));
    run->add_option("--delta", run_delta, "confidence level");
    run->add_option("--epsilon", run_epsilon, "accuracy (PAC baseline only)");
    run->add_option("--trials", run_trials, "number of trials")->check(CLI::PositiveNumber);
    run->add_option("--seed", run_seed, "base seed (decimal or 0x hex); trial t uses seed+t");
    run->add_option("--profile", run_profile, "paper | practical");
    run->add_option("--budget", run_budget, "per-trial draw budget");
    run->add_option("--workers", run_workers, "parallel trial workers (default: env/cores)");
    run->add_option("--csv", run_csv, "write per-trial CSV here (+ per-arm sibling JSON)");
    run->add_option("--json", run_json, "write aggregate JSON here");

    // ---- sweep-example1 ----
    auto* sweep = app.add_subcommand("sweep-example1", "scaling sweep on the 1-i/n family");
    std::string sweep_ns = "8,16,32";
    double sweep_delta = 0.1;
    int sweep_trials = 50;
    std::string sweep_seed = "1";
    std::string sweep_profile = "practical";
    int sweep_workers = 0;
    bool sweep_with_vd = false;
    std::string sweep_csv;
    sweep->add_option("--n-list", sweep_ns, "comma-separated arm counts");
    sweep->add_option("--delta", sweep_delta, "confidence level");
    sweep->add_option("--trials", sweep_trials, "trials per cell")->check(CLI::PositiveNumber);
    sweep->add_option("--seed", sweep_seed, "base seed");
    sweep->add_option("--profile", sweep_profile, "paper | practical");
    sweep->add_option("--workers", sweep_workers, "parallel trial workers");
    sweep->add_flag("--with-vd", sweep_with_vd,
                    "also sweep the variance-dependent identifier (slow for large n)");
    sweep->add_option("--csv", sweep_csv, "write sweep table CSV here");

    // ---- lower-bound ----
    auto* lb = app.add_subcommand("lower-bound", "consistency table against the sample floor");
    std::string lb_sigmas = "0.25,0.25,0.25";
    std::string lb_deltas = "0.05,0.08";
    double lb_delta = 0.1;
    int lb_trials = 10;
    std::string lb_algos = "vd,vd_star,naive,succ_elim";
    std::string lb_seed = "1";
    std::string lb_profile = "practical";
    int lb_workers = 0;
    std::string lb_json;
    lb->add_option("--sigmas", lb_sigmas, "per-arm sigmas (csv, sigma^2 < 0.1)");
    lb->add_option("--deltas", lb_deltas, "gaps for arms 2..n (csv, in (0, 0.1))");
    lb->add_option("--delta", lb_delta, "confidence level");
    lb->add_option("--trials", lb_trials, "trials per algorithm")->check(CLI::PositiveNumber);
    lb->add_option("--algos", lb_algos, "comma-separated identifiers to measure");
    lb->add_option("--seed", lb_seed, "base seed");
    lb->add_option("--profile", lb_profile, "paper | practical");
    lb->add_option("--workers", lb_workers, "parallel trial workers");
    lb->add_option("--json", lb_json, "write report JSON here");

    // ---- validate-instance ----
    auto* vi = app.add_subcommand("validate-instance", "check an instance file");
    std::string vi_file;
    vi->add_option("file", vi_file, "instance JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            vdb::ExperimentConfig config;
            config.instance = resolve_instance(run_inst);
            config.algorithm = run_algo;
            config.delta = run_delta;
            config.epsilon = run_epsilon;
            config.trials = run_trials;
            config.base_seed = parse_seed(run_seed);
            config.profile = &vdb::AlgoProfile::by_name(run_profile);
            config.budget = run_budget;
            config.workers = run_workers;
            config.csv_path = run_csv;
            config.json_path = run_json;
            print_aggregate(vdb::run_experiment(config));
        } else if (sweep->parsed()) {
            const auto report = vdb::sweep_example1(
                parse_ints(sweep_ns), sweep_delta, sweep_trials,
                vdb::AlgoProfile::by_name(sweep_profile), parse_seed(sweep_seed), sweep_with_vd,
                sweep_workers);
            std::printf("%6s %-12s %16s %14s %8s\n", "n", "algorithm", "mean_samples", "success",
                        "ratio");
            for (const auto& cell : report.cells) {
                std::printf("%6d %-12s %16.1f %14.3f", cell.n, cell.algorithm.c_str(),
                            cell.mean_total, cell.success_rate);
                if (std::isnan(cell.growth_ratio)) {
                    std::printf(" %8s\n", "-");
                } else {
                    std::printf(" %8.3f\n", cell.growth_ratio);
                }
            }
            if (!sweep_csv.empty()) vdb::write_sweep_csv(report, sweep_csv);
        } else if (lb->parsed()) {
            std::vector<std::string> algos;
            std::stringstream ss(lb_algos);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (!item.empty()) algos.push_back(item);
            }
            const auto report = vdb::lower_bound_report(
                parse_reals(lb_sigmas), parse_reals(lb_deltas), lb_delta, lb_trials, algos,
                vdb::AlgoProfile::by_name(lb_profile), parse_seed(lb_seed), lb_workers);
            std::printf("phi = %.6f, lower bound = %.3f samples (delta=%g)\n", report.phi,
                        report.bound, lb_delta);
            for (const auto& [algo, mean] : report.mean_samples) {
                std::printf("%-12s mean samples %14.1f  (>= bound: %s)\n", algo.c_str(), mean,
                            mean >= report.bound ? "yes" : "NO");
            }
            std::printf("divergences to perturbed variants:\n");
            for (const auto& row : report.kl_rows) {
                std::printf("  arm %d %-14s closed %.9f summed %.9f\n", row.arm + 1,
                            vdb::to_string(row.variant), row.kl_closed_form, row.kl_summed);
            }
            if (!lb_json.empty()) {
                std::ofstream out(lb_json);
                out << vdb::to_json(report, lb_delta).dump(2) << '\n';
            }
        } else if (vi->parsed()) {
            const auto inst = vdb::load_instance(vi_file);
            std::printf("ok: %s, n=%d, best arm %d (mean %.6f), runner-up gap %.6f\n",
                        inst.name().c_str(), inst.arm_count(), inst.best_index() + 1,
                        inst.mean(inst.best_index()), inst.second_gap());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
