#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "vdb/instance_io.hpp"
#include "vdb/report.hpp"
#include "vdb/runner.hpp"

namespace vdb {

inline int default_workers() {
    if (const char* env = std::getenv("VDBENCH_WORKERS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(t) for t in [0, count) on up to `workers` threads. Each trial is
// fully isolated; an exception from any trial is rethrown after all workers
// join.
template <typename Fn>
void parallel_trials(int count, int workers, Fn&& fn) {
    if (workers <= 0) workers = default_workers();
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (int t = 0; t < count; ++t) fn(t);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int t = next.fetch_add(1);
                if (t >= count || failed.load()) return;
                try {
                    fn(t);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

struct ExperimentConfig {
    BanditInstance instance;
    std::string algorithm = "vd";
    double delta = 0.1;
    double epsilon = 0.1;  // PAC modes only
    int trials = 1;
    std::uint64_t base_seed = 1;
    const AlgoProfile* profile = &AlgoProfile::practical();
    std::uint64_t budget = kDefaultBudget;
    int workers = 0;  // 0 -> default
    std::string csv_path;
    std::string json_path;
};

struct AggregateReport {
    std::string algorithm;
    std::string profile;
    std::string instance_name;
    int n = 0;
    double delta = 0.0;
    int trials = 0;
    double success_rate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double mean_total = 0.0;
    double median_total = 0.0;
    double p95_total = 0.0;
    std::vector<double> mean_per_arm;
    double upper_proxy = 0.0;
    double lower_bound = 0.0;
    std::vector<RunReport> records;  // sorted by trial index
};

namespace detail {

inline double percentile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    if (values.empty()) return 0.0;
    const auto idx = static_cast<std::size_t>(
        std::min<double>(static_cast<double>(values.size()) - 1.0,
                         std::ceil(p * static_cast<double>(values.size())) - 1.0));
    return values[std::max<std::size_t>(idx, 0)];
}

}  // namespace detail

inline void write_csv(const AggregateReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write CSV '" + path + "'");
    }
    out << "trial,seed,algorithm,profile,n,delta,output_arm,correct,total_samples,wall_ms\n";
    for (std::size_t t = 0; t < report.records.size(); ++t) {
        const auto& r = report.records[t];
        out << t << ',' << r.seed << ',' << r.algorithm << ',' << r.profile << ',' << report.n
            << ',' << r.delta << ',' << (r.output_arm >= 0 ? r.output_arm + 1 : 0) << ','
            << (r.correct ? 1 : 0) << ',' << r.ledger.total << ',' << r.wall_ms << '\n';
    }
}

inline std::string per_arm_sibling_path(const std::string& csv_path) {
    const auto dot = csv_path.rfind(".csv");
    if (dot != std::string::npos && dot == csv_path.size() - 4) {
        return csv_path.substr(0, dot) + ".per_arm.json";
    }
    return csv_path + ".per_arm.json";
}

inline nlohmann::json to_json(const AggregateReport& report) {
    nlohmann::json doc;
    doc["algorithm"] = report.algorithm;
    doc["profile"] = report.profile;
    doc["instance"] = report.instance_name;
    doc["n"] = report.n;
    doc["delta"] = report.delta;
    doc["trials"] = report.trials;
    doc["success_rate"] = report.success_rate;
    doc["success_ci95"] = {report.ci_low, report.ci_high};
    doc["mean_total_samples"] = report.mean_total;
    doc["median_total_samples"] = report.median_total;
    doc["p95_total_samples"] = report.p95_total;
    doc["mean_per_arm_samples"] = report.mean_per_arm;
    doc["upper_proxy"] = report.upper_proxy;
    doc["lower_bound"] = report.lower_bound;
    doc["trials_detail"] = nlohmann::json::array();
    for (const auto& r : report.records) doc["trials_detail"].push_back(to_json(r));
    return doc;
}

inline AggregateReport run_experiment(const ExperimentConfig& config) {
    validate(config.instance);
    if (config.trials < 1) {
        throw std::invalid_argument("run_experiment: trials must be >= 1");
    }
    AggregateReport out;
    out.algorithm = config.algorithm;
    out.profile = config.profile->name;
    out.instance_name = config.instance.name();
    out.n = config.instance.arm_count();
    out.delta = config.delta;
    out.trials = config.trials;
    out.records.resize(static_cast<std::size_t>(config.trials));

    parallel_trials(config.trials, config.workers, [&](int t) {
        out.records[static_cast<std::size_t>(t)] = run_identifier(
            config.algorithm, config.instance, config.delta,
            config.base_seed + static_cast<std::uint64_t>(t), *config.profile, config.budget,
            config.epsilon);
    });

    int successes = 0;
    std::vector<double> totals;
    totals.reserve(out.records.size());
    out.mean_per_arm.assign(static_cast<std::size_t>(out.n), 0.0);
    for (const auto& r : out.records) {
        successes += r.correct ? 1 : 0;
        totals.push_back(static_cast<double>(r.ledger.total));
        for (std::size_t a = 0; a < r.ledger.per_arm.size(); ++a) {
            out.mean_per_arm[a] += static_cast<double>(r.ledger.per_arm[a]);
        }
    }
    const double nt = static_cast<double>(config.trials);
    out.success_rate = successes / nt;
    const double half = 1.96 * std::sqrt(out.success_rate * (1.0 - out.success_rate) / nt);
    out.ci_low = std::max(0.0, out.success_rate - half);
    out.ci_high = std::min(1.0, out.success_rate + half);
    out.mean_total = std::accumulate(totals.begin(), totals.end(), 0.0) / nt;
    out.median_total = detail::percentile(totals, 0.5);
    out.p95_total = detail::percentile(totals, 0.95);
    for (auto& v : out.mean_per_arm) v /= nt;

    const ComplexityProfile complexity = complexity_profile(config.instance);
    out.upper_proxy = complexity.upper_proxy(config.delta);
    out.lower_bound = complexity.lower_bound(config.delta);

    if (!config.csv_path.empty()) {
        write_csv(out, config.csv_path);
        nlohmann::json per_arm = nlohmann::json::array();
        for (std::size_t t = 0; t < out.records.size(); ++t) {
            per_arm.push_back({{"trial", t}, {"per_arm_samples", out.records[t].ledger.per_arm}});
        }
        std::ofstream sib(per_arm_sibling_path(config.csv_path));
        sib << per_arm.dump(2) << '\n';
    }
    if (!config.json_path.empty()) {
        std::ofstream js(config.json_path);
        js << to_json(out).dump(2) << '\n';
    }
    return out;
}

struct SweepCell {
    int n = 0;
    std::string algorithm;
    double mean_total = 0.0;
    double success_rate = 0.0;
    double growth_ratio = std::numeric_limits<double>::quiet_NaN();  // vs previous n
};

struct SweepReport {
    std::vector<int> n_list;
    std::vector<SweepCell> cells;

    double mean_total(int n, const std::string& algo) const {
        for (const auto& c : cells) {
            if (c.n == n && c.algorithm == algo) return c.mean_total;
        }
        throw std::out_of_range("sweep: no cell for n=" + std::to_string(n) + " " + algo);
    }
    double ratio(int n, const std::string& algo) const {
        for (const auto& c : cells) {
            if (c.n == n && c.algorithm == algo) return c.growth_ratio;
        }
        throw std::out_of_range("sweep: no cell for n=" + std::to_string(n) + " " + algo);
    }
};

// Scaling study on the example family with means 1 - i/n: mean sample totals
// per algorithm and the growth ratio between consecutive sizes.
inline SweepReport sweep_example1(const std::vector<int>& n_list, double delta, int trials,
                                  const AlgoProfile& profile = AlgoProfile::practical(),
                                  std::uint64_t base_seed = 1, bool with_vd = false,
                                  int workers = 0, std::uint64_t budget = kDefaultBudget) {
    SweepReport report;
    report.n_list = n_list;
    std::vector<std::string> algos = {"naive", "succ_elim"};
    if (with_vd) algos.push_back("vd");
    for (const auto& algo : algos) {
        double prev = std::numeric_limits<double>::quiet_NaN();
        for (int n : n_list) {
            ExperimentConfig config;
            config.instance = make_example1(n);
            config.algorithm = algo;
            config.delta = delta;
            config.trials = trials;
            config.base_seed = base_seed;
            config.profile = &profile;
            config.budget = budget;
            config.workers = workers;
            const AggregateReport agg = run_experiment(config);
            SweepCell cell;
            cell.n = n;
            cell.algorithm = algo;
            cell.mean_total = agg.mean_total;
            cell.success_rate = agg.success_rate;
            if (!std::isnan(prev) && prev > 0.0) cell.growth_ratio = agg.mean_total / prev;
            prev = agg.mean_total;
            report.cells.push_back(cell);
        }
    }
    return report;
}

inline void write_sweep_csv(const SweepReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write CSV '" + path + "'");
    }
    out << "n,algorithm,mean_total_samples,success_rate,growth_ratio\n";
    for (const auto& c : report.cells) {
        out << c.n << ',' << c.algorithm << ',' << c.mean_total << ',' << c.success_rate << ',';
        if (std::isnan(c.growth_ratio)) {
            out << "";
        } else {
            out << c.growth_ratio;
        }
        out << '\n';
    }
}

struct KlRow {
    int arm = 0;  // 0-based
    PerturbVariant variant;
    double kl_closed_form = 0.0;
    double kl_summed = 0.0;
};

struct LowerBoundReport {
    BanditInstance instance;
    double phi = 0.0;
    double bound = 0.0;  // (1/80) * phi * ln(1/delta)
    std::vector<std::pair<std::string, double>> mean_samples;  // per algorithm
    std::vector<std::pair<std::string, double>> success_rates;
    std::vector<KlRow> kl_rows;
};

// Closed-form divergence between a hard-instance arm and its perturbed
// variant, as used in the change-of-distribution argument.
inline double perturbed_kl_closed_form(double sigma, double gap, PerturbVariant variant) {
    switch (variant) {
        case PerturbVariant::prime_1:
        case PerturbVariant::prime_i:
            return 0.5 * std::log(1.0 / (1.0 - 4.0 * gap * gap / (sigma * sigma)));
        case PerturbVariant::doubleprime_1:
            return std::log(1.0 / (1.0 - 4.0 * gap));
        case PerturbVariant::doubleprime_i:
            return std::log(1.0 / (1.0 - 2.0 * gap));
    }
    return 0.0;
}

// Consistency study against the information-theoretic floor: empirical mean
// totals of the chosen identifiers on the hard instance, tabulated with the
// floor and with the divergences to every feasible perturbed variant.
inline LowerBoundReport lower_bound_report(const std::vector<double>& sigmas,
                                           const std::vector<double>& deltas, double delta,
                                           int trials,
                                           const std::vector<std::string>& algorithms,
                                           const AlgoProfile& profile = AlgoProfile::practical(),
                                           std::uint64_t base_seed = 1, int workers = 0,
                                           std::uint64_t budget = kDefaultBudget) {
    LowerBoundReport out;
    out.instance = make_lower_bound_instance(sigmas, deltas);
    const ComplexityProfile complexity = complexity_profile(out.instance);
    out.phi = complexity.phi;
    out.bound = complexity.lower_bound(delta);

    for (const auto& algo : algorithms) {
        ExperimentConfig config;
        config.instance = out.instance;
        config.algorithm = algo;
        config.delta = delta;
        config.trials = trials;
        config.base_seed = base_seed;
        config.profile = &profile;
        config.budget = budget;
        config.workers = workers;
        const AggregateReport agg = run_experiment(config);
        out.mean_samples.emplace_back(algo, agg.mean_total);
        out.success_rates.emplace_back(algo, agg.success_rate);
    }

    auto add_row = [&](int arm, PerturbVariant variant, double sigma, double gap) {
        const BanditInstance perturbed = make_perturbed_instance(out.instance, variant, arm);
        KlRow row;
        row.arm = arm;
        row.variant = variant;
        row.kl_summed = kl_divergence(out.instance.arm(arm), perturbed.arm(arm));
        row.kl_closed_form = perturbed_kl_closed_form(sigma, gap, variant);
        out.kl_rows.push_back(row);
    };

    // feasibility and closed forms use the caller's exact parameters
    const double gap2 = *std::min_element(deltas.begin(), deltas.end());
    if (sigmas[0] >= 5.0 * gap2) add_row(0, PerturbVariant::prime_1, sigmas[0], gap2);
    add_row(0, PerturbVariant::doubleprime_1, sigmas[0], gap2);
    for (std::size_t i = 1; i < sigmas.size(); ++i) {
        const double gap = deltas[i - 1];
        if (sigmas[i] >= 5.0 * gap) {
            add_row(static_cast<int>(i), PerturbVariant::prime_i, sigmas[i], gap);
        }
        add_row(static_cast<int>(i), PerturbVariant::doubleprime_i, sigmas[i], gap);
    }
    return out;
}

inline nlohmann::json to_json(const LowerBoundReport& report, double delta) {
    nlohmann::json doc;
    doc["instance"] = instance_to_json(report.instance);
    doc["phi"] = report.phi;
    doc["delta"] = delta;
    doc["lower_bound"] = report.bound;
    doc["mean_samples"] = nlohmann::json::object();
    for (const auto& [algo, mean] : report.mean_samples) doc["mean_samples"][algo] = mean;
    doc["success_rates"] = nlohmann::json::object();
    for (const auto& [algo, rate] : report.success_rates) doc["success_rates"][algo] = rate;
    doc["kl"] = nlohmann::json::array();
    for (const auto& row : report.kl_rows) {
        doc["kl"].push_back({{"arm", row.arm + 1},
                             {"variant", to_string(row.variant)},
                             {"closed_form", row.kl_closed_form},
                             {"summed", row.kl_summed}});
    }
    return doc;
}

}  // namespace vdb
