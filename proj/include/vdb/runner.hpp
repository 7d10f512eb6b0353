#pragma once

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "vdb/baselines.hpp"
#include "vdb/vd_id.hpp"

namespace vdb {

inline const std::vector<std::string>& identifier_names() {
    static const std::vector<std::string> names = {"vd", "vd_star", "naive", "median_elim",
                                                   "succ_elim"};
    return names;
}

// Uniform dispatch for the experiment harness. `epsilon` is consumed only by
// the PAC baseline median_elim.
inline RunReport run_identifier(const std::string& name, const BanditInstance& instance,
                                double delta, std::uint64_t seed,
                                const AlgoProfile& profile = AlgoProfile::practical(),
                                std::uint64_t budget = kDefaultBudget, double epsilon = 0.1) {
    if (name == "vd") {
        return vd_best_arm_id(instance, seed, delta, profile, budget);
    }
    if (name == "vd_star") {
        return vd_best_arm_id_star(instance, seed, delta, profile, budget);
    }

    detail::WallTimer timer;
    SamplingOracle oracle(instance, seed, budget);
    ExecScope scope(oracle);
    std::vector<int> arms(static_cast<std::size_t>(instance.arm_count()));
    std::iota(arms.begin(), arms.end(), 0);

    RunReport report;
    report.algorithm = name;
    report.profile = profile.name;
    report.seed = seed;
    report.delta = delta;
    try {
        std::vector<NaiveRound> naive_trace;
        if (name == "naive") {
            report.output_arm = run_task(naive_best_arm(scope, arms, delta, profile, &naive_trace));
            for (const auto& round : naive_trace) {
                RoundSummary summary;
                summary.r = round.r;
                summary.epsilon = round.epsilon;
                summary.delta = round.delta;
                summary.active_count = static_cast<int>(round.active.size());
                summary.champion =
                    round.active[static_cast<std::size_t>(detail::argmax_lowest(round.active, round.estimates))];
                summary.samples = round.samples;
                report.rounds.push_back(summary);
            }
        } else if (name == "median_elim") {
            report.output_arm = run_task(median_elimination(scope, arms, epsilon, delta));
        } else if (name == "succ_elim") {
            report.output_arm = run_task(successive_elimination(scope, arms, delta));
        } else {
            throw std::invalid_argument("run_identifier: unknown algorithm '" + name + "'");
        }
        report.stop_reason = StopReason::single_survivor;
    } catch (const BudgetExceeded&) {
        report.output_arm = -1;
        report.stop_reason = StopReason::budget;
    }
    report.correct = report.output_arm == instance.best_index();
    report.ledger = oracle.ledger();
    report.wall_ms = timer.elapsed_ms();
    return report;
}

}  // namespace vdb
