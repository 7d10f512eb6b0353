#pragma once

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vdb/grouped_elim.hpp"

namespace vdb {

enum class StopReason { early_stop, single_survivor, budget };

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::early_stop: return "early_stop";
        case StopReason::single_survivor: return "single_survivor";
        case StopReason::budget: return "budget";
    }
    return "?";
}

struct RoundSummary {
    int r = 0;
    double epsilon = 0.0;
    double delta = 0.0;
    int active_count = 0;
    int champion = -1;
    int runner_up = -1;
    double champion_estimate = 0.0;
    double runner_up_estimate = 0.0;
    bool early_stop = false;
    std::uint64_t samples = 0;
};

struct IdResult {
    int output_arm = -1;
    StopReason stop = StopReason::single_survivor;
    std::vector<RoundSummary> rounds;
};

// Main variance-dependent identifier. Each round estimates every active arm
// to accuracy eps_r/2, locates a champion and a runner-up champion with the
// grouped-elimination pipeline, stops early when their round estimates are
// separated by more than 2*eps_r, and otherwise discards the arms more than
// eps_r below the champion's estimate. On budget exhaustion the current
// champion is returned with the run flagged, never a silent partial answer.
inline Task<IdResult> vd_best_arm_id_task(ExecScope& scope, double delta,
                                          const AlgoProfile& profile) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("vd_best_arm_id: delta must lie in (0,1)");
    }
    const int n = scope.oracle().instance().arm_count();
    std::vector<int> active(static_cast<std::size_t>(n));
    std::iota(active.begin(), active.end(), 0);

    IdResult res;
    int champion = active[0];
    try {
        for (int r = 1;; ++r) {
            if (active.size() == 1) {
                res.output_arm = active[0];
                res.stop = StopReason::single_survivor;
                co_return res;
            }
            const double eps_r = profile.vd_epsilon(r);
            const double delta_r = profile.vd_delta(delta, r);
            const std::uint64_t round_start = scope.oracle().total();

            std::vector<double> est(active.size());
            for (std::size_t k = 0; k < active.size(); ++k) {
                est[k] = (co_await mean_est(scope, active[k], eps_r / 2.0, delta_r / 18.0,
                                            profile))
                             .value;
            }
            champion = active[static_cast<std::size_t>(detail::argmax_lowest(active, est))];

            const int a_r =
                co_await best_arm_est(scope, active, eps_r / 2.0, delta_r / 18.0, profile);
            champion = a_r;
            std::vector<int> rest;
            rest.reserve(active.size() - 1);
            for (int a : active) {
                if (a != a_r) rest.push_back(a);
            }
            const int a_star =
                co_await best_arm_est(scope, rest, eps_r / 2.0, delta_r / 18.0, profile);

            auto round_estimate = [&](int arm) {
                for (std::size_t k = 0; k < active.size(); ++k) {
                    if (active[k] == arm) return est[k];
                }
                throw std::logic_error("vd_best_arm_id: champion left the active set");
            };
            const double champ_est = round_estimate(a_r);
            const double runner_est = round_estimate(a_star);
            const bool stop_now = std::abs(champ_est - runner_est) > 2.0 * eps_r;

            res.rounds.push_back(RoundSummary{r, eps_r, delta_r,
                                              static_cast<int>(active.size()), a_r, a_star,
                                              champ_est, runner_est, stop_now,
                                              scope.oracle().total() - round_start});
            if (stop_now) {
                res.output_arm = a_r;
                res.stop = StopReason::early_stop;
                co_return res;
            }

            std::vector<int> survivors;
            const double bar = champ_est - eps_r;
            for (std::size_t k = 0; k < active.size(); ++k) {
                if (!(est[k] < bar)) survivors.push_back(active[k]);
            }
            active = std::move(survivors);
        }
    } catch (const BudgetExceeded&) {
        res.output_arm = champion;
        res.stop = StopReason::budget;
        co_return res;
    }
}

struct RunReport {
    std::string algorithm;
    std::string profile;
    std::uint64_t seed = 0;
    double delta = 0.0;
    int output_arm = -1;
    bool correct = false;
    SampleLedger ledger;
    std::vector<RoundSummary> rounds;
    StopReason stop_reason = StopReason::single_survivor;
    double wall_ms = 0.0;
};

namespace detail {

class WallTimer {
public:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline RunReport make_report(const std::string& algorithm, const SamplingOracle& oracle,
                             double delta, const AlgoProfile& profile, IdResult result,
                             double wall_ms) {
    RunReport report;
    report.algorithm = algorithm;
    report.profile = profile.name;
    report.seed = oracle.seed();
    report.delta = delta;
    report.output_arm = result.output_arm;
    report.correct = result.output_arm == oracle.instance().best_index();
    report.ledger = oracle.ledger();
    report.rounds = std::move(result.rounds);
    report.stop_reason = result.stop;
    report.wall_ms = wall_ms;
    return report;
}

}  // namespace detail

// Direct (single-resume) execution against a fresh oracle.
inline RunReport vd_best_arm_id(const BanditInstance& instance, std::uint64_t seed, double delta,
                                const AlgoProfile& profile = AlgoProfile::practical(),
                                std::uint64_t budget = kDefaultBudget) {
    detail::WallTimer timer;
    SamplingOracle oracle(instance, seed, budget);
    ExecScope scope(oracle);
    IdResult result = run_task(vd_best_arm_id_task(scope, delta, profile));
    return detail::make_report("vd", oracle, delta, profile, std::move(result),
                               timer.elapsed_ms());
}

using VdSteppableRun = SteppableRun<IdResult>;

inline std::unique_ptr<VdSteppableRun> make_vd_steppable(const BanditInstance& instance,
                                                         std::uint64_t seed, double delta,
                                                         const AlgoProfile& profile,
                                                         std::uint64_t budget = kDefaultBudget) {
    auto oracle = std::make_unique<SamplingOracle>(instance, seed, budget);
    return std::make_unique<VdSteppableRun>(
        std::move(oracle),
        [&](ExecScope& scope) { return vd_best_arm_id_task(scope, delta, profile); });
}

// Interleaved scheduler over lazily created sub-runs A_1, A_2, ... where A_i
// is the identifier at confidence delta/2^i on its own sub-seeded oracle. At
// outer round r each A_i with 2^i dividing r advances by exactly one draw, so
// after round r at most r samples have been drawn in total. The first sub-run
// to finish decides the output.
class Interleaver {
public:
    Interleaver(const BanditInstance& instance, std::uint64_t seed, double delta,
                const AlgoProfile& profile = AlgoProfile::practical(),
                std::uint64_t budget = kDefaultBudget)
        : instance_(&instance), seed_(seed), delta_(delta), profile_(&profile), budget_(budget) {
        if (!(delta > 0.0 && delta <= 0.1)) {
            throw std::invalid_argument("interleaved identifier requires delta in (0, 0.1]");
        }
    }

    bool finished() const { return finished_; }
    std::uint64_t round() const { return round_; }
    int winner_stream() const { return winner_stream_; }

    std::uint64_t total_draws() const {
        std::uint64_t t = 0;
        for (const auto& s : subs_) t += s->oracle().total();
        return t;
    }

    std::vector<std::uint64_t> sub_steps() const {
        std::vector<std::uint64_t> out;
        for (const auto& s : subs_) out.push_back(s->oracle().total());
        return out;
    }

    SampleLedger aggregate_ledger() const {
        SampleLedger ledger;
        ledger.per_arm.assign(static_cast<std::size_t>(instance_->arm_count()), 0);
        for (const auto& s : subs_) ledger += s->oracle().ledger();
        return ledger;
    }

    // Executes one outer round. Returns true once some sub-run has finished.
    // Stream i is eligible at round r iff i <= log2(r) and 2^i divides r,
    // i.e. exactly for i = 1 .. countr_zero(r).
    bool advance_round() {
        if (finished_) return true;
        ++round_;
        const int eligible = std::countr_zero(round_);
        for (int i = 1; i <= eligible; ++i) {
            auto& sub = ensure_sub(i);
            if (sub.status() == RunStatus::finished || (sub.step(), sub.status() == RunStatus::finished)) {
                finished_ = true;
                winner_stream_ = i;
                result_ = sub.result();
                return true;
            }
        }
        return false;
    }

    const IdResult& result() const {
        if (!finished_) throw std::logic_error("Interleaver: not finished");
        return result_;
    }

private:
    VdSteppableRun& ensure_sub(int i) {
        const auto idx = static_cast<std::size_t>(i - 1);
        while (subs_.size() <= idx) {
            const int stream = static_cast<int>(subs_.size()) + 1;
            const double sub_delta = delta_ / std::ldexp(1.0, stream);
            subs_.push_back(make_vd_steppable(*instance_,
                                              derive_subseed(seed_, static_cast<std::uint64_t>(stream)),
                                              sub_delta, *profile_, budget_));
        }
        return *subs_[idx];
    }

    const BanditInstance* instance_;
    std::uint64_t seed_;
    double delta_;
    const AlgoProfile* profile_;
    std::uint64_t budget_;
    std::vector<std::unique_ptr<VdSteppableRun>> subs_;
    std::uint64_t round_ = 0;
    bool finished_ = false;
    int winner_stream_ = -1;
    IdResult result_;
};

// Expected-complexity wrapper: runs the interleaver to completion.
inline RunReport vd_best_arm_id_star(const BanditInstance& instance, std::uint64_t seed,
                                     double delta,
                                     const AlgoProfile& profile = AlgoProfile::practical(),
                                     std::uint64_t budget = kDefaultBudget) {
    detail::WallTimer timer;
    Interleaver il(instance, seed, delta, profile, budget);
    while (!il.advance_round()) {
    }
    IdResult result = il.result();
    RunReport report;
    report.algorithm = "vd_star";
    report.profile = profile.name;
    report.seed = seed;
    report.delta = delta;
    report.output_arm = result.output_arm;
    report.correct = result.output_arm == instance.best_index();
    report.ledger = il.aggregate_ledger();
    report.rounds = std::move(result.rounds);
    report.stop_reason = result.stop;
    report.wall_ms = timer.elapsed_ms();
    return report;
}

}  // namespace vdb
