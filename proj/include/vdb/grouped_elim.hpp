#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "vdb/estimators.hpp"
#include "vdb/naive_id.hpp"

namespace vdb {

// Bucket j holds arms with estimated variance in (2^-j, 2^-(j-1)]; the upper
// boundary is inclusive. Estimates at or below 2^-N violate the bucketing
// contract (the variance estimator never produces them for ell = eps).
inline int bucket_assign(double sigma_hat_sq, int bucket_count) {
    if (!(sigma_hat_sq > std::ldexp(1.0, -bucket_count)) || sigma_hat_sq > 1.0) {
        throw std::logic_error("bucket_assign: estimate outside (2^-N, 1]");
    }
    for (int j = 1; j <= bucket_count; ++j) {
        if (sigma_hat_sq > std::ldexp(1.0, -j)) return j;
    }
    throw std::logic_error("bucket_assign: unreachable");
}

struct ArmEstimate {
    int arm = 0;
    double estimate = 0.0;
};

// Keeps the ceil(k/2) entries with the largest estimates, ties toward the
// lower arm index. This is the half at or above the empirical median, and it
// never exceeds two thirds of the input.
inline std::vector<int> median_keep(std::vector<ArmEstimate> entries) {
    if (entries.size() < 2) {
        throw std::invalid_argument("median_keep: needs at least 2 entries");
    }
    std::sort(entries.begin(), entries.end(), [](const ArmEstimate& a, const ArmEstimate& b) {
        if (a.estimate != b.estimate) return a.estimate > b.estimate;
        return a.arm < b.arm;
    });
    const std::size_t keep = (entries.size() + 1) / 2;
    std::vector<int> out;
    out.reserve(keep);
    for (std::size_t k = 0; k < keep; ++k) out.push_back(entries[k].arm);
    return out;
}

struct BucketAudit {
    int j = 0;
    double lower = 0.0;
    double upper = 0.0;
    std::vector<int> members;
    std::vector<double> sigma_hats;   // aligned with members
    std::vector<double> theta_hats;   // empty for singleton buckets
    std::vector<int> kept;
    int recycled = -1;                // arm id, or -1
    double median_estimate = 0.0;     // smallest kept estimate
};

struct ElimOutcome {
    std::vector<int> kept;
    std::vector<int> recycled;
    std::vector<int> eliminated;
    int bucket_count = 0;
    std::vector<BucketAudit> buckets;  // non-empty buckets only
    std::uint64_t variance_draws = 0;
    std::uint64_t mean_draws = 0;
};

// One round of grouped median elimination: estimate every arm's variance,
// partition the arms into dyadic variance buckets, and within each bucket of
// size >= 2 drop the arms below the bucket's empirical median mean. Singleton
// buckets go to the recycle bin untouched.
inline Task<ElimOutcome> group_elim(ExecScope& scope, std::vector<int> arms, double eps,
                                    double delta, const AlgoProfile& profile) {
    if (arms.empty()) {
        throw std::invalid_argument("group_elim: empty arm set");
    }
    if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("group_elim: eps and delta must lie in (0,1)");
    }
    ElimOutcome out;
    out.bucket_count = ceil_log2(2.0 / eps);

    std::uint64_t phase_start = scope.oracle().total();
    std::vector<double> sigma_hat(arms.size());
    for (std::size_t k = 0; k < arms.size(); ++k) {
        sigma_hat[k] = co_await var_est(
            scope, arms[k], profile.group_var_confidence(delta, out.bucket_count), eps, profile);
    }
    out.variance_draws = scope.oracle().total() - phase_start;

    std::vector<std::vector<std::size_t>> buckets(static_cast<std::size_t>(out.bucket_count) + 1);
    for (std::size_t k = 0; k < arms.size(); ++k) {
        buckets[static_cast<std::size_t>(bucket_assign(sigma_hat[k], out.bucket_count))].push_back(k);
    }

    phase_start = scope.oracle().total();
    for (int j = 1; j <= out.bucket_count; ++j) {
        const auto& members = buckets[static_cast<std::size_t>(j)];
        if (members.empty()) continue;

        BucketAudit audit;
        audit.j = j;
        audit.lower = std::ldexp(1.0, -j);
        audit.upper = std::ldexp(1.0, -j + 1);
        for (std::size_t k : members) {
            audit.members.push_back(arms[k]);
            audit.sigma_hats.push_back(sigma_hat[k]);
        }

        if (members.size() >= 2) {
            std::vector<ArmEstimate> entries;
            entries.reserve(members.size());
            for (std::size_t k : members) {
                const auto est = co_await mean_est(
                    scope, arms[k], eps / 2.0,
                    profile.group_mean_confidence(delta, out.bucket_count), profile);
                entries.push_back(ArmEstimate{arms[k], est.value});
                audit.theta_hats.push_back(est.value);
            }
            audit.kept = median_keep(entries);
            double median = std::numeric_limits<double>::infinity();
            for (const auto& e : entries) {
                if (std::find(audit.kept.begin(), audit.kept.end(), e.arm) != audit.kept.end()) {
                    median = std::min(median, e.estimate);
                }
            }
            audit.median_estimate = median;
            out.kept.insert(out.kept.end(), audit.kept.begin(), audit.kept.end());
        } else {
            audit.recycled = arms[members[0]];
            out.recycled.push_back(arms[members[0]]);
        }
        out.buckets.push_back(std::move(audit));
    }
    out.mean_draws = scope.oracle().total() - phase_start;

    for (std::size_t k = 0; k < arms.size(); ++k) {
        const int a = arms[k];
        const bool in_kept = std::find(out.kept.begin(), out.kept.end(), a) != out.kept.end();
        const bool in_rec = std::find(out.recycled.begin(), out.recycled.end(), a) != out.recycled.end();
        if (!in_kept && !in_rec) out.eliminated.push_back(a);
    }
    co_return out;
}

struct IterElimRound {
    int r = 0;
    double epsilon = 0.0;
    double delta = 0.0;
    ElimOutcome outcome;
};

// Repeats grouped elimination on a decaying accuracy/confidence schedule
// while more than `iter_elim_stop` arms remain active, then returns the
// active arms together with everything recycled along the way.
inline Task<std::vector<int>> iter_elim(ExecScope& scope, std::vector<int> arms, double eps,
                                        double delta, const AlgoProfile& profile,
                                        std::vector<IterElimRound>* trace = nullptr) {
    if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("iter_elim: eps and delta must lie in (0,1)");
    }
    std::vector<int> active = std::move(arms);
    std::vector<int> recycled;
    for (int r = 0; static_cast<int>(active.size()) > profile.iter_elim_stop; ++r) {
        const double eps_r = profile.iter_epsilon(eps, r);
        const double delta_r = profile.iter_delta(delta, r);
        ElimOutcome outcome = co_await group_elim(scope, active, eps_r, delta_r, profile);
        active = outcome.kept;
        std::sort(active.begin(), active.end());
        recycled.insert(recycled.end(), outcome.recycled.begin(), outcome.recycled.end());
        if (trace) trace->push_back(IterElimRound{r, eps_r, delta_r, std::move(outcome)});
    }
    active.insert(active.end(), recycled.begin(), recycled.end());
    std::sort(active.begin(), active.end());
    co_return active;
}

// Returns an arm within eps of the best of S: two rounds of iterative
// elimination (the second skipped when eps^-1 <= ln|S|) followed by the
// capped naive search on the small survivor set.
inline Task<int> best_arm_est(ExecScope& scope, std::vector<int> arms, double eps, double delta,
                              const AlgoProfile& profile) {
    if (arms.empty()) {
        throw std::invalid_argument("best_arm_est: empty arm set");
    }
    if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("best_arm_est: eps and delta must lie in (0,1)");
    }
    const double n0 = static_cast<double>(arms.size());
    std::vector<int> stage1 =
        co_await iter_elim(scope, std::move(arms), eps / 3.0, delta / 3.0, profile);
    std::vector<int> stage2;
    if (1.0 / eps <= std::log(n0)) {
        stage2 = std::move(stage1);
    } else {
        stage2 = co_await iter_elim(scope, std::move(stage1), eps / 3.0, delta / 3.0, profile);
    }
    co_return co_await naive_best_arm_est(scope, std::move(stage2), eps / 3.0, delta / 3.0,
                                          profile);
}

}  // namespace vdb
