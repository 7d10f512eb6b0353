#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vdb/estimators.hpp"

namespace vdb {

struct NaiveRound {
    int r = 0;
    double epsilon = 0.0;
    double delta = 0.0;
    std::vector<int> active;
    std::vector<double> estimates;  // aligned with active
    std::uint64_t samples = 0;
};

namespace detail {

// Index of the largest estimate, ties broken toward the lower arm index.
inline int argmax_lowest(const std::vector<int>& arms, const std::vector<double>& est) {
    int best = 0;
    for (std::size_t k = 1; k < arms.size(); ++k) {
        if (est[k] > est[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
    }
    return best;
}

}  // namespace detail

// Iterative halving with per-arm union bounds: estimate every active arm to
// accuracy eps_r/2 at confidence delta_r/|S_r|, keep the arms within eps_r of
// the empirical leader, halve eps_r, and repeat until one arm remains. When
// max_rounds >= 0 the loop stops after that many rounds and the arm with the
// largest final-round estimate is returned.
inline Task<int> naive_elimination_loop(ExecScope& scope, std::vector<int> arms, double delta,
                                        const AlgoProfile& profile, int max_rounds,
                                        std::vector<NaiveRound>* trace) {
    if (arms.empty()) {
        throw std::invalid_argument("naive identification: empty arm set");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("naive identification: delta must lie in (0,1)");
    }
    int last_leader = arms[0];
    for (int r = 1; max_rounds < 0 || r <= max_rounds; ++r) {
        if (arms.size() == 1) co_return arms[0];
        const double eps_r = std::ldexp(1.0, -r);
        const double delta_r = delta / (2.0 * r * r);
        const std::uint64_t before = scope.oracle().total();

        std::vector<double> est(arms.size());
        for (std::size_t k = 0; k < arms.size(); ++k) {
            est[k] = (co_await mean_est(scope, arms[k], eps_r / 2.0,
                                        delta_r / static_cast<double>(arms.size()), profile))
                         .value;
        }
        const int leader = detail::argmax_lowest(arms, est);
        last_leader = arms[static_cast<std::size_t>(leader)];

        if (trace) {
            trace->push_back(NaiveRound{r, eps_r, delta_r, arms, est,
                                        scope.oracle().total() - before});
        }

        std::vector<int> survivors;
        std::vector<double> survivor_est;
        const double bar = est[static_cast<std::size_t>(leader)] - eps_r;
        for (std::size_t k = 0; k < arms.size(); ++k) {
            if (!(est[k] < bar)) {
                survivors.push_back(arms[k]);
                survivor_est.push_back(est[k]);
            }
        }
        arms = std::move(survivors);
    }
    co_return last_leader;
}

// Exact identification: loops until a single arm survives.
inline Task<int> naive_best_arm(ExecScope& scope, std::vector<int> arms, double delta,
                                const AlgoProfile& profile,
                                std::vector<NaiveRound>* trace = nullptr) {
    return naive_elimination_loop(scope, std::move(arms), delta, profile, -1, trace);
}

// PAC variant: caps the loop at ceil(log2(2/eps)) rounds, after which every
// survivor is within eps of the best, and returns the final empirical leader.
inline Task<int> naive_best_arm_est(ExecScope& scope, std::vector<int> arms, double eps,
                                    double delta, const AlgoProfile& profile,
                                    std::vector<NaiveRound>* trace = nullptr) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("naive_best_arm_est: eps must lie in (0,1)");
    }
    const int rounds = ceil_log2(2.0 / eps);
    return naive_elimination_loop(scope, std::move(arms), delta, profile, rounds, trace);
}

}  // namespace vdb
