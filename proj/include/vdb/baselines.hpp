#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vdb/estimators.hpp"
#include "vdb/grouped_elim.hpp"

namespace vdb {

// Gap-only comparison baselines. Neither looks at variance estimates: their
// sample counts are functions of empirical means and fixed schedules alone.

// Per-arm sample count of halving round l (eps_l, delta_l schedule below).
inline std::uint64_t median_elim_round_count(double eps_l, double delta_l) {
    const double half = eps_l / 2.0;
    return static_cast<std::uint64_t>(std::ceil(4.0 / (half * half) * std::log(3.0 / delta_l)));
}

// Classic halving: uniform sampling per round, drop the lower empirical half,
// schedule eps_1 = eps/4, delta_1 = delta/2, eps_{l+1} = 3/4 eps_l,
// delta_{l+1} = delta_l / 2.
inline Task<int> median_elimination(ExecScope& scope, std::vector<int> arms, double eps,
                                    double delta) {
    if (arms.empty()) {
        throw std::invalid_argument("median_elimination: empty arm set");
    }
    if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("median_elimination: eps and delta must lie in (0,1)");
    }
    double eps_l = eps / 4.0;
    double delta_l = delta / 2.0;
    while (arms.size() > 1) {
        const std::uint64_t count = median_elim_round_count(eps_l, delta_l);
        std::vector<ArmEstimate> entries;
        entries.reserve(arms.size());
        for (int arm : arms) {
            RunningMean mean;
            for (std::uint64_t k = 0; k < count; ++k) mean.add(co_await scope.draw(arm));
            entries.push_back(ArmEstimate{arm, mean.value()});
        }
        arms = median_keep(std::move(entries));
        std::sort(arms.begin(), arms.end());
        eps_l *= 0.75;
        delta_l /= 2.0;
    }
    co_return arms[0];
}

inline double successive_elim_radius(std::uint64_t t, double delta, std::size_t n) {
    const double td = static_cast<double>(t);
    return std::sqrt(std::log(4.0 * static_cast<double>(n) * td * td / delta) / (2.0 * td));
}

struct EliminationEvent {
    std::uint64_t round = 0;
    int arm = -1;
};

// Round-robin sampling with a shrinking confidence radius: arm i leaves once
// the empirical leader exceeds it by more than twice the radius.
inline Task<int> successive_elimination(ExecScope& scope, std::vector<int> arms, double delta,
                                        std::vector<EliminationEvent>* events = nullptr) {
    if (arms.empty()) {
        throw std::invalid_argument("successive_elimination: empty arm set");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("successive_elimination: delta must lie in (0,1)");
    }
    const std::size_t n = arms.size();
    std::vector<RunningMean> means(arms.size());
    for (std::uint64_t t = 1; arms.size() > 1; ++t) {
        for (std::size_t k = 0; k < arms.size(); ++k) {
            means[k].add(co_await scope.draw(arms[k]));
        }
        const double radius = successive_elim_radius(t, delta, n);
        double leader = means[0].value();
        for (const auto& m : means) leader = std::max(leader, m.value());

        std::vector<int> survivors;
        std::vector<RunningMean> survivor_means;
        for (std::size_t k = 0; k < arms.size(); ++k) {
            if (leader - means[k].value() > 2.0 * radius) {
                if (events) events->push_back(EliminationEvent{t, arms[k]});
            } else {
                survivors.push_back(arms[k]);
                survivor_means.push_back(means[k]);
            }
        }
        arms = std::move(survivors);
        means = std::move(survivor_means);
    }
    co_return arms[0];
}

}  // namespace vdb
