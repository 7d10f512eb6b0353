#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vdb {

// Finite-support reward distribution on [0, 1] with exact moments.
class RewardDistribution {
public:
    struct Atom {
        double value;
        double prob;
    };

    RewardDistribution() = default;

    explicit RewardDistribution(std::vector<Atom> support) : support_(std::move(support)) {
        check_valid();
        compute_moments();
    }

    static RewardDistribution point_mass(double value) {
        return RewardDistribution({{value, 1.0}});
    }

    static RewardDistribution bernoulli(double theta) {
        if (theta < 0.0 || theta > 1.0) {
            throw std::invalid_argument("bernoulli: theta must lie in [0,1]");
        }
        return RewardDistribution({{0.0, 1.0 - theta}, {1.0, theta}});
    }

    // Symmetric two-point distribution {mu - sigma, mu + sigma}, each with prob 0.5.
    // Mean is exactly mu and variance exactly sigma^2.
    static RewardDistribution two_point(double mu, double sigma) {
        if (sigma < 0.0) {
            throw std::invalid_argument("two_point: sigma must be nonnegative");
        }
        if (sigma == 0.0) {
            return point_mass(mu);
        }
        return RewardDistribution({{mu - sigma, 0.5}, {mu + sigma, 0.5}});
    }

    const std::vector<Atom>& support() const { return support_; }
    double mean() const { return mean_; }
    double variance() const { return variance_; }

    // Probability assigned to `value` (exact match on the support).
    double prob_of(double value) const {
        for (const auto& a : support_) {
            if (a.value == value) return a.prob;
        }
        return 0.0;
    }

private:
    void check_valid() const {
        if (support_.empty()) {
            throw std::invalid_argument("distribution: empty support");
        }
        double total = 0.0;
        for (const auto& a : support_) {
            if (!(a.value >= 0.0 && a.value <= 1.0)) {
                throw std::invalid_argument("distribution: support value " +
                                            std::to_string(a.value) + " outside [0,1]");
            }
            if (!(a.prob >= 0.0)) {
                throw std::invalid_argument("distribution: negative probability");
            }
            total += a.prob;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw std::invalid_argument("distribution: probabilities sum to " +
                                        std::to_string(total) + ", expected 1");
        }
    }

    void compute_moments() {
        double m = 0.0;
        for (const auto& a : support_) m += a.prob * a.value;
        double v = 0.0;
        for (const auto& a : support_) {
            const double d = a.value - m;
            v += a.prob * d * d;
        }
        mean_ = m;
        variance_ = v;
    }

    std::vector<Atom> support_;
    double mean_ = 0.0;
    double variance_ = 0.0;
};

// Exact PMF-weighted mean and variance.
inline std::pair<double, double> moments(const RewardDistribution& d) {
    return {d.mean(), d.variance()};
}

// KL(p || q) over p's support. +infinity when p puts mass on a value q does
// not cover; terms with p(x) = 0 contribute nothing.
inline double kl_divergence(const RewardDistribution& p, const RewardDistribution& q) {
    double acc = 0.0;
    for (const auto& a : p.support()) {
        if (a.prob == 0.0) continue;
        const double qx = q.prob_of(a.value);
        if (qx == 0.0) return std::numeric_limits<double>::infinity();
        acc += a.prob * std::log(a.prob / qx);
    }
    return acc < 0.0 ? 0.0 : acc;
}

}  // namespace vdb
