#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vdb/distribution.hpp"

namespace vdb {

// Ordered list of arms with derived ground truth: means, variances, reward
// gaps and the (unique) best-arm index. Construction is lenient so degenerate
// single-arm sets can be used by sub-runs; validate() enforces the full
// contract expected from benchmark instances.
class BanditInstance {
public:
    BanditInstance() = default;

    explicit BanditInstance(std::vector<RewardDistribution> arms, std::string name = "")
        : name_(std::move(name)), arms_(std::move(arms)) {
        if (arms_.empty()) {
            throw std::invalid_argument("instance: needs at least one arm");
        }
        recompute();
    }

    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    int arm_count() const { return static_cast<int>(arms_.size()); }
    const RewardDistribution& arm(int i) const { return arms_.at(static_cast<std::size_t>(i)); }
    const std::vector<RewardDistribution>& arms() const { return arms_; }

    double mean(int i) const { return arms_.at(static_cast<std::size_t>(i)).mean(); }
    double variance(int i) const { return arms_.at(static_cast<std::size_t>(i)).variance(); }

    int best_index() const { return best_; }
    bool best_is_tied() const { return tied_best_; }

    // Gap to the best mean; for the best arm itself this is the runner-up gap.
    double gap(int i) const {
        if (arm_count() < 2) {
            throw std::logic_error("gap: undefined for single-arm instances");
        }
        if (i == best_) return second_gap_;
        return mean(best_) - mean(i);
    }

    // Runner-up gap (the smallest positive gap).
    double second_gap() const {
        if (arm_count() < 2) {
            throw std::logic_error("second_gap: undefined for single-arm instances");
        }
        return second_gap_;
    }

private:
    void recompute() {
        best_ = 0;
        for (int i = 1; i < arm_count(); ++i) {
            if (mean(i) > mean(best_)) best_ = i;
        }
        tied_best_ = false;
        double second = -1.0;
        for (int i = 0; i < arm_count(); ++i) {
            if (i == best_) continue;
            if (mean(i) == mean(best_)) tied_best_ = true;
            second = std::max(second, mean(i));
        }
        second_gap_ = arm_count() >= 2 ? mean(best_) - second : 0.0;
    }

    std::string name_;
    std::vector<RewardDistribution> arms_;
    int best_ = 0;
    bool tied_best_ = false;
    double second_gap_ = 0.0;
};

// Full instance contract: n >= 2, valid PMFs (already enforced by the
// distributions), and a strictly unique best arm.
inline void validate(const BanditInstance& inst) {
    if (inst.arm_count() < 2) {
        throw std::invalid_argument("instance '" + inst.name() + "': needs at least 2 arms");
    }
    if (inst.best_is_tied()) {
        throw std::invalid_argument("instance '" + inst.name() + "': tied best arm (mean " +
                                    std::to_string(inst.mean(inst.best_index())) + ")");
    }
}

// n Bernoulli arms with mean 1 - i/n for i = 1..n; arm n is constant zero.
inline BanditInstance make_example1(int n) {
    if (n < 2) {
        throw std::invalid_argument("make_example1: n must be >= 2");
    }
    std::vector<RewardDistribution> arms;
    arms.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        arms.push_back(RewardDistribution::bernoulli(1.0 - static_cast<double>(i) / n));
    }
    BanditInstance inst(std::move(arms), "example1-n" + std::to_string(n));
    validate(inst);
    return inst;
}

// Hard-instance family with prescribed variances and gaps: arm 1 is the
// symmetric two-point {0.5 - s1, 0.5 + s1}; arm i >= 2 is {0.5 - d_i - s_i,
// 0.5 - d_i + s_i}. Requires s_i^2 < 0.1 and 0 < d_i < 0.1.
inline BanditInstance make_lower_bound_instance(const std::vector<double>& sigmas,
                                                const std::vector<double>& deltas) {
    if (sigmas.size() < 2 || deltas.size() + 1 != sigmas.size()) {
        throw std::invalid_argument(
            "make_lower_bound_instance: need n >= 2 sigmas and n-1 deltas");
    }
    for (double s : sigmas) {
        if (!(s >= 0.0) || s * s >= 0.1) {
            throw std::invalid_argument("make_lower_bound_instance: sigma^2 = " +
                                        std::to_string(s * s) + " must be < 0.1");
        }
    }
    for (double d : deltas) {
        if (!(d > 0.0 && d < 0.1)) {
            throw std::invalid_argument("make_lower_bound_instance: delta = " +
                                        std::to_string(d) + " must lie in (0, 0.1)");
        }
    }
    std::vector<RewardDistribution> arms;
    arms.reserve(sigmas.size());
    arms.push_back(RewardDistribution::two_point(0.5, sigmas[0]));
    for (std::size_t i = 1; i < sigmas.size(); ++i) {
        arms.push_back(RewardDistribution::two_point(0.5 - deltas[i - 1], sigmas[i]));
    }
    BanditInstance inst(std::move(arms), "lower-bound-n" + std::to_string(sigmas.size()));
    validate(inst);
    return inst;
}

// Perturbations of a lower-bound instance in which a single arm's PMF is
// replaced so that the best arm changes. The `prime` variants reweight the
// arm's existing two-point support; the `doubleprime` variants extend it
// with one extra atom.
enum class PerturbVariant { prime_1, doubleprime_1, prime_i, doubleprime_i };

inline const char* to_string(PerturbVariant v) {
    switch (v) {
        case PerturbVariant::prime_1: return "prime_1";
        case PerturbVariant::doubleprime_1: return "doubleprime_1";
        case PerturbVariant::prime_i: return "prime_i";
        case PerturbVariant::doubleprime_i: return "doubleprime_i";
    }
    return "?";
}

inline BanditInstance make_perturbed_instance(const BanditInstance& base, PerturbVariant variant,
                                              int arm_index) {
    validate(base);
    const bool targets_best = variant == PerturbVariant::prime_1 || variant == PerturbVariant::doubleprime_1;
    if (targets_best && arm_index != 0) {
        throw std::invalid_argument("make_perturbed_instance: *_1 variants apply to arm 1");
    }
    if (!targets_best && (arm_index <= 0 || arm_index >= base.arm_count())) {
        throw std::invalid_argument("make_perturbed_instance: *_i variants need arm index >= 2");
    }

    const auto& old_support = base.arm(arm_index).support();
    if (old_support.size() != 2 || old_support[0].prob != 0.5 || old_support[1].prob != 0.5) {
        throw std::invalid_argument(
            "make_perturbed_instance: base arm must be a symmetric two-point distribution");
    }
    const double lo = std::min(old_support[0].value, old_support[1].value);
    const double hi = std::max(old_support[0].value, old_support[1].value);
    const double sigma = (hi - lo) / 2.0;
    // Gap used by the construction: the runner-up gap when perturbing the best
    // arm, the arm's own gap otherwise.
    const double gap = targets_best ? base.second_gap() : base.gap(arm_index);

    std::vector<RewardDistribution::Atom> atoms;
    switch (variant) {
        case PerturbVariant::prime_1:
        case PerturbVariant::prime_i: {
            // tolerance absorbs round-off in the reconstructed sigma and gap
            if (sigma * (1.0 + 1e-9) < 5.0 * gap) {
                throw std::invalid_argument(
                    "make_perturbed_instance: prime variant needs sigma >= 5*delta");
            }
            const double shift = gap / sigma;
            // Mean moves by 2*gap: down for the best arm, up for a sub-optimal arm.
            const double p_hi = targets_best ? 0.5 - shift : 0.5 + shift;
            atoms = {{hi, p_hi}, {lo, 1.0 - p_hi}};
            break;
        }
        case PerturbVariant::doubleprime_1: {
            const double extra = 4.0 * gap;
            if (extra > 1.0) {
                throw std::invalid_argument("make_perturbed_instance: infeasible probabilities");
            }
            atoms = {{hi, 0.5 - 2.0 * gap}, {lo, 0.5 - 2.0 * gap}, {0.0, extra}};
            break;
        }
        case PerturbVariant::doubleprime_i: {
            const double extra = 2.0 * gap;
            if (extra > 1.0) {
                throw std::invalid_argument("make_perturbed_instance: infeasible probabilities");
            }
            atoms = {{1.0, extra}, {hi, 0.5 - gap}, {lo, 0.5 - gap}};
            break;
        }
    }

    std::vector<RewardDistribution> arms = base.arms();
    arms[static_cast<std::size_t>(arm_index)] = RewardDistribution(std::move(atoms));
    BanditInstance out(std::move(arms),
                       base.name() + "-" + to_string(variant) + "-arm" + std::to_string(arm_index + 1));
    validate(out);
    if (out.best_index() == base.best_index()) {
        throw std::logic_error("make_perturbed_instance: best arm did not change");
    }
    return out;
}

// Instance hardness sums. upper_proxy tracks the shape of the algorithmic
// guarantee; lower_bound is the information-theoretic floor with its 1/80
// constant.
struct ComplexityProfile {
    double phi = 0.0;
    double psi = 0.0;

    double upper_proxy(double delta) const { return phi * std::log(1.0 / delta) + psi; }
    double lower_bound(double delta) const { return phi * std::log(1.0 / delta) / 80.0; }
};

inline ComplexityProfile complexity_profile(const BanditInstance& inst) {
    validate(inst);
    ComplexityProfile out;
    for (int i = 0; i < inst.arm_count(); ++i) {
        const double gap = inst.gap(i);
        const double term = inst.variance(i) / (gap * gap) + 1.0 / gap;
        out.phi += term;
        // Guarded doubly-log factor, finite for all gaps in (0, 1].
        out.psi += term * std::log(std::exp(1.0) + std::log(1.0 / gap));
    }
    return out;
}

}  // namespace vdb
