#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vdb/profile.hpp"
#include "vdb/task.hpp"

namespace vdb {

// Smallest integer N with 2^N >= x (x > 0). Exact at powers of two.
inline int ceil_log2(double x) {
    if (!(x > 0.0)) {
        throw std::invalid_argument("ceil_log2: argument must be positive");
    }
    int n = std::ilogb(x);
    if (std::ldexp(1.0, n) < x) ++n;
    return n;
}

// Empirical mean anchored at the first sample: exact for point masses and
// well-conditioned in general.
class RunningMean {
public:
    void add(double x) {
        if (n_ == 0) anchor_ = x;
        else acc_ += x - anchor_;
        ++n_;
    }
    std::uint64_t count() const { return n_; }
    double value() const { return anchor_ + acc_ / static_cast<double>(n_); }

private:
    std::uint64_t n_ = 0;
    double anchor_ = 0.0;
    double acc_ = 0.0;
};

inline std::uint64_t var_test_pair_count(double tau, double delta, double c) {
    return static_cast<std::uint64_t>(std::ceil(c / tau * std::log(1.0 / delta)));
}

// Tests whether an arm's reward variance exceeds tau. Draws 2*ceil((c/tau)
// ln(1/delta)) samples and estimates the variance from first-half/second-half
// pairs in draw order: sample r pairs with sample r+T.
inline Task<bool> var_test(ExecScope& scope, int arm, double tau, double delta, double c) {
    if (!(tau > 0.0 && tau <= 0.5)) {
        throw std::invalid_argument("var_test: tau must lie in (0, 1/2]");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("var_test: delta must lie in (0,1)");
    }
    if (!(c >= 1.0)) {
        throw std::invalid_argument("var_test: c must be >= 1");
    }
    const std::uint64_t pairs = var_test_pair_count(tau, delta, c);
    std::vector<double> first(pairs);
    for (auto& x : first) x = co_await scope.draw(arm);
    double acc = 0.0;
    for (std::uint64_t r = 0; r < pairs; ++r) {
        const double d = first[r] - co_await scope.draw(arm);
        acc += 0.5 * d * d;
    }
    co_return acc / static_cast<double>(pairs) > tau;
}

// Dyadic variance estimate: descends thresholds 1/2, 1/4, ... and stops at
// the first one at or below ell, or the first one the variance test confirms.
// The threshold check comes first, so ell >= 1/2 draws nothing. The output is
// always a dyadic greater than ell/2.
inline Task<double> var_est(ExecScope& scope, int arm, double delta, double ell,
                            const AlgoProfile& profile) {
    if (!(ell > 0.0)) {
        throw std::invalid_argument("var_est: ell must be positive");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("var_est: delta must lie in (0,1)");
    }
    for (int r = 1;; ++r) {
        const double tau = std::ldexp(1.0, -r);
        if (tau <= ell) co_return tau;
        if (co_await var_test(scope, arm, tau, delta / profile.var_est_conf_divisor,
                              profile.var_test_c)) {
            co_return tau;
        }
    }
}

// Number of fresh draws the mean estimator takes after calibrating on the
// variance estimate (empirical Bernstein bound).
inline std::uint64_t bernstein_sample_count(double sigma_hat_sq, double eps, double delta) {
    if (!(eps > 0.0) || !(delta > 0.0)) {
        throw std::invalid_argument("bernstein_sample_count: eps and delta must be positive");
    }
    const double raw =
        (8.0 * sigma_hat_sq / (eps * eps) + 2.0 / (3.0 * eps)) * std::log(4.0 / delta);
    return static_cast<std::uint64_t>(std::ceil(raw));
}

struct MeanEstimate {
    double value = 0.0;
    double sigma_hat_sq = 0.0;
    std::uint64_t variance_draws = 0;  // spent on var_est
    std::uint64_t mean_draws = 0;      // spent on the averaging phase
};

// Variance-calibrated mean estimation: |estimate - mean| <= eps with
// probability at least 1 - delta, at cost scaling with the arm's variance.
inline Task<MeanEstimate> mean_est(ExecScope& scope, int arm, double eps, double delta,
                                   const AlgoProfile& profile) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("mean_est: eps must lie in (0,1)");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("mean_est: delta must lie in (0,1)");
    }
    MeanEstimate out;
    const std::uint64_t before = scope.oracle().total();
    out.sigma_hat_sq = co_await var_est(scope, arm, delta / 2.0, eps, profile);
    out.variance_draws = scope.oracle().total() - before;
    out.mean_draws = bernstein_sample_count(out.sigma_hat_sq, eps, delta);
    RunningMean mean;
    for (std::uint64_t k = 0; k < out.mean_draws; ++k) {
        mean.add(co_await scope.draw(arm));
    }
    out.value = mean.value();
    co_return out;
}

}  // namespace vdb
