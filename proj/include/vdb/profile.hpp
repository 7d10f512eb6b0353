#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace vdb {

// Constant bundle shared by the identification pipeline. The "paper" profile
// carries the published constants verbatim; the "practical" profile shrinks
// the two that dominate desk-scale cost (the variance-test exponent constant
// and the iterative-elimination decay rate) while keeping the structure.
struct AlgoProfile {
    std::string name;
    double var_test_c;            // exponent constant of the variance test
    double var_est_conf_divisor;  // variance estimation passes delta/divisor to each test
    double iter_elim_beta;        // accuracy decay rate of iterative elimination
    int iter_elim_stop;           // iterate while more than this many arms remain

    // Confidence splits inside grouped elimination.
    double group_var_confidence(double delta, int buckets) const {
        return delta / (2.0 * buckets * buckets);
    }
    double group_mean_confidence(double delta, int buckets) const {
        return delta / (9.0 * buckets);
    }

    // Round schedule of the main identifier.
    double vd_epsilon(int round) const { return std::ldexp(1.0, -(round + 2)); }
    double vd_delta(double delta, int round) const {
        return delta / (2.0 * round * round);
    }

    // Round schedule of iterative elimination: accuracies beta^r (1-beta) eps
    // summing to eps, confidences e^{-r/10} (1 - e^{-1/10}) delta summing to delta.
    double iter_epsilon(double eps, int round) const {
        return std::pow(iter_elim_beta, round) * (1.0 - iter_elim_beta) * eps;
    }
    double iter_delta(double delta, int round) const {
        return std::exp(-0.1 * round) * (1.0 - std::exp(-0.1)) * delta;
    }

    static const AlgoProfile& paper() {
        static const AlgoProfile p{
            "paper",
            80.0,
            std::exp(1.0),
            std::sqrt(255.0) / 16.0 * std::exp(0.001),
            10,
        };
        return p;
    }

    static const AlgoProfile& practical() {
        static const AlgoProfile p{
            "practical",
            8.0,
            std::exp(1.0),
            0.75,
            10,
        };
        return p;
    }

    static const AlgoProfile& by_name(const std::string& name) {
        if (name == "paper") return paper();
        if (name == "practical") return practical();
        throw std::invalid_argument("unknown profile '" + name + "'");
    }
};

}  // namespace vdb
