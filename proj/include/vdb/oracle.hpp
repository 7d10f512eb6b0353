#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "vdb/instance.hpp"
#include "vdb/rng.hpp"

namespace vdb {

// Fired when a run tries to draw past its total-sample budget. Signals a
// runaway configuration rather than an algorithmic failure.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(std::uint64_t budget)
        : std::runtime_error("sampling budget of " + std::to_string(budget) + " draws exceeded") {}
};

struct SampleLedger {
    std::vector<std::uint64_t> per_arm;
    std::uint64_t total = 0;

    SampleLedger& operator+=(const SampleLedger& other) {
        if (per_arm.size() < other.per_arm.size()) per_arm.resize(other.per_arm.size(), 0);
        for (std::size_t i = 0; i < other.per_arm.size(); ++i) per_arm[i] += other.per_arm[i];
        total += other.total;
        return *this;
    }
};

inline bool operator==(const SampleLedger& a, const SampleLedger& b) {
    return a.total == b.total && a.per_arm == b.per_arm;
}

constexpr std::uint64_t kDefaultBudget = 1'000'000'000ull;

// The only gateway through which algorithms observe rewards: seeded, counted
// and budget-capped. One oracle per run; never shared between concurrent
// executions.
class SamplingOracle {
public:
    SamplingOracle(const BanditInstance& instance, std::uint64_t seed,
                   std::uint64_t budget = kDefaultBudget)
        : instance_(&instance), rng_(seed), seed_(seed), budget_(budget),
          per_arm_(static_cast<std::size_t>(instance.arm_count()), 0) {
        if (budget_ == 0) {
            throw std::invalid_argument("oracle: budget must be positive");
        }
        values_.reserve(per_arm_.size());
        cum_.reserve(per_arm_.size());
        for (const auto& arm : instance.arms()) {
            std::vector<double> vals;
            std::vector<double> cum;
            double acc = 0.0;
            for (const auto& a : arm.support()) {
                acc += a.prob;
                vals.push_back(a.value);
                cum.push_back(acc);
            }
            cum.back() = 1.0;  // guard against round-off at the top of the CDF
            values_.push_back(std::move(vals));
            cum_.push_back(std::move(cum));
        }
    }

    const BanditInstance& instance() const { return *instance_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t budget() const { return budget_; }
    std::uint64_t total() const { return total_; }
    std::uint64_t count(int arm) const { return per_arm_.at(static_cast<std::size_t>(arm)); }

    SampleLedger ledger() const { return SampleLedger{per_arm_, total_}; }

    double draw(int arm) {
        const auto a = static_cast<std::size_t>(arm);
        if (arm < 0 || a >= per_arm_.size()) {
            throw std::out_of_range("oracle: bad arm index " + std::to_string(arm));
        }
        if (total_ >= budget_) {
            throw BudgetExceeded(budget_);
        }
        ++total_;
        ++per_arm_[a];
        const double u = rng_.next();
        const auto& cum = cum_[a];
        for (std::size_t k = 0; k + 1 < cum.size(); ++k) {
            if (u < cum[k]) return values_[a][k];
        }
        return values_[a].back();
    }

    std::vector<double> draw_batch(int arm, std::uint64_t k) {
        if (k == 0) {
            throw std::invalid_argument("draw_batch: k must be positive");
        }
        std::vector<double> out;
        out.reserve(k);
        for (std::uint64_t i = 0; i < k; ++i) out.push_back(draw(arm));
        return out;
    }

private:
    const BanditInstance* instance_;
    UnitUniform rng_;
    std::uint64_t seed_;
    std::uint64_t budget_;
    std::uint64_t total_ = 0;
    std::vector<std::uint64_t> per_arm_;
    std::vector<std::vector<double>> values_;
    std::vector<std::vector<double>> cum_;
};

}  // namespace vdb
