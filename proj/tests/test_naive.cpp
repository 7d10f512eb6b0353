#include <numeric>

#include <gtest/gtest.h>

#include "vdb/naive_id.hpp"

using namespace vdb;

namespace {

BanditInstance point_masses(std::initializer_list<double> means) {
    std::vector<RewardDistribution> arms;
    for (double m : means) arms.push_back(RewardDistribution::point_mass(m));
    return BanditInstance(std::move(arms));
}

std::vector<int> all_arms(const BanditInstance& inst) {
    std::vector<int> arms(static_cast<std::size_t>(inst.arm_count()));
    std::iota(arms.begin(), arms.end(), 0);
    return arms;
}

}  // namespace

TEST(NaiveBestArm, SingletonReturnsWithZeroDraws) {
    const auto inst = point_masses({0.4, 0.2});
    SamplingOracle oracle(inst, 1);
    ExecScope scope(oracle);
    EXPECT_EQ(run_task(naive_best_arm(scope, {1}, 0.1, AlgoProfile::paper())), 1);
    EXPECT_EQ(oracle.total(), 0u);
}

TEST(NaiveBestArm, PointMassesResolveInRoundOne) {
    // 0.3 < 0.9 - eps_1 = 0.4, so arm 2 leaves after the first round
    const auto inst = point_masses({0.9, 0.3});
    SamplingOracle oracle(inst, 1);
    ExecScope scope(oracle);
    std::vector<NaiveRound> trace;
    EXPECT_EQ(run_task(naive_best_arm(scope, all_arms(inst), 0.1, AlgoProfile::paper(), &trace)),
              0);
    ASSERT_EQ(trace.size(), 1u);
    EXPECT_EQ(trace[0].active.size(), 2u);
}

TEST(NaiveBestArm, DeterministicOnPointMasses) {
    const auto inst = point_masses({0.9, 0.55, 0.3, 0.1});
    for (std::uint64_t seed : {1ull, 2ull, 77ull}) {
        SamplingOracle oracle(inst, seed);
        ExecScope scope(oracle);
        EXPECT_EQ(run_task(naive_best_arm(scope, all_arms(inst), 0.1, AlgoProfile::practical())),
                  0);
    }
}

TEST(NaiveBestArm, ActiveSetsShrinkAndLeaderSurvives) {
    const auto inst = make_example1(6);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SamplingOracle oracle(inst, 900 + seed);
        ExecScope scope(oracle);
        std::vector<NaiveRound> trace;
        run_task(naive_best_arm(scope, all_arms(inst), 0.1, AlgoProfile::practical(), &trace));
        for (std::size_t r = 0; r < trace.size(); ++r) {
            ASSERT_FALSE(trace[r].active.empty());
            if (r > 0) {
                // monotone: later actives are subsets of earlier ones
                EXPECT_LE(trace[r].active.size(), trace[r - 1].active.size());
                for (int arm : trace[r].active) {
                    EXPECT_NE(std::find(trace[r - 1].active.begin(), trace[r - 1].active.end(), arm),
                              trace[r - 1].active.end());
                }
            }
        }
    }
}

TEST(NaiveBestArm, SixArmBernoulliFrequency) {
    std::vector<RewardDistribution> arms;
    for (double th : {0.9, 0.6, 0.5, 0.4, 0.3, 0.2}) arms.push_back(RewardDistribution::bernoulli(th));
    const BanditInstance inst(std::move(arms));
    int hits = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        SamplingOracle oracle(inst, 3000 + static_cast<std::uint64_t>(t));
        ExecScope scope(oracle);
        hits += run_task(naive_best_arm(scope, all_arms(inst), 0.1, AlgoProfile::practical())) == 0;
    }
    EXPECT_GE(hits, 870);
}

TEST(NaiveBestArmEst, SingletonAndRoundCap) {
    const auto inst = point_masses({0.4, 0.2});
    SamplingOracle oracle(inst, 1);
    ExecScope scope(oracle);
    EXPECT_EQ(run_task(naive_best_arm_est(scope, {0}, 0.5, 0.1, AlgoProfile::paper())), 0);
    EXPECT_EQ(oracle.total(), 0u);
    // eps = 1/2 caps the loop at ceil(log2(4)) = 2 rounds
    EXPECT_EQ(ceil_log2(2.0 / 0.5), 2);
}

TEST(NaiveBestArmEst, StopsAfterCapOnHardTies) {
    // two identical sub-optimal point masses never separate; the cap must stop the loop
    const BanditInstance inst({RewardDistribution::point_mass(0.5),
                               RewardDistribution::point_mass(0.5),
                               RewardDistribution::point_mass(0.8)});
    SamplingOracle oracle(inst, 1);
    ExecScope scope(oracle);
    std::vector<NaiveRound> trace;
    const int arm = run_task(
        naive_best_arm_est(scope, {0, 1}, 0.25, 0.1, AlgoProfile::practical(), &trace));
    EXPECT_EQ(arm, 0);  // tie broken toward the lower index
    EXPECT_EQ(trace.size(), static_cast<std::size_t>(ceil_log2(2.0 / 0.25)));
}

TEST(NaiveBestArmEst, FourArmEpsilonOptimalFrequency) {
    std::vector<RewardDistribution> arms;
    for (double th : {0.8, 0.7, 0.3, 0.2}) arms.push_back(RewardDistribution::bernoulli(th));
    const BanditInstance inst(std::move(arms));
    int hits = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        SamplingOracle oracle(inst, 4000 + static_cast<std::uint64_t>(t));
        ExecScope scope(oracle);
        const int arm =
            run_task(naive_best_arm_est(scope, all_arms(inst), 0.2, 0.1, AlgoProfile::practical()));
        hits += inst.mean(arm) >= 0.6 ? 1 : 0;
    }
    EXPECT_GE(hits, 870);
}
