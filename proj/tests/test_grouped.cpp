#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "vdb/grouped_elim.hpp"
#include "vdb/report.hpp"

using namespace vdb;

namespace {

std::vector<int> all_arms(const BanditInstance& inst) {
    std::vector<int> arms(static_cast<std::size_t>(inst.arm_count()));
    std::iota(arms.begin(), arms.end(), 0);
    return arms;
}

BanditInstance sixteen_equal_variance() {
    // 16 two-point arms with sigma^2 = 0.04 and distinct means
    std::vector<RewardDistribution> arms;
    for (int i = 0; i < 16; ++i) {
        arms.push_back(RewardDistribution::two_point(0.7 - 0.02 * i, 0.2));
    }
    return BanditInstance(std::move(arms));
}

void check_partition(const ElimOutcome& out, const std::vector<int>& arms) {
    std::set<int> seen;
    for (int a : out.kept) EXPECT_TRUE(seen.insert(a).second);
    for (int a : out.recycled) EXPECT_TRUE(seen.insert(a).second);
    for (int a : out.eliminated) EXPECT_TRUE(seen.insert(a).second);
    EXPECT_EQ(seen.size(), arms.size());
    for (int a : arms) EXPECT_TRUE(seen.count(a));
}

}  // namespace

TEST(BucketAssign, UpperInclusiveBoundaries) {
    EXPECT_EQ(bucket_assign(0.5, 5), 2);          // 1/4 < 0.5 <= 1/2
    EXPECT_EQ(bucket_assign(1.0 / 8.0, 5), 4);    // dyadic lands one bucket below its exponent
    EXPECT_EQ(bucket_assign(1.0, 5), 1);
    EXPECT_THROW(bucket_assign(std::ldexp(1.0, -6), 5), std::logic_error);
    EXPECT_THROW(bucket_assign(std::ldexp(1.0, -5), 5), std::logic_error);  // == 2^-N
}

TEST(MedianKeep, KeepsTopHalfWithLowIndexTies) {
    const auto kept = median_keep({{0, 0.9}, {1, 0.8}, {2, 0.7}, {3, 0.6}});
    EXPECT_EQ(kept, (std::vector<int>{0, 1}));

    const auto three = median_keep({{5, 0.9}, {6, 0.8}, {7, 0.7}});
    EXPECT_EQ(three.size(), 2u);  // ceil(3/2) = 2 = (2/3) * 3
    EXPECT_EQ(three, (std::vector<int>{5, 6}));

    const auto tie = median_keep({{0, 0.5}, {1, 0.5}});
    EXPECT_EQ(tie, (std::vector<int>{0}));

    EXPECT_THROW(median_keep({{0, 0.5}}), std::invalid_argument);
}

TEST(GroupElim, SingleArmIsRecycled) {
    const BanditInstance inst({RewardDistribution::bernoulli(0.5),
                               RewardDistribution::bernoulli(0.2)});
    SamplingOracle oracle(inst, 3);
    ExecScope scope(oracle);
    const auto out = run_task(group_elim(scope, {1}, 0.1, 0.1, AlgoProfile::practical()));
    EXPECT_TRUE(out.kept.empty());
    EXPECT_EQ(out.recycled, (std::vector<int>{1}));
    EXPECT_TRUE(out.eliminated.empty());
}

TEST(GroupElim, SixteenEqualVarianceArmsShareOneBucket) {
    const auto inst = sixteen_equal_variance();
    const int trials = 500;
    int one_bucket_half_kept = 0;
    for (int t = 0; t < trials; ++t) {
        SamplingOracle oracle(inst, 5000 + static_cast<std::uint64_t>(t));
        ExecScope scope(oracle);
        const auto out =
            run_task(group_elim(scope, all_arms(inst), 0.1, 0.05, AlgoProfile::practical()));
        check_partition(out, all_arms(inst));
        if (out.buckets.size() == 1 && out.kept.size() == 8) ++one_bucket_half_kept;
    }
    // var_est keeps all arms in a common bucket in >= 95% of trials (minus 3 sigma)
    EXPECT_GE(one_bucket_half_kept, static_cast<int>(trials * 0.92));
}

TEST(GroupElim, StructuralInvariantsOnRandomInstances) {
    std::mt19937_64 gen(123);
    std::uniform_int_distribution<int> n_dist(1, 20);
    std::uniform_real_distribution<double> mean_dist(0.1, 0.9);
    std::uniform_real_distribution<double> sigma_dist(0.0, 0.3);
    std::uniform_real_distribution<double> eps_dist(0.05, 0.3);
    for (int k = 0; k < 25; ++k) {
        const int n = n_dist(gen);
        std::vector<RewardDistribution> arms;
        for (int i = 0; i < n; ++i) {
            switch (i % 3) {
                case 0: arms.push_back(RewardDistribution::bernoulli(mean_dist(gen))); break;
                case 1: arms.push_back(RewardDistribution::point_mass(mean_dist(gen))); break;
                default: {
                    const double mu = mean_dist(gen);
                    const double s = std::min({sigma_dist(gen), mu, 1.0 - mu});
                    arms.push_back(RewardDistribution::two_point(mu, s));
                }
            }
        }
        const BanditInstance inst(std::move(arms));
        SamplingOracle oracle(inst, 7000 + static_cast<std::uint64_t>(k));
        ExecScope scope(oracle);
        const double eps = eps_dist(gen);
        const auto out = run_task(group_elim(scope, all_arms(inst), eps, 0.1,
                                             AlgoProfile::practical()));
        check_partition(out, all_arms(inst));
        EXPECT_LE(out.recycled.size(), static_cast<std::size_t>(out.bucket_count));
        for (const auto& bucket : out.buckets) {
            if (bucket.members.size() >= 2) {
                EXPECT_EQ(bucket.kept.size(), (bucket.members.size() + 1) / 2);
            } else {
                EXPECT_NE(bucket.recycled, -1);
            }
            for (double s : bucket.sigma_hats) {
                EXPECT_GT(s, bucket.lower);
                EXPECT_LE(s, bucket.upper);
            }
        }
        // ledger audit: the two phases account for every draw
        EXPECT_EQ(out.variance_draws + out.mean_draws, oracle.total());
    }
}

TEST(GroupElim, AuditSerializesToJson) {
    const auto inst = sixteen_equal_variance();
    SamplingOracle oracle(inst, 42);
    ExecScope scope(oracle);
    std::vector<IterElimRound> trace;
    run_task(iter_elim(scope, all_arms(inst), 0.1, 0.1, AlgoProfile::practical(), &trace));
    const auto doc = to_json(trace);
    ASSERT_GE(doc.size(), 1u);
    const auto& round = doc[0];
    EXPECT_TRUE(round.contains("epsilon"));
    EXPECT_TRUE(round.contains("outcome"));
    const auto& outcome = round["outcome"];
    EXPECT_TRUE(outcome.contains("kept"));
    EXPECT_TRUE(outcome.contains("recycled"));
    EXPECT_TRUE(outcome.contains("eliminated"));
    ASSERT_GE(outcome["buckets"].size(), 1u);
    const auto& bucket = outcome["buckets"][0];
    for (const char* key : {"j", "members", "sigma_hats", "kept", "median"}) {
        EXPECT_TRUE(bucket.contains(key)) << key;
    }
}

TEST(IterElim, TenArmsOrFewerIsANoOp) {
    const auto inst = make_example1(10);
    SamplingOracle oracle(inst, 5);
    ExecScope scope(oracle);
    const auto out = run_task(iter_elim(scope, all_arms(inst), 0.2, 0.1, AlgoProfile::practical()));
    EXPECT_EQ(out, all_arms(inst));
    EXPECT_EQ(oracle.total(), 0u);
}

TEST(IterElim, ElevenArmsRunAtLeastOneRound) {
    const auto inst = make_example1(11);
    SamplingOracle oracle(inst, 5);
    ExecScope scope(oracle);
    std::vector<IterElimRound> trace;
    const auto out =
        run_task(iter_elim(scope, all_arms(inst), 0.2, 0.1, AlgoProfile::practical(), &trace));
    EXPECT_GE(trace.size(), 1u);
    EXPECT_GT(oracle.total(), 0u);
    EXPECT_FALSE(out.empty());
}

TEST(IterElim, RoundCountIsLogarithmicallyBounded) {
    const auto inst = make_example1(24);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        SamplingOracle oracle(inst, 100 + seed);
        ExecScope scope(oracle);
        std::vector<IterElimRound> trace;
        run_task(iter_elim(scope, all_arms(inst), 0.25, 0.1, AlgoProfile::practical(), &trace));
        // each round keeps at most 2/3 of the active arms
        const double bound = std::ceil(std::log(24.0 / 10.0) / std::log(1.5)) + 1.0;
        EXPECT_LE(trace.size(), static_cast<std::size_t>(bound));
    }
}

TEST(BestArmEst, SingletonZeroDraws) {
    const auto inst = make_example1(4);
    SamplingOracle oracle(inst, 6);
    ExecScope scope(oracle);
    EXPECT_EQ(run_task(best_arm_est(scope, {2}, 0.2, 0.1, AlgoProfile::practical())), 2);
    EXPECT_EQ(oracle.total(), 0u);
}

TEST(BestArmEst, SmallSetsReduceToTheNaiveSearch) {
    // with at most 10 arms both elimination stages are no-ops, so the run is
    // draw-for-draw the capped naive search at eps/3, delta/3
    std::vector<RewardDistribution> arms;
    for (double th : {0.9, 0.6, 0.5, 0.4, 0.3, 0.2}) arms.push_back(RewardDistribution::bernoulli(th));
    const BanditInstance inst(std::move(arms));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SamplingOracle oracle_a(inst, 40 + seed);
        ExecScope scope_a(oracle_a);
        const int via_pipeline =
            run_task(best_arm_est(scope_a, all_arms(inst), 0.3, 0.1, AlgoProfile::practical()));

        SamplingOracle oracle_b(inst, 40 + seed);
        ExecScope scope_b(oracle_b);
        const int via_naive = run_task(naive_best_arm_est(scope_b, all_arms(inst), 0.1, 0.1 / 3.0,
                                                          AlgoProfile::practical()));
        EXPECT_EQ(via_pipeline, via_naive);
        EXPECT_EQ(oracle_a.ledger(), oracle_b.ledger());
    }
}

TEST(BestArmEst, SixArmFrequency) {
    std::vector<RewardDistribution> arms;
    for (double th : {0.9, 0.6, 0.5, 0.4, 0.3, 0.2}) arms.push_back(RewardDistribution::bernoulli(th));
    const BanditInstance inst(std::move(arms));
    int hits = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        SamplingOracle oracle(inst, 6000 + static_cast<std::uint64_t>(t));
        ExecScope scope(oracle);
        const int arm =
            run_task(best_arm_est(scope, all_arms(inst), 0.2, 0.1, AlgoProfile::practical()));
        hits += inst.mean(arm) >= 0.7 ? 1 : 0;
    }
    EXPECT_GE(hits, 870);
}

TEST(IterElim, KeepsNearOptimalArmTwentyArms) {
    // 20 arms, practical profile: the returned set contains an arm within eps
    // of the best in at least 1 - delta - 3 sigma of trials
    std::vector<RewardDistribution> arms;
    for (int i = 0; i < 20; ++i) {
        arms.push_back(RewardDistribution::bernoulli(0.85 - 0.04 * i));
    }
    const BanditInstance inst(std::move(arms));
    const double eps = 0.15;
    int hits = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        SamplingOracle oracle(inst, 8000 + static_cast<std::uint64_t>(t));
        ExecScope scope(oracle);
        const auto kept =
            run_task(iter_elim(scope, all_arms(inst), eps, 0.1, AlgoProfile::practical()));
        double best_kept = 0.0;
        for (int a : kept) best_kept = std::max(best_kept, inst.mean(a));
        hits += best_kept >= inst.mean(inst.best_index()) - eps ? 1 : 0;
    }
    EXPECT_GE(hits, 81);  // 0.9 - 3*sqrt(0.9*0.1/100)
}
