#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qbound/errors.hpp"
#include "qbound/solver.hpp"

namespace qbound::solver {
namespace {

using SM = SamplingMethod;

PlanQuery size_query(double p, double q, double target, SM method = SM::WithReplacement,
                     std::optional<std::uint64_t> rows = std::nullopt) {
  PlanQuery query;
  query.method = method;
  query.p = p;
  query.rows = rows;
  query.target_q = q;
  query.target_confidence = target;
  return query;
}

PlanQuery q_query(double p, std::uint64_t k, double target, SM method = SM::WithReplacement,
                  std::optional<std::uint64_t> rows = std::nullopt) {
  PlanQuery query;
  query.method = method;
  query.p = p;
  query.rows = rows;
  query.k = k;
  query.target_confidence = target;
  return query;
}

void expect_least_k(const PlanQuery& query, const SampleSizePlan& plan) {
  ASSERT_TRUE(plan.reachable());
  EXPECT_GE(confidence_at(query, *plan.k, query.target_q), query.target_confidence);
  if (*plan.k > 1) {
    EXPECT_LT(confidence_at(query, *plan.k - 1, query.target_q), query.target_confidence);
  }
}

TEST(MinSampleSizeTest, ReferenceCellBracket) {
  const PlanQuery query = size_query(0.005, 2.0, 0.39);
  const SampleSizePlan plan = min_sample_size(query);
  expect_least_k(query, plan);
  EXPECT_LE(*plan.k, 1000u);
}

TEST(MinSampleSizeTest, NinetyFivePercentLiesBetweenTableColumns) {
  const PlanQuery query = size_query(0.005, 2.0, 0.95);
  const SampleSizePlan plan = min_sample_size(query);
  expect_least_k(query, plan);
  EXPECT_GT(*plan.k, 1000u);
  EXPECT_LT(*plan.k, 10000u);
}

TEST(MinSampleSizeTest, FullSelectivityNeedsTwoRows) {
  // At k = 1 the bound is 1 - e^{-1.5} - e^{-0.75} ~ 0.305; k = 2 gives ~0.727.
  const PlanQuery query = size_query(1.0, 2.0, 0.5);
  const SampleSizePlan plan = min_sample_size(query);
  expect_least_k(query, plan);
  EXPECT_EQ(*plan.k, 2u);
}

TEST(MinSampleSizeTest, UnreachableIsAResult) {
  PlanQuery query = size_query(0.001, 2.0, 0.9);
  query.k_max = 100;
  const SampleSizePlan plan = min_sample_size(query);
  EXPECT_FALSE(plan.reachable());
  EXPECT_EQ(plan.search_cap, 100u);
  EXPECT_LT(confidence_at(query, 100, 2.0), 0.9);
  EXPECT_DOUBLE_EQ(plan.confidence, confidence_at(query, 100, 2.0));

  const SampleSizePlan degenerate = min_sample_size(size_query(0.0, 2.0, 0.5));
  EXPECT_FALSE(degenerate.reachable());
}

TEST(MinSampleSizeTest, WithoutReplacementCapsAtNMinusOne) {
  const PlanQuery tight = size_query(0.01, 1.01, 0.99, SM::WithoutReplacement, 1000);
  const SampleSizePlan plan = min_sample_size(tight);
  EXPECT_EQ(plan.search_cap, 999u);
  if (plan.reachable()) {
    EXPECT_LE(*plan.k, 999u);
  }
  const PlanQuery easy = size_query(0.2, 2.0, 0.9, SM::WithoutReplacement, 1'000'000);
  expect_least_k(easy, min_sample_size(easy));
}

TEST(MinSampleSizeTest, MonotoneInTarget) {
  for (double p : {0.001, 0.02, 0.3}) {
    std::uint64_t previous = 0;
    for (double target = 0.05; target < 0.99; target += 0.05) {
      const SampleSizePlan plan = min_sample_size(size_query(p, 1.5, target));
      ASSERT_TRUE(plan.reachable());
      EXPECT_GE(*plan.k, previous);
      previous = *plan.k;
    }
  }
}

TEST(MinSampleSizeTest, RandomRoundTrips) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> log_p(std::log(1e-4), 0.0);
  std::uniform_real_distribution<double> q_dist(1.05, 5.0);
  std::uniform_real_distribution<double> target(0.01, 0.99);
  for (int i = 0; i < 100; ++i) {
    const SM method = i % 2 ? SM::WithReplacement : SM::WithoutReplacement;
    const PlanQuery query = size_query(std::exp(log_p(rng)), q_dist(rng), target(rng), method,
                                       method == SM::WithoutReplacement
                                           ? std::optional<std::uint64_t>(100'000'000)
                                           : std::nullopt);
    const SampleSizePlan plan = min_sample_size(query);
    if (plan.reachable()) {
      expect_least_k(query, plan);
    } else {
      EXPECT_LT(confidence_at(query, plan.search_cap, query.target_q), query.target_confidence);
    }
  }
}

TEST(QAtConfidenceTest, BelowTwoForLargeSample) {
  const PlanQuery query = q_query(0.005, 10000, 0.95);
  const QPlan plan = q_at_confidence(query);
  ASSERT_TRUE(plan.reachable());
  EXPECT_LE(*plan.q, 2.0);
  EXPECT_GE(confidence_at(query, 10000, *plan.q), 0.95);
  EXPECT_LT(confidence_at(query, 10000, *plan.q * (1 - 1e-6)), 0.95);
}

TEST(QAtConfidenceTest, ChernoffFloorMakesTargetUnreachable) {
  // 1 - e^{-pk} = 1 - e^{-0.05} ~ 0.049 caps the confidence.
  const PlanQuery query = q_query(0.005, 10, 0.999);
  const QPlan plan = q_at_confidence(query);
  EXPECT_FALSE(plan.reachable());
  EXPECT_LT(confidence_at(query, 10, query.q_max), 0.999);
}

TEST(QAtConfidenceTest, TinyTargetStopsWhereTheBoundLeavesZero) {
  // Near q = 1 both tails bound at 1 and the confidence is clamped to 0, so a
  // tiny target lands at the first q where omega + psi drops below 1.
  const PlanQuery query = q_query(0.3, 1000, 1e-9);
  const QPlan plan = q_at_confidence(query);
  ASSERT_TRUE(plan.reachable());
  EXPECT_GT(*plan.q, 1.0);
  EXPECT_LT(*plan.q, 1.1);
  EXPECT_GE(confidence_at(query, 1000, *plan.q), 1e-9);
  EXPECT_LT(confidence_at(query, 1000, *plan.q * (1.0 - 1e-6)), 1e-9);
}

TEST(QAtConfidenceTest, WithoutReplacement) {
  const PlanQuery query = q_query(0.05, 5000, 0.9, SM::WithoutReplacement, 1'000'000);
  const QPlan plan = q_at_confidence(query);
  ASSERT_TRUE(plan.reachable());
  EXPECT_GE(confidence_at(query, 5000, *plan.q), 0.9);
  EXPECT_LT(confidence_at(query, 5000, *plan.q * (1 - 1e-6)), 0.9);
}

TEST(PlanQueryTest, InvalidTargets) {
  EXPECT_THROW(min_sample_size(size_query(0.1, 2.0, 1.0)), UsageError);
  EXPECT_THROW(min_sample_size(size_query(0.1, 2.0, 0.0)), UsageError);
  EXPECT_THROW(min_sample_size(size_query(0.1, 0.5, 0.5)), UsageError);
  EXPECT_THROW(q_at_confidence(q_query(0.1, 0, 0.5)), UsageError);
  EXPECT_THROW(min_sample_size(size_query(0.1, 2.0, 0.5, SM::WithoutReplacement)), UsageError);
}

}  // namespace
}  // namespace qbound::solver
