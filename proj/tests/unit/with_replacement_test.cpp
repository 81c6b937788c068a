#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qbound/confidence.hpp"
#include "qbound/errors.hpp"
#include "qbound/with_replacement.hpp"

// Expected values were evaluated at 50 digits from the textbook closed forms
// by tests/oracle/bounds_mp.py.
namespace qbound::wr {
namespace {

constexpr double kRel = 1e-12;

TEST(ChernoffTermTest, ReferenceValues) {
  EXPECT_NEAR(chernoff_term(0.005, 1000, 2.0, Side::Over), 0.14493472568610996,
              kRel * 0.145);
  EXPECT_NEAR(chernoff_term(0.005, 1000, 2.0, Side::Under), 0.46434287328517807,
              kRel * 0.464);
  EXPECT_NEAR(chernoff_term(0.1667, 100, 2.0, Side::Over), 0.0015971619597914776,
              kRel * 0.0016);
}

TEST(ChernoffTermTest, QEqualsOneIsVacuous) {
  for (double p : {1e-6, 0.3, 1.0}) {
    EXPECT_DOUBLE_EQ(chernoff_term(p, 12345, 1.0, Side::Over), 1.0);
    EXPECT_DOUBLE_EQ(chernoff_term(p, 12345, 1.0, Side::Under), 1.0);
  }
}

TEST(ChernoffTermTest, NoOverflowForHugeQ) {
  // q^q overflows a double near q = 143; the log-space form does not.
  const double over = chernoff_term(0.5, 10, 1e6, Side::Over);
  EXPECT_EQ(over, 0.0);
  // Under-estimation floor: the term tends to e^{-pk} as q grows.
  EXPECT_NEAR(chernoff_term(0.01, 100, 1e6, Side::Under), std::exp(-1.0), 2e-4);
}

TEST(BernsteinTermTest, ReferenceValues) {
  EXPECT_NEAR(bernstein_term(0.005, 1000, 2.0, Side::Over), 0.15227644141501199, kRel * 0.15);
  EXPECT_NEAR(bernstein_term(0.1667, 100, 2.0, Side::Under), 0.12445395626862868,
              kRel * 0.12);
}

TEST(BernsteinTermTest, QEqualsOneIsVacuous) {
  for (double p : {1e-6, 0.3, 1.0}) {
    EXPECT_DOUBLE_EQ(bernstein_term(p, 777, 1.0, Side::Over), 1.0);
    EXPECT_DOUBLE_EQ(bernstein_term(p, 777, 1.0, Side::Under), 1.0);
  }
}

TEST(HoeffdingTermTest, ReferenceValues) {
  const BoundTerm over = hoeffding_term(0.1667, 100, 2.0, Side::Over);
  EXPECT_TRUE(over.applicable);
  EXPECT_NEAR(over.probability, 0.0038573378870582698, kRel);
  const BoundTerm under = hoeffding_term(0.6, 100, 2.0, Side::Under);
  EXPECT_TRUE(under.applicable);
  EXPECT_NEAR(under.probability, std::exp(-2.0), 1e-14);
}

TEST(HoeffdingTermTest, UnderSideNeedsPqAboveOne) {
  EXPECT_FALSE(hoeffding_term(0.3, 100, 2.0, Side::Under).applicable);
  EXPECT_FALSE(hoeffding_term(0.5, 100, 2.0, Side::Under).applicable);  // pq = 1
  EXPECT_TRUE(hoeffding_term(0.51, 100, 2.0, Side::Under).applicable);
}

TEST(TermPreconditionTest, DomainErrors) {
  EXPECT_THROW(chernoff_term(0.0, 10, 2.0, Side::Over), DomainError);
  EXPECT_THROW(chernoff_term(0.1, 10, 0.5, Side::Over), DomainError);
  EXPECT_THROW(bernstein_term(1.5, 10, 2.0, Side::Over), DomainError);
  EXPECT_THROW(hoeffding_term(0.1, 0, 2.0, Side::Over), DomainError);
}

TEST(ConfidenceWrTest, ReferenceTableCells) {
  const InequalitySet defaults = InequalitySet::with_replacement();
  EXPECT_NEAR(confidence(5000.0 / 1e6, 1000, 2.0, defaults).confidence, 0.39072240102871196,
              1e-12);
  EXPECT_NEAR(confidence(166666.0 / 1e6, 100, 2.0, defaults).confidence, 0.92167997071176224,
              1e-12);
  EXPECT_DOUBLE_EQ(confidence(166.0 / 1e6, 100, 2.0, defaults).confidence, 0.0);
}

TEST(ConfidenceWrTest, QEqualsOneGivesZero) {
  EXPECT_DOUBLE_EQ(confidence(0.4, 1000, 1.0, InequalitySet::with_replacement()).confidence,
                   0.0);
}

TEST(ConfidenceWrTest, RecordsWinningInequality) {
  const BoundResult r = confidence(0.005, 1000, 2.0, InequalitySet::with_replacement());
  ASSERT_TRUE(r.omega_source.has_value());
  EXPECT_EQ(*r.omega_source, Inequality::Chernoff);  // 0.1449 < 0.1523
  EXPECT_DOUBLE_EQ(r.omega, r.find(Inequality::Chernoff, Side::Over)->probability);
  EXPECT_EQ(r.terms.size(), 4u);
}

TEST(ConfidenceWrTest, UsageErrors) {
  EXPECT_THROW(confidence(0.1, 10, 2.0, {}), UsageError);
  EXPECT_THROW(confidence(0.1, 10, 2.0, {Inequality::Chernoff, Inequality::HoeffdingSerfling}),
               UsageError);
}

TEST(ConfidenceWrTest, HoeffdingNeverLowersConfidence) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> log_p(std::log(1e-5), 0.0);
  std::uniform_real_distribution<double> log_q(0.0, std::log(100.0));
  std::uniform_int_distribution<std::uint64_t> k(1, 100000);
  for (int i = 0; i < 5000; ++i) {
    const double p = std::exp(log_p(rng));
    const double q = std::exp(log_q(rng));
    const std::uint64_t kk = k(rng);
    EXPECT_GE(confidence(p, kk, q, InequalitySet::with_replacement(true)).confidence,
              confidence(p, kk, q, InequalitySet::with_replacement()).confidence);
  }
}

TEST(ConfidenceWrTest, TermsStayInUnitInterval) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> log_p(std::log(1e-9), 0.0);
  std::uniform_real_distribution<double> log_q(0.0, std::log(1e6));
  std::uniform_real_distribution<double> log_k(0.0, std::log(1e7));
  for (int i = 0; i < 5000; ++i) {
    const double p = std::exp(log_p(rng));
    const double q = std::exp(log_q(rng));
    const auto kk = static_cast<std::uint64_t>(std::exp(log_k(rng)));
    const BoundResult r = confidence(std::min(p, 1.0), std::max<std::uint64_t>(kk, 1), q,
                                     InequalitySet::with_replacement(true));
    for (const BoundTerm& t : r.terms) {
      if (!t.applicable) continue;
      EXPECT_GE(t.probability, 0.0);
      EXPECT_LE(t.probability, 1.0);
    }
    EXPECT_GE(r.confidence, 0.0);
    EXPECT_LE(r.confidence, 1.0);
  }
}

TEST(ConfidenceWrTest, CappedByChernoffUnderFloor) {
  // With k fixed, the confidence can never exceed 1 - e^{-pk}.
  for (double p : {0.001, 0.01, 0.1}) {
    for (std::uint64_t k : {10u, 100u, 1000u}) {
      const double c = confidence(p, k, 1e6, InequalitySet::with_replacement()).confidence;
      EXPECT_LE(c, 1.0 - std::exp(-p * static_cast<double>(k)) + 1e-12);
    }
  }
}

TEST(ConfidenceWrTest, VisualizationClaims) {
  EXPECT_GT(confidence(0.2, 100, 2.0, InequalitySet::with_replacement()).confidence, 0.80);
  EXPECT_GT(confidence(0.2, 1000, 2.0, InequalitySet::with_replacement()).confidence, 0.99);
}

TEST(EvaluateTest, ZeroSelectivityIsDegenerate) {
  const BoundResult r = evaluate(PopulationSpec(1000, 0), {SamplingMethod::WithReplacement, 10},
                                 2.0);
  EXPECT_TRUE(r.degenerate);
  EXPECT_DOUBLE_EQ(r.confidence, 0.0);
}

TEST(EvaluateTest, WithReplacementIgnoresRowCount) {
  BoundQuery a{SamplingMethod::WithReplacement, 0.01, 1000, 500, 2.0, {}};
  BoundQuery b = a;
  b.rows = 1'000'000'000;
  EXPECT_EQ(evaluate(a).confidence, evaluate(b).confidence);
  b.rows.reset();
  EXPECT_EQ(evaluate(a).confidence, evaluate(b).confidence);
}

}  // namespace
}  // namespace qbound::wr
