#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lkoethe/ladder.hpp"
#include "lkoethe/log_math.hpp"

using namespace lkoethe;

TEST(LogSumExp, MatchesDirectSumForModerateValues) {
  const std::vector<double> xs{0.1, -2.0, 3.5};
  const double direct = std::log(std::exp(0.1) + std::exp(-2.0) + std::exp(3.5));
  EXPECT_NEAR(log_sum_exp(xs), direct, 1e-14);
}

TEST(LogSumExp, SurvivesValuesThatOverflowLinearScale) {
  const std::vector<double> xs{1000.0, 1000.0};
  EXPECT_NEAR(log_sum_exp(xs), 1000.0 + std::log(2.0), 1e-12);
}

TEST(LogSumExp, EmptyAndAllNegInf) {
  EXPECT_EQ(log_sum_exp(std::vector<double>{}), kNegInf);
  EXPECT_EQ(log_sum_exp(std::vector<double>{kNegInf, kNegInf}), kNegInf);
  EXPECT_DOUBLE_EQ(log_sum_exp(std::vector<double>{kNegInf, 2.0}), 2.0);
}

TEST(LogGrowth, NegInfToNegInfIsZero) {
  EXPECT_EQ(log_growth(kNegInf, kNegInf), 0.0);
  EXPECT_EQ(log_growth(1.0, 3.0), 2.0);
}

TEST(Ladder, ClassifiesTrends) {
  const double r = std::log(1.5);
  EXPECT_EQ(classify_ladder(std::vector<double>{0.0, 0.0, 0.0}), LadderTrend::kStable);
  EXPECT_EQ(classify_ladder(std::vector<double>{0.0, 2.0 * r, 4.0 * r}), LadderTrend::kDivergent);
  // One step grows, the other does not.
  EXPECT_EQ(classify_ladder(std::vector<double>{0.0, 2.0 * r, 2.0 * r}),
            LadderTrend::kUndetermined);
  EXPECT_EQ(classify_ladder(std::vector<double>{0.0, 5.0}), LadderTrend::kUndetermined);
  EXPECT_EQ(classify_ladder(std::vector<double>{kNegInf, kNegInf, kNegInf}), LadderTrend::kStable);
}

TEST(Ladder, UsesLastThreeRungs) {
  EXPECT_EQ(classify_ladder(std::vector<double>{0.0, 10.0, 10.0, 10.0}), LadderTrend::kStable);
}

TEST(Ladder, Validation) {
  EXPECT_THROW(validate_ladder(std::vector<std::size_t>{}), std::exception);
  EXPECT_THROW(validate_ladder(std::vector<std::size_t>{4, 4, 8}), std::exception);
  EXPECT_THROW(validate_ladder(std::vector<std::size_t>{0, 4}), std::exception);
  EXPECT_NO_THROW(validate_ladder(std::vector<std::size_t>{1, 2, 3}));
}
