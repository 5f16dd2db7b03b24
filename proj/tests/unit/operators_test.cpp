#include <gtest/gtest.h>

#include <cmath>

#include "lkoethe/errors.hpp"
#include "lkoethe/extractor.hpp"
#include "lkoethe/operators.hpp"
#include "lkoethe/random.hpp"
#include "oracles.hpp"

using namespace lkoethe;

TEST(Operators, ApplyAndSupport) {
  const OperatorRep dense = DenseOperator(2, 3, {1, 0, 2, 0, 0, -1});
  const auto y = apply(dense, GradedVector({1.0, 2.0}), 3);
  EXPECT_EQ(std::vector<double>(y.coeffs().begin(), y.coeffs().end()),
            (std::vector<double>{1, 0, 0}));
  EXPECT_EQ(image_support(dense, 1), (std::vector<std::size_t>{1, 3}));
  EXPECT_THROW(apply(dense, GradedVector({1.0}), 3), DimMismatch);
  // Zero outside the stored block.
  const auto padded = apply(dense, GradedVector({0.0, 1.0, 5.0}), 4);
  EXPECT_EQ(std::vector<double>(padded.coeffs().begin(), padded.coeffs().end()),
            (std::vector<double>{0, 0, -1, 0}));
}

TEST(Operators, RankOneProbeMapsBasis) {
  const OperatorRep t = rank_one_probe(2, 3);
  const auto y = apply(t, GradedVector::basis(2, 4), 4);
  EXPECT_EQ(y[2], 1.0);
  EXPECT_EQ(y[0] + y[1] + y[3], 0.0);
  const auto z = apply(t, GradedVector::basis(1, 4), 4);
  for (std::size_t v = 0; v < 4; ++v) EXPECT_EQ(z[v], 0.0);
  EXPECT_THROW(RankOneOperator(0, 1, 1.0), InvalidInput);
}

TEST(Operators, QuasiDiagonalRejectsDuplicates) {
  EXPECT_THROW(QuasiDiagonalOperator({{1, 1, 1.0}, {1, 2, 1.0}}), InvalidInput);
  const QuasiDiagonalOperator d({{2, 1, 1.0}, {1, 1, 1.0}});
  EXPECT_FALSE(d.injective());
  EXPECT_EQ(d.entries().front().n, 1U);
}

// The probe's seminorm is b_v^r / a_i^N.
TEST(Operators, RankOneSeminormIsEntryRatio) {
  Rng rng(3);
  const auto a = oracle::random_matrix(rng, 3, 5);
  const auto b = oracle::random_matrix(rng, 3, 5);
  for (const auto& norm : {NormSpec::lp(1), NormSpec::lp(2), NormSpec::c0()}) {
    const auto exact = log_opnorm_exact(rank_one_probe(4, 2), a, b, norm, 3, 2);
    ASSERT_TRUE(exact.has_value());
    EXPECT_NEAR(*exact, b.log_entry(3, 2) - a.log_entry(2, 4), 1e-15);
  }
}

TEST(Operators, DenseUpperBoundMatchesColumnOracleUnderL1) {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto a = oracle::random_matrix(rng, 2, 4);
    const auto b = oracle::random_matrix(rng, 2, 5);
    std::vector<oracle::Vec> theta(4, oracle::Vec(5));
    std::vector<double> flat;
    for (auto& row : theta) {
      for (auto& x : row) {
        x = rng.coin() ? rng.uniform(-2, 2) : 0.0;
        flat.push_back(x);
      }
    }
    const OperatorRep op = DenseOperator(4, 5, flat);
    const double expected = std::log(double(oracle::dense_opnorm_l1(theta, a, b, 2, 1)));
    EXPECT_NEAR(log_opnorm_upper_bound(op, a, b, NormSpec::lp(1), 2, 1), expected, 1e-12);
    // The oracle is a lower bound; under l1 the basis directions attain it.
    EXPECT_NEAR(log_opnorm_oracle(op, a, b, NormSpec::lp(1), 2, 1, 20, 1), expected, 1e-12);
    // Under the sup norm the upper bound dominates the row-sum value.
    const double sup_exact = std::log(double(oracle::dense_opnorm_sup(theta, a, b, 2, 1)));
    EXPECT_GE(log_opnorm_upper_bound(op, a, b, NormSpec::c0(), 2, 1), sup_exact - 1e-12);
    EXPECT_LE(log_opnorm_oracle(op, a, b, NormSpec::c0(), 2, 1, 50, 2), sup_exact + 1e-12);
    EXPECT_GE(log_opnorm_oracle(op, a, b, NormSpec::c0(), 2, 1, 50, 2), sup_exact - std::log(1.02));
  }
}

TEST(Operators, OracleIsDeterministicAndCapped) {
  Rng rng(1);
  const auto a = oracle::random_matrix(rng, 2, 12);
  const auto b = oracle::random_matrix(rng, 2, 12);
  const OperatorRep qd = QuasiDiagonalOperator::identity(12);
  EXPECT_THROW(log_opnorm_oracle(qd, a, b, NormSpec::lp(2), 1, 1, 10, 1), CapExceeded);
  const auto a6 = a.truncate(2, 6);
  const auto b6 = b.truncate(2, 6);
  EXPECT_EQ(log_opnorm_oracle(qd, a6, b6, NormSpec::lp(2), 1, 2, 30, 5),
            log_opnorm_oracle(qd, a6, b6, NormSpec::lp(2), 1, 2, 30, 5));
}

TEST(Operators, ContinuityCertificateForIdentityOnPowerSeries) {
  const auto a = oracle::power_series(4, 256);
  const OperatorRep id = QuasiDiagonalOperator::identity(256);
  const auto cert = continuity_certificate(id, a, a, NormSpec::lp(1));
  ASSERT_EQ(cert.rows.size(), 4U);
  for (const auto& row : cert.rows) {
    EXPECT_EQ(row.domain_level, row.level);
    EXPECT_NEAR(row.log_bound, 0.0, 1e-12);
  }
}

TEST(Operators, ContinuityFailsForUnboundedShiftUp) {
  // T e_n = n^5 e_n: no level of n^k (k <= 2) controls level 1 of the image.
  const auto a = oracle::power_series(2, 64);
  std::vector<QuasiDiagonalEntry> entries;
  for (std::size_t n = 1; n <= 64; ++n) entries.push_back({n, n, std::pow(double(n), 5.0)});
  const OperatorRep t = QuasiDiagonalOperator(entries);
  EXPECT_THROW(continuity_certificate(t, a, a, NormSpec::lp(1)), ContinuityFailure);
}

TEST(Operators, BoundednessDiagnosticFlagsUnboundedIdentity) {
  const auto a = oracle::power_series(3, 1000);
  const OperatorRep id = QuasiDiagonalOperator::identity(1000);
  const std::vector<std::size_t> ladder{10, 100, 1000};
  const auto diag = boundedness_diagnostic(id, a, a, NormSpec::lp(1), 1, 3, ladder);
  // ||I||_{r,1} = T^{r-1} on n <= T.
  EXPECT_FALSE(diag.divergent[0]);
  EXPECT_TRUE(diag.divergent[1]);
  EXPECT_TRUE(diag.divergent[2]);
  EXPECT_NEAR(diag.log_values[1][2], std::log(1000.0), 1e-9);
  EXPECT_TRUE(diag.exact[1]);
  const std::vector<std::size_t> too_big{10, 2000};
  EXPECT_THROW(boundedness_diagnostic(id, a, a, NormSpec::lp(1), 1, 3, too_big),
               BudgetTooLargeForTruncation);
}
