#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lkoethe/errors.hpp"
#include "lkoethe/expr.hpp"

using lkoethe::Expression;

namespace {
double eval(const char* text, std::vector<double> values = {},
            std::vector<std::string> vars = {"k", "n"}) {
  if (values.empty()) values.assign(vars.size(), 0.0);
  return Expression::parse(text, vars).evaluate(values);
}
}  // namespace

TEST(Expression, Precedence) {
  EXPECT_DOUBLE_EQ(eval("1 + 2 * 3"), 7.0);
  EXPECT_DOUBLE_EQ(eval("2 ^ 3 ^ 2"), 512.0);
  EXPECT_DOUBLE_EQ(eval("-2 ^ 2"), -4.0);
  EXPECT_DOUBLE_EQ(eval("(1 + 2) * 3"), 9.0);
}

TEST(Expression, VariablesAndImplicitMultiplication) {
  EXPECT_DOUBLE_EQ(eval("2k + 1", {3.0, 0.0}), 7.0);
  EXPECT_DOUBLE_EQ(eval("k^2", {4.0, 0.0}), 16.0);
  EXPECT_DOUBLE_EQ(eval("k*ln(n)", {2.0, std::exp(1.5)}), 3.0);
}

TEST(Expression, Functions) {
  EXPECT_DOUBLE_EQ(eval("max(1, 4) + min(2, 3)"), 6.0);
  EXPECT_DOUBLE_EQ(eval("log2(8)"), 3.0);
  EXPECT_DOUBLE_EQ(eval("sqrt(16) + abs(-1) + floor(2.5) + ceil(2.5)"), 10.0);
  EXPECT_NEAR(eval("exp(1) - e"), 0.0, 1e-15);
}

TEST(Expression, Errors) {
  EXPECT_THROW(eval("1 +"), lkoethe::InvalidInput);
  EXPECT_THROW(eval("foo(1)"), lkoethe::InvalidInput);
  EXPECT_THROW(eval("x + 1"), lkoethe::InvalidInput);
  EXPECT_THROW(eval("(1 + 2"), lkoethe::InvalidInput);
}
