#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "lkoethe/errors.hpp"
#include "lkoethe/random.hpp"
#include "lkoethe/spec_format.hpp"
#include "lkoethe/spec_io.hpp"

using namespace lkoethe;

namespace {
bool bit_identical(std::span<const double> x, std::span<const double> y) {
  return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0;
}
}  // namespace

TEST(SpecFormat, ParsesCommentsArraysAndStrings) {
  const auto doc = spec_format::parse(
      "# header\n"
      "name = \"a \\\"quoted\\\" value\"  # trailing\n"
      "xs = [1, -2.5e3,\n"
      "      +4,   # continued\n"
      "      [5, 6]]\n"
      "alpha.expr = \"ln(n)\"\n");
  EXPECT_EQ(doc.string_field("name"), "a \"quoted\" value");
  const auto& xs = std::get<spec_format::Array>(doc.require("xs").data);
  ASSERT_EQ(xs.size(), 4U);
  EXPECT_EQ(std::get<double>(xs[1].data), -2500.0);
  EXPECT_EQ(std::get<double>(xs[2].data), 4.0);
  EXPECT_TRUE(xs[3].is_array());
  EXPECT_EQ(doc.string_field("alpha.expr"), "ln(n)");
}

TEST(SpecFormat, ErrorsCarryLineAndField) {
  try {
    spec_format::parse("a = 1\nb = [1, 2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "b");
  }
  try {
    spec_format::parse("a = 1\n\nc = 1x\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3U);
    EXPECT_EQ(e.field(), "c");
  }
  EXPECT_THROW(spec_format::parse("a = 1\na = 2\n"), ParseError);
  EXPECT_THROW(spec_format::parse("a 1\n"), ParseError);
}

TEST(SpecFormat, NumbersRoundTripBitForBit) {
  Rng rng(17);
  for (int t = 0; t < 2000; ++t) {
    double x;
    const std::uint64_t bits = rng.next();
    std::memcpy(&x, &bits, sizeof x);
    if (!std::isfinite(x)) continue;
    const auto doc = spec_format::parse("x = " + spec_format::format_number(x) + "\n");
    const double y = doc.number_field("x");
    EXPECT_EQ(std::memcmp(&x, &y, sizeof x), 0) << spec_format::format_number(x);
  }
  const auto doc = spec_format::parse("x = -0\n");
  EXPECT_TRUE(std::signbit(doc.number_field("x")));
}

TEST(MatrixSpec, RoundTripsEveryKind) {
  Rng rng(2);
  std::vector<double> entries(3 * 4);
  for (std::size_t n = 0; n < 4; ++n) {
    double acc = rng.uniform(-3, 3);
    for (std::size_t k = 0; k < 3; ++k) {
      entries[k * 4 + n] = acc;
      acc += rng.uniform(0, 1) / 3.0;
    }
  }
  const std::vector<KoetheMatrixSpec> specs{
      {ExplicitGrid{3, 4, entries}, 3, 4},
      {PowerSeriesInfinite{AlphaFormula{"ln(n)"}}, 4, 100},
      {PowerSeriesFinite{AlphaList{{0.1, 0.2, 1.0 / 3.0}}}, 2, 3},
      {LogFormula{"k * sqrt(n)"}, 3, 50},
  };
  for (const auto& spec : specs) {
    const std::string text = serialize_matrix_spec(spec);
    const auto parsed = parse_matrix_spec(text);
    EXPECT_EQ(parsed, spec) << text;
    EXPECT_EQ(serialize_matrix_spec(parsed), text);
    EXPECT_TRUE(bit_identical(KoetheMatrix::build(parsed).log_entries(),
                              KoetheMatrix::build(spec).log_entries()));
    EXPECT_EQ(spec_digest(parsed), spec_digest(spec));
  }
}

TEST(MatrixSpec, RejectsBadFields) {
  EXPECT_THROW(parse_matrix_spec("kind = \"explicit\"\nlevels = 2\ndims = 2\nentries = [1, 2, 3]\n"),
               ParseError);
  EXPECT_THROW(parse_matrix_spec("kind = \"weird\"\nlevels = 2\ndims = 2\n"), ParseError);
  EXPECT_THROW(parse_matrix_spec("kind = \"expr\"\nlevels = 2\ndims = 2\nexpr = \"k\"\nextra = 1\n"),
               ParseError);
  EXPECT_THROW(parse_matrix_spec("kind = \"expr\"\nlevels = 0\ndims = 2\nexpr = \"k\"\n"),
               ParseError);
}

TEST(MatrixSpec, LoadForwardsValidationFailure) {
  const auto path = std::filesystem::temp_directory_path() / "lkoethe_bad_matrix.spec";
  {
    std::ofstream out(path);
    out << "kind = \"explicit\"\nlevels = 2\ndims = 2\nentries = [[0, 1], [0.5, 0.5]]\n";
  }
  EXPECT_THROW(load_matrix_spec(path), ValidationFailed);
  std::filesystem::remove(path);
  EXPECT_THROW(load_matrix_spec(path), InvalidInput);
}

TEST(OperatorSpec, RoundTripsEveryKind) {
  const std::vector<OperatorRep> ops{
      DenseOperator(2, 3, {1.0, 0.0, -0.1, 2.5, 1e-300, 0.0}),
      RankOneOperator(3, 1, 0.75),
      QuasiDiagonalOperator({{1, 2, 0.5}, {3, 1, -1.0 / 3.0}}),
  };
  for (const auto& op : ops) {
    const std::string text = serialize_operator_spec(op);
    const auto parsed = parse_operator_spec(text);
    EXPECT_EQ(serialize_operator_spec(parsed), text);
    EXPECT_EQ(spec_digest(parsed), spec_digest(op));
  }
}

TEST(OperatorSpec, WrongDenseRowLengthNamesTheRow) {
  try {
    parse_operator_spec(
        "kind = \"dense\"\ndomain_dims = 2\nrange_dims = 2\ntheta = [\n  [1, 0],\n  [0, 1, 5],\n]\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "theta");
    EXPECT_EQ(e.line(), 6U);
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
  }
}

TEST(Digest, Sha256KnownAnswer) {
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
