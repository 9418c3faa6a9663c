#include <gtest/gtest.h>

#include <random>

#include "adcminer/dataset.hpp"
#include "adcminer/error.hpp"
#include "support/generators.hpp"
#include "support/table1.hpp"

namespace {

using namespace adcminer;

TEST(Dataset, Table1Types) {
  const auto d = testkit::table1();
  ASSERT_EQ(d.row_count(), 15U);
  ASSERT_EQ(d.column_count(), 5U);
  EXPECT_EQ(d.column(0).type, ColumnType::String);
  EXPECT_EQ(d.column(1).type, ColumnType::String);
  EXPECT_EQ(d.column(2).type, ColumnType::Numeric);
  EXPECT_EQ(d.column(3).type, ColumnType::Numeric);
  EXPECT_EQ(d.column(4).type, ColumnType::Numeric);
  EXPECT_EQ(d.string_value(14, 0), "Sarah");
  EXPECT_DOUBLE_EQ(d.number(2, 4), 11800.0);
}

TEST(Dataset, HeaderOnlyGivesNoRows) {
  const auto d = parse_csv("a,b\n");
  EXPECT_EQ(d.row_count(), 0U);
  EXPECT_EQ(d.column_count(), 2U);
}

TEST(Dataset, MixedColumnDegradesToString) {
  const auto d = parse_csv("x,y\n1,5\n2,6\na,7\n");
  EXPECT_EQ(d.column(0).type, ColumnType::String);
  EXPECT_EQ(d.column(1).type, ColumnType::Numeric);
}

TEST(Dataset, NullsDoNotBlockNumeric) {
  const auto d = parse_csv("x,y\n1,NA\nNA,b\n3,c\n", CsvOptions{true, "NA"});
  EXPECT_EQ(d.column(0).type, ColumnType::Numeric);
  EXPECT_TRUE(d.is_null(1, 0));
  EXPECT_TRUE(d.is_null(0, 1));
  EXPECT_FALSE(d.is_null(0, 0));
}

TEST(Dataset, NonFiniteIsNotNumeric) {
  EXPECT_FALSE(parse_finite_number("inf"));
  EXPECT_FALSE(parse_finite_number("nan"));
  EXPECT_FALSE(parse_finite_number("1e999"));
  EXPECT_FALSE(parse_finite_number(""));
  EXPECT_FALSE(parse_finite_number("1.5x"));
  EXPECT_EQ(*parse_finite_number("+2.5"), 2.5);
  EXPECT_EQ(*parse_finite_number("-1e3"), -1000.0);
}

TEST(Dataset, QuotingAndCrlf) {
  const auto d = parse_csv("name,note\r\n\"Smith, J\",\"said \"\"hi\"\"\"\r\n\r\nx,\"multi\nline\"\r\n");
  ASSERT_EQ(d.row_count(), 2U);
  EXPECT_EQ(d.string_value(0, 0), "Smith, J");
  EXPECT_EQ(d.string_value(0, 1), "said \"hi\"");
  EXPECT_EQ(d.string_value(1, 1), "multi\nline");
}

TEST(Dataset, RaggedRowNamesIndex) {
  try {
    parse_csv("a,b\n1,2\n3\n");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos) << e.what();
  }
}

TEST(Dataset, NoHeaderNamesColumns) {
  const auto d = parse_csv("1,x\n2,y\n", CsvOptions{false, ""});
  EXPECT_EQ(d.row_count(), 2U);
  EXPECT_EQ(d.column(0).name, "c0");
  EXPECT_EQ(d.column(1).name, "c1");
}

TEST(Dataset, MissingFileIsDataError) { EXPECT_THROW(load_csv("/nonexistent/file.csv"), DataError); }

TEST(Dataset, LoadIsDeterministic) { EXPECT_EQ(testkit::table1(), testkit::table1()); }

TEST(Dataset, SelectRowsKeepsTypes) {
  const auto d = testkit::table1();
  const auto s = d.select_rows({0, 5, 14});
  ASSERT_EQ(s.row_count(), 3U);
  EXPECT_EQ(s.column(3).type, ColumnType::Numeric);
  EXPECT_EQ(s.string_value(1, 0), "Julia");
  EXPECT_DOUBLE_EQ(s.number(2, 3), 54000.0);
}

TEST(DatasetProperty, CsvRoundTrip) {
  testkit::Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    testkit::ToyShape shape;
    shape.null_rate = trial % 3 == 0 ? 0.2 : 0.0;
    const auto d = testkit::random_toy_dataset(rng, shape);
    const auto again = parse_csv(to_csv(d, "NULL"), CsvOptions{true, "NULL"});
    ASSERT_EQ(d, again) << to_csv(d, "NULL");
    for (std::size_t c = 0; c < d.column_count(); ++c) {
      // An all-null column is numeric by the inference rule, so types survive too.
      ASSERT_EQ(d.column(c).type, again.column(c).type);
    }
  }
}

TEST(DatasetProperty, NumericFormattingRoundTrips) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double v = dist(rng);
    ASSERT_EQ(*parse_finite_number(format_number(v)), v);
  }
}

}  // namespace
