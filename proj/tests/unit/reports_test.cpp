#include <gtest/gtest.h>

#include <sstream>

#include "qbound/errors.hpp"
#include "qbound/reports.hpp"

namespace qbound::reports {
namespace {

// Printed cells of the reference table (R/NR at k = 100, 1000, 10000).
constexpr double kPrinted[18][6] = {
    {0.00, 0.00, 0.00, 0.00, 0.00, 0.00}, {0.00, 0.00, 0.00, 0.00, 0.12, 0.00},
    {0.00, 0.00, 0.00, 0.00, 0.39, 0.00}, {0.00, 0.00, 0.00, 0.00, 0.56, 0.00},
    {0.00, 0.00, 0.00, 0.00, 0.68, 0.00}, {0.00, 0.00, 0.00, 0.00, 0.76, 0.00},
    {0.00, 0.00, 0.00, 0.00, 0.92, 0.42}, {0.00, 0.00, 0.12, 0.00, 0.99, 0.85},
    {0.00, 0.00, 0.39, 0.00, 1.00, 0.96}, {0.00, 0.00, 0.56, 0.00, 1.00, 0.99},
    {0.00, 0.00, 0.68, 0.00, 1.00, 1.00}, {0.00, 0.00, 0.76, 0.00, 1.00, 1.00},
    {0.92, 0.75, 1.00, 1.00, 1.00, 1.00}, {0.99, 1.00, 1.00, 1.00, 1.00, 1.00},
    {1.00, 1.00, 1.00, 1.00, 1.00, 1.00}, {1.00, 1.00, 1.00, 1.00, 1.00, 1.00},
    {1.00, 1.00, 1.00, 1.00, 1.00, 1.00}, {1.00, 1.00, 1.00, 1.00, 1.00, 1.00},
};

TEST(ReferenceTableTest, ReproducesEveryPrintedCell) {
  const auto rows = table1();
  ASSERT_EQ(rows.size(), 18u);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    EXPECT_EQ(rows[r].cardinality, kTable1Cardinalities[r]);
    for (std::size_t c = 0; c < 6; ++c) {
      ASSERT_TRUE(rows[r].cells[c].has_value());
      EXPECT_DOUBLE_EQ(round_two_decimals(*rows[r].cells[c]), kPrinted[r][c])
          << "C=" << rows[r].cardinality << " column " << c << " value " << *rows[r].cells[c];
    }
  }
}

TEST(ReferenceTableTest, RoundingRule) {
  EXPECT_DOUBLE_EQ(round_two_decimals(0.9951), 1.0);
  EXPECT_DOUBLE_EQ(round_two_decimals(0.99398), 0.99);
  EXPECT_DOUBLE_EQ(round_two_decimals(0.3907), 0.39);
  EXPECT_EQ(format_two_decimals(0.0), "0.00");
  EXPECT_EQ(format_two_decimals(0.999), "1.00");
}

TEST(ReferenceTableTest, CsvLayout) {
  std::ostringstream out;
  write_table1_csv(out, table1());
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header,
            "p,C,R_100,NR_100,R_1000,NR_1000,R_10000,NR_10000,R_100_2dp,NR_100_2dp,R_1000_2dp,"
            "NR_1000_2dp,R_10000_2dp,NR_10000_2dp");
  std::string line;
  std::size_t count = 0;
  std::string c5000;
  while (std::getline(in, line)) {
    ++count;
    if (line.rfind("0.005,5000,", 0) == 0) c5000 = line;
  }
  EXPECT_EQ(count, 18u);
  EXPECT_NE(c5000.find(",0.390722401,"), std::string::npos) << c5000;
  EXPECT_EQ(out.str().find('\r'), std::string::npos);
}

TEST(ReferenceTableTest, SmallTablesMarkUndefinedCells) {
  const auto rows = table1(5000, 2.0);
  std::ostringstream out;
  write_table1_csv(out, rows);
  EXPECT_NE(out.str().find("NA"), std::string::npos);
  // C = 5000 = n: NR at k = 10000 is undefined, R is 1.
  EXPECT_FALSE(rows[8].cells[5].has_value());
  EXPECT_TRUE(rows[8].cells[4].has_value());
  EXPECT_FALSE(rows[12].cells[0].has_value());  // C > n
}

TEST(AxisTest, ParsesListsAndRanges) {
  EXPECT_EQ(parse_axis("1,2.5,10"), (std::vector<double>{1, 2.5, 10}));
  const auto lin = parse_axis("lin:1:10:10");
  ASSERT_EQ(lin.size(), 10u);
  EXPECT_DOUBLE_EQ(lin[3], 4.0);
  const auto log = parse_axis("log:1e-4:1:5");
  ASSERT_EQ(log.size(), 5u);
  EXPECT_DOUBLE_EQ(log.front(), 1e-4);
  EXPECT_NEAR(log[1], 1e-3, 1e-15);
  EXPECT_DOUBLE_EQ(log.back(), 1.0);
  EXPECT_THROW(parse_axis("log:0:1:5"), ParseError);
  EXPECT_THROW(parse_axis("lin:1:2"), ParseError);
  EXPECT_THROW(parse_axis("1,,2"), ParseError);
  EXPECT_THROW(parse_axis("abc"), ParseError);
}

TEST(GridSpecTest, ParsesKeyValueLines) {
  const GridSpec spec = parse_grid_spec_text(
      "# q sweep at several sample sizes\n"
      "name = fig1\n"
      "method = wr, wor\n"
      "p = 0.2\n"
      "k = 100,1000\n"
      "q = lin:1:10:19\n"
      "n = 1000000000\n"
      "hoeffding = true\n"
      "confidence = 0.95\n");
  EXPECT_EQ(spec.name, "fig1");
  EXPECT_EQ(spec.methods.size(), 2u);
  EXPECT_EQ(spec.k, (std::vector<std::uint64_t>{100, 1000}));
  EXPECT_EQ(spec.q.size(), 19u);
  EXPECT_TRUE(spec.with_hoeffding);
  EXPECT_EQ(*spec.confidence, 0.95);
}

TEST(GridSpecTest, ErrorsNameTheLine) {
  try {
    parse_grid_spec_text("k=10\nq=2\np=0.1\nbogus=1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_grid_spec_text("k=10\nq=2\n"), ParseError);  // no population axis
  EXPECT_THROW(parse_grid_spec_text("k=10\nq=2\ncardinality=5\n"), ParseError);  // needs n
  EXPECT_THROW(parse_grid_spec_text("k=10\nq=2\np=0.1\nmethod=xyz\n"), ParseError);
}

TEST(FigureSeriesTest, QSweepAtFixedSelectivity) {
  GridSpec spec;
  spec.p = {0.2};
  spec.k = {100};
  spec.q = parse_axis("lin:1:10:91");
  spec.with_hoeffding = true;
  const auto records = figure_series(spec);
  ASSERT_EQ(records.size(), 91u);
  double previous = -1.0;
  for (const SeriesRecord& r : records) {
    EXPECT_EQ(r.status, PointStatus::Ok);
    EXPECT_GE(r.bound.confidence, previous);
    previous = r.bound.confidence;
    EXPECT_NE(r.bound.find(Inequality::Hoeffding, Side::Over), nullptr);
  }
  // q = 2 is the 11th point.
  EXPECT_DOUBLE_EQ(records[10].q, 2.0);
  EXPECT_GT(records[10].bound.confidence, 0.80);
  // pq <= 1 for q <= 5: Hoeffding under is inapplicable and prints NA.
  EXPECT_FALSE(records[10].bound.find(Inequality::Hoeffding, Side::Under)->applicable);
  std::ostringstream out;
  write_series_csv(out, records, {});
  std::istringstream lines(out.str());
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_EQ(header.rfind("method,n,cardinality,p,k,q,chernoff_over,", 0), 0u);
  EXPECT_NE(first.find("NA"), std::string::npos);
}

TEST(FigureSeriesTest, BillionRowSweep) {
  const GridSpec spec = parse_grid_spec_text(
      "method=wr,wor\np=log:1e-4:1:9\nk=100,1000,10000\nq=2\nn=1000000000\n");
  const auto records = figure_series(spec);
  EXPECT_EQ(records.size(), 2u * 9u * 3u);
  for (const SeriesRecord& r : records) {
    EXPECT_GE(r.bound.confidence, 0.0);
    EXPECT_LE(r.bound.confidence, 1.0);
    ASSERT_TRUE(r.n.has_value());
    EXPECT_EQ(*r.n, 1'000'000'000u);
  }
}

TEST(FigureSeriesTest, DegenerateAndInvalidPointsAreKept) {
  GridSpec spec;
  spec.methods = {SamplingMethod::WithReplacement, SamplingMethod::WithoutReplacement};
  spec.cardinality = {0, 50};
  spec.n = {100};
  spec.k = {10, 100};
  spec.q = {2.0};
  const auto records = figure_series(spec, {true, false, 0, 0});
  ASSERT_EQ(records.size(), 8u);
  std::size_t degenerate = 0, invalid = 0;
  for (const SeriesRecord& r : records) {
    if (r.status == PointStatus::Degenerate) {
      ++degenerate;
      EXPECT_DOUBLE_EQ(r.bound.confidence, 0.0);
    }
    if (r.status == PointStatus::Invalid) ++invalid;  // wor with k = n
  }
  EXPECT_EQ(degenerate, 3u);
  EXPECT_EQ(invalid, 2u);
  std::ostringstream out;
  write_series_csv(out, records, {true, false, 0, 0});
  EXPECT_NE(out.str().find(",degenerate,"), std::string::npos);
  EXPECT_NE(out.str().find(",invalid,wor needs k < n,"), std::string::npos);
}

TEST(FigureSeriesTest, ExactAndSimulationColumns) {
  GridSpec spec;
  spec.methods = {SamplingMethod::WithReplacement, SamplingMethod::WithoutReplacement};
  spec.cardinality = {5000};
  spec.n = {1'000'000};
  spec.k = {1000};
  spec.q = {2.0};
  const SeriesOptions options{true, true, 2000, 7};
  const auto records = figure_series(spec, options);
  ASSERT_EQ(records.size(), 2u);
  for (const SeriesRecord& r : records) {
    ASSERT_TRUE(r.exact.has_value());
    ASSERT_TRUE(r.simulation.has_value());
    EXPECT_GE(*r.exact, r.bound.confidence);
  }
  const auto gaps = summarize_gaps(records);
  ASSERT_EQ(gaps.size(), 2u);
  EXPECT_EQ(gaps[0].points, 1u);
  // Same options, same output.
  std::ostringstream a, b;
  write_series_csv(a, records, options);
  write_series_csv(b, figure_series(spec, options), options);
  EXPECT_EQ(a.str(), b.str());
}

TEST(QuantileSeriesTest, NinetyFivePercentCurve) {
  const GridSpec spec =
      parse_grid_spec_text("p=log:1e-3:1:7\nk=100,1000,10000\nconfidence=0.95\n");
  const auto records = quantile_series(spec);
  ASSERT_EQ(records.size(), 21u);
  for (const QuantileRecord& r : records) {
    if (r.q) EXPECT_GE(*r.q, 1.0);
  }
  std::ostringstream out;
  write_quantile_csv(out, records);
  EXPECT_EQ(out.str().rfind("method,n,cardinality,p,k,target_confidence,q,status,note\n", 0), 0u);
}

TEST(FormatTest, NineSignificantDigits) {
  EXPECT_EQ(format_number(0.390722401028712), "0.390722401");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(1e-20), "1e-20");
}

}  // namespace
}  // namespace qbound::reports
