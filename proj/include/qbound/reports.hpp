#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qbound/bounds.hpp"
#include "qbound/core.hpp"
#include "qbound/montecarlo.hpp"

namespace qbound::reports {

// Full-precision numbers in every CSV use this format (9 significant digits).
std::string format_number(double value);

// ---------------------------------------------------------------------------
// Reference table: confidence that Q-error <= q for the 18 cardinalities on a
// 10^6-row table, at k in {100, 1000, 10000}, with (R) and without (NR)
// replacement.

inline constexpr std::array<std::uint64_t, 18> kTable1Cardinalities = {
    166,   333,   500,   666,    833,    1000,   1666,   3333,   5000,
    6666,  8333,  10000, 166666, 333333, 500000, 666666, 833333, 1000000};
inline constexpr std::array<std::uint64_t, 3> kTable1SampleSizes = {100, 1000, 10000};

struct Table1Row {
  std::uint64_t cardinality = 0;
  double p = 0.0;
  // Ordered R@100, NR@100, R@1000, NR@1000, R@10000, NR@10000.
  // Empty when the cell is not defined (C > n, or k >= n without replacement).
  std::array<std::optional<double>, 6> cells;
};

std::vector<Table1Row> table1(std::uint64_t rows = 1'000'000, double q = 2.0);

// Two-decimal display rule of the reference table: values above 0.995 print
// as 1.00, everything else rounds to the nearest hundredth.
double round_two_decimals(double value);
std::string format_two_decimals(double value);

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows);

// ---------------------------------------------------------------------------
// Grid sweeps for plotting.

struct GridSpec {
  std::string name = "series";
  std::vector<SamplingMethod> methods = {SamplingMethod::WithReplacement};
  std::vector<double> p;                     // either p ...
  std::vector<std::uint64_t> cardinality;    // ... or cardinality (needs n)
  std::vector<std::uint64_t> k;
  std::vector<double> q;
  std::vector<std::uint64_t> n;              // optional for wr
  bool with_hoeffding = false;
  std::optional<double> confidence;          // also emit q at this confidence
};

// key = value lines; see docs/grid-spec.md. Throws ParseError with the line number.
GridSpec parse_grid_spec(std::istream& in);
GridSpec parse_grid_spec_text(const std::string& text);

// Expands "a,b,c", "lin:start:stop:count" or "log:start:stop:count".
std::vector<double> parse_axis(const std::string& text);

struct SeriesOptions {
  bool with_exact = false;
  bool with_simulation = false;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
};

enum class PointStatus { Ok, Degenerate, Invalid };

struct SeriesRecord {
  SamplingMethod method = SamplingMethod::WithReplacement;
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> cardinality;
  double p = 0.0;
  std::uint64_t k = 0;
  double q = 1.0;
  PointStatus status = PointStatus::Ok;
  std::string note;  // reason for Invalid
  BoundResult bound;
  std::optional<double> exact;
  std::optional<mc::SimulationSummary> simulation;
};

// One record per grid point in axis order method > n > p|C > k > q.
std::vector<SeriesRecord> figure_series(const GridSpec& spec, const SeriesOptions& options = {});
void write_series_csv(std::ostream& out, const std::vector<SeriesRecord>& records,
                      const SeriesOptions& options);

struct QuantileRecord {
  SamplingMethod method = SamplingMethod::WithReplacement;
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> cardinality;
  double p = 0.0;
  std::uint64_t k = 0;
  double target_confidence = 0.95;
  std::optional<double> q;  // empty: unreachable or invalid
  PointStatus status = PointStatus::Ok;
  std::string note;
};

// Smallest q reaching spec.confidence at every (method, n, p|C, k).
std::vector<QuantileRecord> quantile_series(const GridSpec& spec);
void write_quantile_csv(std::ostream& out, const std::vector<QuantileRecord>& records);

// Mean and max of (empirical rate - bound) per (method, k) over records with
// simulation data. Positive gaps mean the bound is conservative.
struct GapSummary {
  SamplingMethod method;
  std::uint64_t k;
  std::size_t points;
  double mean_gap;
  double max_gap;
  double min_gap;
};
std::vector<GapSummary> summarize_gaps(const std::vector<SeriesRecord>& records);
void write_gap_csv(std::ostream& out, const std::vector<GapSummary>& gaps);

}  // namespace qbound::reports
