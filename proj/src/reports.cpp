#include "qbound/reports.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "qbound/confidence.hpp"
#include "qbound/errors.hpp"
#include "qbound/exact.hpp"
#include "qbound/solver.hpp"

namespace qbound::reports {
namespace {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) throw ParseError("not a number: '" + text + "'");
  return value;
}

std::uint64_t to_count(double value, const char* axis) {
  const double rounded = std::round(value);
  if (!(value >= 0.0) || std::abs(rounded - value) > 1e-9 * std::max(1.0, value) ||
      rounded > 9.0e18) {
    throw ParseError(std::string("axis '") + axis + "' needs non-negative integers");
  }
  return static_cast<std::uint64_t>(rounded);
}

std::vector<std::uint64_t> count_axis(const std::string& text, const char* axis) {
  std::vector<std::uint64_t> out;
  for (double v : parse_axis(text)) {
    const std::uint64_t c = to_count(std::round(v), axis);
    if (out.empty() || out.back() != c) out.push_back(c);  // log axes may repeat after rounding
  }
  return out;
}

std::string optional_number(const std::optional<double>& value) {
  return value ? format_number(*value) : "NA";
}

std::string status_name(PointStatus status) {
  switch (status) {
    case PointStatus::Ok: return "ok";
    case PointStatus::Degenerate: return "degenerate";
    case PointStatus::Invalid: return "invalid";
  }
  return "invalid";
}

std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// A grid point before evaluation: population in either p or (n, C) form.
struct Point {
  SamplingMethod method;
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> cardinality;
  double p;
  std::string invalid;  // non-empty: precondition failure
};

std::vector<Point> population_points(const GridSpec& spec) {
  if (spec.k.empty()) throw UsageError("grid needs a non-empty k axis");
  if (spec.methods.empty()) throw UsageError("grid needs at least one method");
  if (spec.p.empty() == spec.cardinality.empty()) {
    throw UsageError("grid needs exactly one of the p or cardinality axes");
  }
  if (!spec.cardinality.empty() && spec.n.empty()) {
    throw UsageError("a cardinality axis needs an n axis");
  }

  std::vector<std::optional<std::uint64_t>> ns;
  if (spec.n.empty()) ns.emplace_back();
  for (std::uint64_t n : spec.n) ns.emplace_back(n);

  std::vector<Point> points;
  for (SamplingMethod method : spec.methods) {
    for (const auto& n : ns) {
      auto add = [&](std::optional<std::uint64_t> c, double p) {
        Point point{method, n, c, p, {}};
        if (n && *n == 0) point.invalid = "n must be positive";
        else if (c && n && *c > *n) point.invalid = "cardinality exceeds n";
        else if (!(p >= 0.0 && p <= 1.0)) point.invalid = "p outside [0,1]";
        else if (method == SamplingMethod::WithoutReplacement && !n) {
          point.invalid = "wor needs n";
        }
        points.push_back(std::move(point));
      };
      if (!spec.cardinality.empty()) {
        for (std::uint64_t c : spec.cardinality) {
          add(c, static_cast<double>(c) / static_cast<double>(std::max<std::uint64_t>(*n, 1)));
        }
      } else {
        for (double p : spec.p) {
          if (n && p >= 0.0 && p <= 1.0) {
            // Integers are authoritative once n is known.
            const auto c = static_cast<std::uint64_t>(std::llround(p * static_cast<double>(*n)));
            add(c, static_cast<double>(c) / static_cast<double>(*n));
          } else {
            add(std::nullopt, p);
          }
        }
      }
    }
  }
  return points;
}

std::string design_problem(const Point& point, std::uint64_t k) {
  if (!point.invalid.empty()) return point.invalid;
  if (k == 0) return "k must be positive";
  if (point.method == SamplingMethod::WithoutReplacement && k >= *point.n) return "wor needs k < n";
  return {};
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "NA";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.9g", value);
  return buffer;
}

// ---------------------------------------------------------------------------

std::vector<Table1Row> table1(std::uint64_t rows, double q) {
  std::vector<Table1Row> out;
  out.reserve(kTable1Cardinalities.size());
  for (std::uint64_t c : kTable1Cardinalities) {
    Table1Row row;
    row.cardinality = c;
    row.p = static_cast<double>(c) / static_cast<double>(rows);
    if (c <= rows) {
      const PopulationSpec pop(rows, c);
      for (std::size_t i = 0; i < kTable1SampleSizes.size(); ++i) {
        const std::uint64_t k = kTable1SampleSizes[i];
        row.cells[2 * i] =
            evaluate(pop, {SamplingMethod::WithReplacement, k}, q).confidence;
        if (rows >= 2 && k < rows) {
          row.cells[2 * i + 1] =
              evaluate(pop, {SamplingMethod::WithoutReplacement, k}, q).confidence;
        }
      }
    }
    out.push_back(row);
  }
  return out;
}

double round_two_decimals(double value) {
  if (value > 0.995) return 1.0;
  return std::round(value * 100.0) / 100.0;
}

std::string format_two_decimals(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", round_two_decimals(value));
  return buffer;
}

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows) {
  static constexpr const char* kCells[] = {"R_100",  "NR_100",   "R_1000",
                                           "NR_1000", "R_10000", "NR_10000"};
  out << "p,C";
  for (const char* name : kCells) out << ',' << name;
  for (const char* name : kCells) out << ',' << name << "_2dp";
  out << '\n';
  for (const Table1Row& row : rows) {
    out << format_number(row.p) << ',' << row.cardinality;
    for (const auto& cell : row.cells) out << ',' << optional_number(cell);
    for (const auto& cell : row.cells) out << ',' << (cell ? format_two_decimals(*cell) : "NA");
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

std::vector<double> parse_axis(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw ParseError("empty axis");
  const bool is_lin = text.rfind("lin:", 0) == 0;
  const bool is_log = text.rfind("log:", 0) == 0;
  if (is_lin || is_log) {
    const auto parts = split(text.substr(4), ':');
    if (parts.size() != 3) throw ParseError("range axis must be kind:start:stop:count");
    const double start = parse_double(parts[0]);
    const double stop = parse_double(parts[1]);
    const double count_d = parse_double(parts[2]);
    if (!(count_d >= 1.0) || count_d != std::floor(count_d)) {
      throw ParseError("range count must be a positive integer");
    }
    const auto count = static_cast<std::size_t>(count_d);
    if (is_log && !(start > 0.0 && stop > 0.0)) throw ParseError("log axis bounds must be > 0");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      out[i] = is_lin ? start + t * (stop - start)
                      : std::exp(std::log(start) + t * (std::log(stop) - std::log(start)));
    }
    // Pin endpoints exactly.
    out.front() = start;
    if (count > 1) out.back() = stop;
    return out;
  }
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) {
    if (item.empty()) throw ParseError("empty axis value");
    out.push_back(parse_double(item));
  }
  return out;
}

GridSpec parse_grid_spec_text(const std::string& text) {
  std::istringstream in(text);
  return parse_grid_spec(in);
}

GridSpec parse_grid_spec(std::istream& in) {
  GridSpec spec;
  spec.methods.clear();
  std::string line;
  std::size_t line_number = 0;
  bool saw_method = false;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ParseError("grid line " + std::to_string(line_number) + ": expected key=value");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    try {
      if (key == "name") {
        if (value.empty() || value.find_first_of("/\\") != std::string::npos) {
          throw ParseError("name must be a plain file stem");
        }
        spec.name = value;
      } else if (key == "method") {
        saw_method = true;
        for (const std::string& m : split(value, ',')) {
          spec.methods.push_back(parse_sampling_method(m));
        }
      } else if (key == "p") {
        spec.p = parse_axis(value);
      } else if (key == "cardinality" || key == "C") {
        spec.cardinality = count_axis(value, "cardinality");
      } else if (key == "k") {
        spec.k = count_axis(value, "k");
      } else if (key == "q") {
        spec.q = parse_axis(value);
      } else if (key == "n") {
        spec.n = count_axis(value, "n");
      } else if (key == "hoeffding") {
        if (value != "true" && value != "false") throw ParseError("hoeffding must be true or false");
        spec.with_hoeffding = value == "true";
      } else if (key == "confidence") {
        spec.confidence = parse_double(value);
      } else {
        throw ParseError("unknown key '" + key + "'");
      }
    } catch (const std::exception& e) {
      throw ParseError("grid line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  if (!saw_method) spec.methods = {SamplingMethod::WithReplacement};
  if (spec.k.empty()) throw ParseError("grid: missing k axis");
  if (spec.q.empty() && !spec.confidence) throw ParseError("grid: missing q axis");
  if (spec.p.empty() == spec.cardinality.empty()) {
    throw ParseError("grid: give exactly one of p or cardinality");
  }
  if (!spec.cardinality.empty() && spec.n.empty()) {
    throw ParseError("grid: cardinality axis needs n");
  }
  if (spec.confidence && !(*spec.confidence > 0.0 && *spec.confidence < 1.0)) {
    throw ParseError("grid: confidence must lie in (0, 1)");
  }
  return spec;
}

std::vector<SeriesRecord> figure_series(const GridSpec& spec, const SeriesOptions& options) {
  std::vector<SeriesRecord> records;
  for (const Point& point : population_points(spec)) {
    for (std::uint64_t k : spec.k) {
      for (double q : spec.q) {
        SeriesRecord record;
        record.method = point.method;
        record.n = point.n;
        record.cardinality = point.cardinality;
        record.p = point.p;
        record.k = k;
        record.q = q;
        std::string problem = design_problem(point, k);
        if (problem.empty() && !(q >= 1.0 && std::isfinite(q))) problem = "q must be >= 1";
        if (!problem.empty()) {
          record.status = PointStatus::Invalid;
          record.note = std::move(problem);
          records.push_back(std::move(record));
          continue;
        }

        const InequalitySet set = default_inequalities(point.method, spec.with_hoeffding);
        record.bound = evaluate(BoundQuery{point.method, point.p, point.n, k, q, set});
        if (record.bound.degenerate) record.status = PointStatus::Degenerate;

        if (point.n && point.cardinality) {
          const PopulationSpec pop(*point.n, *point.cardinality);
          const SampleDesign design{point.method, k};
          if (options.with_exact) record.exact = exact::exact_confidence(pop, design, q);
          if (options.with_simulation) {
            // Each point gets its own seed stream so that adding points to
            // a grid does not perturb the others.
            const std::uint64_t point_seed = mc::splitmix64(
                options.seed ^ mc::splitmix64(records.size() + 0x51ed27ULL));
            record.simulation = mc::run_simulation(
                {pop, design, q, options.trials, point_seed, false});
          }
        }
        records.push_back(std::move(record));
      }
    }
  }
  return records;
}

void write_series_csv(std::ostream& out, const std::vector<SeriesRecord>& records,
                      const SeriesOptions& options) {
  static constexpr Inequality kColumns[] = {
      Inequality::Chernoff, Inequality::Bernstein, Inequality::Hoeffding,
      Inequality::HoeffdingSerfling, Inequality::BernsteinSerfling};
  out << "method,n,cardinality,p,k,q";
  for (Inequality kind : kColumns) {
    out << ',' << to_string(kind) << "_over," << to_string(kind) << "_under";
  }
  out << ",omega,psi,confidence,omega_source,psi_source,status,note";
  if (options.with_exact) out << ",exact_confidence";
  if (options.with_simulation) out << ",sim_rate,sim_stderr,sim_trials";
  out << '\n';

  for (const SeriesRecord& r : records) {
    out << to_string(r.method) << ',' << (r.n ? std::to_string(*r.n) : "NA") << ','
        << (r.cardinality ? std::to_string(*r.cardinality) : "NA") << ',' << format_number(r.p)
        << ',' << r.k << ',' << format_number(r.q);
    const bool evaluated = r.status != PointStatus::Invalid;
    for (Inequality kind : kColumns) {
      for (Side side : {Side::Over, Side::Under}) {
        const BoundTerm* term = evaluated ? r.bound.find(kind, side) : nullptr;
        out << ',' << (term && term->applicable ? format_number(term->probability) : "NA");
      }
    }
    if (evaluated) {
      out << ',' << format_number(r.bound.omega) << ',' << format_number(r.bound.psi) << ','
          << format_number(r.bound.confidence) << ','
          << (r.bound.omega_source ? to_string(*r.bound.omega_source) : "NA") << ','
          << (r.bound.psi_source ? to_string(*r.bound.psi_source) : "NA");
    } else {
      out << ",NA,NA,NA,NA,NA";
    }
    out << ',' << status_name(r.status) << ',' << csv_escape(r.note);
    if (options.with_exact) out << ',' << optional_number(r.exact);
    if (options.with_simulation) {
      if (r.simulation) {
        out << ',' << format_number(r.simulation->empirical_rate) << ','
            << format_number(r.simulation->standard_error) << ',' << r.simulation->trials;
      } else {
        out << ",NA,NA,NA";
      }
    }
    out << '\n';
  }
}

std::vector<QuantileRecord> quantile_series(const GridSpec& spec) {
  if (!spec.confidence) throw UsageError("quantile series needs a confidence target");
  std::vector<QuantileRecord> records;
  for (const Point& point : population_points(spec)) {
    for (std::uint64_t k : spec.k) {
      QuantileRecord record;
      record.method = point.method;
      record.n = point.n;
      record.cardinality = point.cardinality;
      record.p = point.p;
      record.k = k;
      record.target_confidence = *spec.confidence;
      std::string problem = design_problem(point, k);
      if (!problem.empty()) {
        record.status = PointStatus::Invalid;
        record.note = std::move(problem);
      } else if (point.p == 0.0) {
        record.status = PointStatus::Degenerate;
      } else {
        solver::PlanQuery query;
        query.method = point.method;
        query.p = point.p;
        query.rows = point.n;
        query.inequalities = default_inequalities(point.method, spec.with_hoeffding);
        query.target_confidence = *spec.confidence;
        query.k = k;
        const solver::QPlan plan = solver::q_at_confidence(query);
        record.q = plan.q;
        if (!plan.reachable()) record.note = "unreachable";
      }
      records.push_back(std::move(record));
    }
  }
  return records;
}

void write_quantile_csv(std::ostream& out, const std::vector<QuantileRecord>& records) {
  out << "method,n,cardinality,p,k,target_confidence,q,status,note\n";
  for (const QuantileRecord& r : records) {
    out << to_string(r.method) << ',' << (r.n ? std::to_string(*r.n) : "NA") << ','
        << (r.cardinality ? std::to_string(*r.cardinality) : "NA") << ',' << format_number(r.p)
        << ',' << r.k << ',' << format_number(r.target_confidence) << ','
        << optional_number(r.q) << ',' << status_name(r.status) << ',' << csv_escape(r.note)
        << '\n';
  }
}

std::vector<GapSummary> summarize_gaps(const std::vector<SeriesRecord>& records) {
  std::map<std::pair<int, std::uint64_t>, GapSummary> groups;
  for (const SeriesRecord& r : records) {
    if (!r.simulation || r.status == PointStatus::Invalid) continue;
    const double gap = r.simulation->empirical_rate - r.bound.confidence;
    auto [it, inserted] = groups.try_emplace({static_cast<int>(r.method), r.k},
                                             GapSummary{r.method, r.k, 0, 0.0, gap, gap});
    GapSummary& g = it->second;
    g.mean_gap += gap;
    g.max_gap = std::max(g.max_gap, gap);
    g.min_gap = std::min(g.min_gap, gap);
    ++g.points;
  }
  std::vector<GapSummary> out;
  for (auto& [key, g] : groups) {
    g.mean_gap /= static_cast<double>(g.points);
    out.push_back(g);
  }
  return out;
}

void write_gap_csv(std::ostream& out, const std::vector<GapSummary>& gaps) {
  out << "method,k,points,mean_gap,min_gap,max_gap\n";
  for (const GapSummary& g : gaps) {
    out << to_string(g.method) << ',' << g.k << ',' << g.points << ','
        << format_number(g.mean_gap) << ',' << format_number(g.min_gap) << ','
        << format_number(g.max_gap) << '\n';
  }
}

}  // namespace qbound::reports
