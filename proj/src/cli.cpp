#include "qbound/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "qbound/confidence.hpp"
#include "qbound/errors.hpp"
#include "qbound/estimate.hpp"
#include "qbound/exact.hpp"
#include "qbound/montecarlo.hpp"
#include "qbound/reports.hpp"
#include "qbound/solver.hpp"
#include "qbound/version.hpp"

namespace qbound::cli {
namespace {

using json = nlohmann::ordered_json;

enum class Format { Text, Csv, Json };

Format parse_format(const std::string& text) {
  if (text == "text") return Format::Text;
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw UsageError("unknown format '" + text + "'");
}

json meta() {
  return {{"version", std::string(kVersion)}, {"rng", std::string(mc::kRngAlgorithm)}};
}

std::string scalar_text(const json& value) {
  if (value.is_null()) return "NA";
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number_float()) return reports::format_number(value.get<double>());
  if (value.is_number_integer()) return value.dump();
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

// Flattens query/result/terms into ordered (column, value) pairs. Terms become
// "<inequality>_<side>" columns holding the probability (NA if inapplicable).
std::vector<std::pair<std::string, std::string>> flatten(const json& doc) {
  std::vector<std::pair<std::string, std::string>> fields;
  for (const char* section : {"query", "result"}) {
    if (!doc.contains(section)) continue;
    for (const auto& [key, value] : doc[section].items()) {
      if (value.is_array()) {
        std::string joined;
        for (const auto& item : value) joined += (joined.empty() ? "" : ";") + scalar_text(item);
        fields.emplace_back(key, joined);
      } else {
        fields.emplace_back(key, scalar_text(value));
      }
    }
  }
  if (doc.contains("terms")) {
    for (const auto& term : doc["terms"]) {
      fields.emplace_back(term["inequality"].get<std::string>() + "_" +
                              term["side"].get<std::string>(),
                          scalar_text(term["probability"]));
    }
  }
  return fields;
}

void emit(std::ostream& out, const json& doc, Format format) {
  switch (format) {
    case Format::Json:
      out << doc.dump(2) << '\n';
      return;
    case Format::Csv: {
      const auto fields = flatten(doc);
      for (std::size_t i = 0; i < fields.size(); ++i) {
        out << (i ? "," : "") << csv_field(fields[i].first);
      }
      out << '\n';
      for (std::size_t i = 0; i < fields.size(); ++i) {
        out << (i ? "," : "") << csv_field(fields[i].second);
      }
      out << '\n';
      return;
    }
    case Format::Text: {
      const auto fields = flatten(doc);
      std::size_t width = 0;
      for (const auto& f : fields) width = std::max(width, f.first.size());
      for (const auto& [key, value] : fields) {
        out << key << std::string(width - key.size() + 1, ' ') << value << '\n';
      }
      return;
    }
  }
}

json terms_json(const BoundResult& result) {
  json terms = json::array();
  for (const BoundTerm& term : result.terms) {
    terms.push_back({{"inequality", std::string(to_string(term.inequality))},
                     {"side", std::string(to_string(term.side))},
                     {"probability", term.applicable ? json(term.probability) : json(nullptr)},
                     {"applicable", term.applicable}});
  }
  return terms;
}

json inequality_names(InequalitySet set) {
  json names = json::array();
  for (Inequality kind : set.members()) names.push_back(std::string(to_string(kind)));
  return names;
}

// --p, or --cardinality with --rows. --rows alone may accompany --p.
struct PopulationArgs {
  std::optional<double> p;
  std::optional<std::uint64_t> cardinality;
  std::optional<std::uint64_t> rows;

  void add_to(CLI::App* cmd, bool allow_p) {
    if (allow_p) cmd->add_option("--p", p, "Selectivity in [0,1]");
    cmd->add_option("--cardinality,-C", cardinality, "Rows satisfying the predicate");
    cmd->add_option("--rows,-n", rows, "Table row count n");
  }

  // Returns p and validates the combination.
  double resolve(SamplingMethod method) const {
    if (p && cardinality) throw UsageError("give either --p or --cardinality/--rows, not both");
    if (!p && !cardinality) throw UsageError("missing population: --p or --cardinality/--rows");
    if (cardinality && !rows) throw UsageError("--cardinality needs --rows");
    if (method == SamplingMethod::WithoutReplacement && !rows) {
      throw UsageError("--method wor needs --rows");
    }
    if (cardinality) return PopulationSpec(*rows, *cardinality).selectivity();
    if (!(*p >= 0.0 && *p <= 1.0)) throw DomainError("--p must lie in [0, 1]");
    return *p;
  }

  PopulationSpec population() const {
    if (!cardinality || !rows) throw UsageError("this command needs --cardinality and --rows");
    return PopulationSpec(*rows, *cardinality);
  }

  void describe(json& query) const {
    if (rows) query["rows"] = *rows;
    if (cardinality) query["cardinality"] = *cardinality;
  }
};

struct Common {
  std::string method = "wr";
  std::string format = "text";
  PopulationArgs population;
};

void add_common(CLI::App* cmd, Common& common, bool allow_p) {
  cmd->add_option("--method", common.method, "Sampling method: wr or wor")->required();
  common.population.add_to(cmd, allow_p);
  cmd->add_option("--format", common.format, "Output format: text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
}

std::vector<double> parse_q_list(const std::string& text) {
  std::vector<double> out;
  for (double q : reports::parse_axis(text)) out.push_back(q);
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write '" + path.string() + "'");
  return file;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Q-error confidence bounds for sampling-based cardinality estimation", "qbound"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // bound -------------------------------------------------------------------
  Common bound_args;
  std::uint64_t bound_k = 0;
  double bound_q = 0.0;
  bool bound_hoeffding = false;
  CLI::App* bound = app.add_subcommand("bound", "Lower bound on P(Q-error <= q)");
  add_common(bound, bound_args, true);
  bound->add_option("--k", bound_k, "Sample size")->required();
  bound->add_option("--q", bound_q, "Q-error threshold (>= 1)")->required();
  bound->add_flag("--with-hoeffding", bound_hoeffding, "Add Hoeffding's inequality (wr only)");

  // solve-k -----------------------------------------------------------------
  Common solve_k_args;
  double solve_k_q = 0.0;
  double solve_k_conf = 0.0;
  std::uint64_t solve_k_max = 1'000'000'000;
  bool solve_k_hoeffding = false;
  CLI::App* solve_k = app.add_subcommand("solve-k", "Smallest sample size reaching a confidence");
  add_common(solve_k, solve_k_args, true);
  solve_k->add_option("--q", solve_k_q, "Q-error threshold")->required();
  solve_k->add_option("--confidence", solve_k_conf, "Target confidence in (0,1)")->required();
  solve_k->add_option("--k-max", solve_k_max, "Search cap for k");
  solve_k->add_flag("--with-hoeffding", solve_k_hoeffding, "Add Hoeffding's inequality (wr only)");

  // solve-q -----------------------------------------------------------------
  Common solve_q_args;
  std::uint64_t solve_q_k = 0;
  double solve_q_conf = 0.0;
  double solve_q_max = 1e6;
  bool solve_q_hoeffding = false;
  CLI::App* solve_q = app.add_subcommand("solve-q", "Smallest q guaranteed at a confidence");
  add_common(solve_q, solve_q_args, true);
  solve_q->add_option("--k", solve_q_k, "Sample size")->required();
  solve_q->add_option("--confidence", solve_q_conf, "Target confidence in (0,1)")->required();
  solve_q->add_option("--q-max", solve_q_max, "Search cap for q");
  solve_q->add_flag("--with-hoeffding", solve_q_hoeffding, "Add Hoeffding's inequality (wr only)");

  // exact -------------------------------------------------------------------
  Common exact_args;
  std::uint64_t exact_k = 0;
  double exact_q = 0.0;
  CLI::App* exact_cmd = app.add_subcommand("exact", "Exact P(Q-error <= q) by tail summation");
  add_common(exact_cmd, exact_args, false);
  exact_cmd->add_option("--k", exact_k, "Sample size")->required();
  exact_cmd->add_option("--q", exact_q, "Q-error threshold")->required();

  // simulate ----------------------------------------------------------------
  Common sim_args;
  std::uint64_t sim_k = 0;
  double sim_q = 0.0;
  std::uint64_t sim_trials = 1000;
  std::uint64_t sim_seed = 0;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of P(Q-error <= q)");
  add_common(simulate, sim_args, false);
  simulate->add_option("--k", sim_k, "Sample size")->required();
  simulate->add_option("--q", sim_q, "Q-error threshold")->required();
  simulate->add_option("--trials", sim_trials, "Number of simulated samples")->required();
  simulate->add_option("--seed", sim_seed, "Random seed")->required();

  // table1 ------------------------------------------------------------------
  std::uint64_t table_rows = 1'000'000;
  double table_q = 2.0;
  std::string table_out;
  CLI::App* table = app.add_subcommand("table1", "Reference confidence table as CSV");
  table->add_option("--rows", table_rows, "Table row count n");
  table->add_option("--q", table_q, "Q-error threshold");
  table->add_option("--out", table_out, "Output file (default stdout)");

  // figures -----------------------------------------------------------------
  std::string grid_path;
  std::string figures_dir;
  bool figures_exact = false;
  bool figures_sim = false;
  std::uint64_t figures_trials = 1000;
  std::uint64_t figures_seed = 0;
  CLI::App* figures = app.add_subcommand("figures", "Evaluate a parameter grid into CSV series");
  figures->add_option("--grid", grid_path, "Grid spec file (key=value lines)")->required();
  figures->add_option("--out", figures_dir, "Output directory")->required();
  figures->add_flag("--with-exact", figures_exact, "Add exact-oracle column");
  CLI::Option* sim_flag =
      figures->add_flag("--with-simulation", figures_sim, "Add Monte Carlo columns");
  figures->add_option("--trials", figures_trials, "Trials per point")->needs(sim_flag);
  figures->add_option("--seed", figures_seed, "Random seed")->needs(sim_flag);

  // estimate ----------------------------------------------------------------
  std::string est_input;
  std::string est_predicate;
  std::string est_method = "wr";
  std::uint64_t est_k = 0;
  std::string est_q = "2";
  std::uint64_t est_seed = 0;
  std::optional<double> est_assume_p;
  std::optional<double> est_conf;
  std::string est_format = "text";
  char est_delim = ',';
  bool est_no_header = false;
  bool est_hoeffding = false;
  CLI::App* estimate = app.add_subcommand("estimate", "Sample a CSV table and report bounds");
  estimate->add_option("--input", est_input, "CSV file")->required();
  estimate->add_option("--predicate", est_predicate, "Conjunctive filter, e.g. \"a >= 3 AND b = 'x'\"")
      ->required();
  estimate->add_option("--method", est_method, "Sampling method: wr or wor")->required();
  estimate->add_option("--k", est_k, "Sample size")->required();
  estimate->add_option("--q", est_q, "Comma-separated Q-error thresholds");
  estimate->add_option("--seed", est_seed, "Random seed");
  estimate->add_option("--assume-p", est_assume_p, "Skip ground truth; bound with this p");
  estimate->add_option("--confidence", est_conf, "Also report q reachable at this confidence");
  estimate->add_option("--delimiter", est_delim, "Field delimiter");
  estimate->add_flag("--no-header", est_no_header, "First line is data");
  estimate->add_flag("--with-hoeffding", est_hoeffding, "Add Hoeffding's inequality (wr only)");
  estimate->add_option("--format", est_format, "Output format: text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (bound->parsed()) {
      const SamplingMethod method = parse_sampling_method(bound_args.method);
      if (bound_hoeffding && method != SamplingMethod::WithReplacement) {
        throw UsageError("--with-hoeffding applies only to --method wr");
      }
      const double p = bound_args.population.resolve(method);
      const InequalitySet set = default_inequalities(method, bound_hoeffding);
      const BoundResult result =
          evaluate(BoundQuery{method, p, bound_args.population.rows, bound_k, bound_q, set});
      json doc;
      doc["query"] = {{"command", "bound"}, {"method", std::string(to_string(method))}, {"p", p}};
      bound_args.population.describe(doc["query"]);
      doc["query"]["k"] = bound_k;
      doc["query"]["q"] = bound_q;
      doc["query"]["inequalities"] = inequality_names(set);
      doc["result"] = {
          {"confidence", result.confidence},
          {"confidence_2dp", reports::format_two_decimals(result.confidence)},
          {"omega", result.omega},
          {"psi", result.psi},
          {"omega_source",
           result.omega_source ? json(std::string(to_string(*result.omega_source))) : json()},
          {"psi_source",
           result.psi_source ? json(std::string(to_string(*result.psi_source))) : json()},
          {"degenerate", result.degenerate}};
      doc["terms"] = terms_json(result);
      doc["meta"] = meta();
      emit(out, doc, parse_format(bound_args.format));
      return kExitOk;
    }

    if (solve_k->parsed() || solve_q->parsed()) {
      const bool size_query = solve_k->parsed();
      Common& common = size_query ? solve_k_args : solve_q_args;
      const bool hoeffding = size_query ? solve_k_hoeffding : solve_q_hoeffding;
      solver::PlanQuery query;
      query.method = parse_sampling_method(common.method);
      if (hoeffding && query.method != SamplingMethod::WithReplacement) {
        throw UsageError("--with-hoeffding applies only to --method wr");
      }
      query.p = common.population.resolve(query.method);
      query.rows = common.population.rows;
      query.inequalities = default_inequalities(query.method, hoeffding);
      query.target_confidence = size_query ? solve_k_conf : solve_q_conf;

      json doc;
      doc["query"] = {{"command", size_query ? "solve-k" : "solve-q"},
                      {"method", std::string(to_string(query.method))},
                      {"p", query.p}};
      common.population.describe(doc["query"]);
      doc["query"]["target_confidence"] = query.target_confidence;
      doc["query"]["inequalities"] = inequality_names(query.inequalities);
      if (size_query) {
        query.target_q = solve_k_q;
        query.k_max = solve_k_max;
        doc["query"]["q"] = solve_k_q;
        doc["query"]["k_max"] = solve_k_max;
        const solver::SampleSizePlan plan = solver::min_sample_size(query);
        doc["result"] = {{"unreachable", !plan.reachable()},
                         {"k", plan.k ? json(*plan.k) : json()},
                         {"confidence", plan.confidence},
                         {"search_cap", plan.search_cap}};
      } else {
        query.k = solve_q_k;
        query.q_max = solve_q_max;
        doc["query"]["k"] = solve_q_k;
        doc["query"]["q_max"] = solve_q_max;
        const solver::QPlan plan = solver::q_at_confidence(query);
        doc["result"] = {{"unreachable", !plan.reachable()},
                         {"q", plan.q ? json(*plan.q) : json()},
                         {"confidence", plan.confidence}};
      }
      doc["meta"] = meta();
      emit(out, doc, parse_format(common.format));
      return kExitOk;
    }

    if (exact_cmd->parsed()) {
      const SamplingMethod method = parse_sampling_method(exact_args.method);
      const PopulationSpec pop = exact_args.population.population();
      const SampleDesign design{method, exact_k};
      validate_design(design, pop.rows());
      const auto range = exact::admissible_range(pop.rows(), pop.cardinality(), exact_k, exact_q);
      const double value = exact::exact_confidence(pop, design, exact_q);
      json doc;
      doc["query"] = {{"command", "exact"}, {"method", std::string(to_string(method))}};
      exact_args.population.describe(doc["query"]);
      doc["query"]["k"] = exact_k;
      doc["query"]["q"] = exact_q;
      doc["result"] = {{"exact_confidence", value},
                       {"admissible_lo", range.empty() ? json() : json(range.lo)},
                       {"admissible_hi", range.empty() ? json() : json(range.hi)}};
      doc["meta"] = meta();
      emit(out, doc, parse_format(exact_args.format));
      return kExitOk;
    }

    if (simulate->parsed()) {
      const SamplingMethod method = parse_sampling_method(sim_args.method);
      const PopulationSpec pop = sim_args.population.population();
      const mc::SimulationSummary summary =
          mc::run_simulation({pop, {method, sim_k}, sim_q, sim_trials, sim_seed, false});
      json doc;
      doc["query"] = {{"command", "simulate"}, {"method", std::string(to_string(method))}};
      sim_args.population.describe(doc["query"]);
      doc["query"]["k"] = sim_k;
      doc["query"]["q"] = sim_q;
      doc["query"]["trials"] = sim_trials;
      doc["query"]["seed"] = sim_seed;
      doc["result"] = {{"successes", summary.successes},
                       {"empirical_rate", summary.empirical_rate},
                       {"standard_error", summary.standard_error},
                       {"bound_confidence", evaluate(pop, {method, sim_k}, sim_q).confidence}};
      doc["meta"] = meta();
      emit(out, doc, parse_format(sim_args.format));
      return kExitOk;
    }

    if (table->parsed()) {
      const auto rows = reports::table1(table_rows, table_q);
      if (table_out.empty()) {
        reports::write_table1_csv(out, rows);
      } else {
        std::ofstream file = open_output(table_out);
        reports::write_table1_csv(file, rows);
        if (!file) throw IoError("failed writing '" + table_out + "'");
        out << table_out << '\n';
      }
      return kExitOk;
    }

    if (figures->parsed()) {
      std::ifstream grid_file(grid_path);
      if (!grid_file) throw IoError("cannot open grid spec '" + grid_path + "'");
      const reports::GridSpec spec = reports::parse_grid_spec(grid_file);
      std::error_code ec;
      std::filesystem::create_directories(figures_dir, ec);
      if (ec) throw IoError("cannot create '" + figures_dir + "': " + ec.message());
      const std::filesystem::path dir(figures_dir);

      const reports::SeriesOptions options{figures_exact, figures_sim, figures_trials,
                                           figures_seed};
      std::vector<std::filesystem::path> written;
      if (!spec.q.empty()) {
        const auto records = reports::figure_series(spec, options);
        const auto path = dir / (spec.name + "_bounds.csv");
        std::ofstream file = open_output(path);
        reports::write_series_csv(file, records, options);
        written.push_back(path);
        if (figures_sim) {
          const auto gap_path = dir / (spec.name + "_sim_gaps.csv");
          std::ofstream gap_file = open_output(gap_path);
          reports::write_gap_csv(gap_file, reports::summarize_gaps(records));
          written.push_back(gap_path);
        }
      }
      if (spec.confidence) {
        const auto path = dir / (spec.name + "_q_at_confidence.csv");
        std::ofstream file = open_output(path);
        reports::write_quantile_csv(file, reports::quantile_series(spec));
        written.push_back(path);
      }
      const auto meta_path = dir / (spec.name + "_meta.json");
      std::ofstream meta_file = open_output(meta_path);
      json m = meta();
      m["grid"] = grid_path;
      m["with_exact"] = figures_exact;
      m["with_simulation"] = figures_sim;
      if (figures_sim) {
        m["trials"] = figures_trials;
        m["seed"] = figures_seed;
      }
      meta_file << m.dump(2) << '\n';
      written.push_back(meta_path);
      for (const auto& path : written) out << path.string() << '\n';
      return kExitOk;
    }

    if (estimate->parsed()) {
      ingest::LoadOptions load;
      load.delimiter = est_delim;
      load.header = !est_no_header;
      const ingest::TableData data = ingest::load_table(est_input, load);
      const ingest::Predicate predicate = ingest::parse_predicate(est_predicate);

      ingest::EstimateOptions options;
      options.design = {parse_sampling_method(est_method), est_k};
      if (est_hoeffding && options.design.method != SamplingMethod::WithReplacement) {
        throw UsageError("--with-hoeffding applies only to --method wr");
      }
      options.q_list = parse_q_list(est_q);
      options.seed = est_seed;
      options.assumed_p = est_assume_p;
      options.target_confidence = est_conf;
      options.with_hoeffding = est_hoeffding;
      const ingest::EstimateReport report = ingest::estimate_with_bounds(data, predicate, options);

      json doc;
      doc["query"] = {{"command", "estimate"},
                      {"input", est_input},
                      {"predicate", est_predicate},
                      {"method", std::string(to_string(options.design.method))},
                      {"rows", report.rows},
                      {"columns", data.column_count()},
                      {"k", options.design.k},
                      {"seed", est_seed}};
      json result = {{"hits", report.hits},
                     {"estimate", report.estimate},
                     {"true_cardinality", report.truth ? json(*report.truth) : json()},
                     {"realized_q_error",
                      report.realized_q_error ? json(*report.realized_q_error) : json()},
                     {"bound_p", report.bound_p},
                     {"bound_p_source", report.bound_uses_true_p ? "oracle" : "assumed"}};
      for (const ingest::QConfidence& c : report.confidences) {
        const std::string key = "confidence_q" + reports::format_number(c.q);
        result[key] = c.confidence;
      }
      if (report.q_at_target) {
        result["target_confidence"] = *est_conf;
        result["q_at_target"] = report.q_at_target->q ? json(*report.q_at_target->q) : json();
        result["q_at_target_unreachable"] = !report.q_at_target->reachable();
      }
      doc["result"] = std::move(result);
      doc["meta"] = meta();
      emit(out, doc, parse_format(est_format));
      return kExitOk;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace qbound::cli
