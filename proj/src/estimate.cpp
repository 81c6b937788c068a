#include "qbound/estimate.hpp"

#include <unordered_map>

#include "qbound/confidence.hpp"
#include "qbound/errors.hpp"
#include "qbound/exact.hpp"
#include "qbound/montecarlo.hpp"

namespace qbound::ingest {

std::vector<std::uint64_t> sample_rows(std::uint64_t rows, const SampleDesign& design,
                                       std::mt19937_64& rng) {
  if (rows == 0) throw DomainError("cannot sample from an empty table");
  validate_design(design, rows);
  std::vector<std::uint64_t> picked;
  picked.reserve(design.k);
  if (design.method == SamplingMethod::WithReplacement) {
    std::uniform_int_distribution<std::uint64_t> pick(0, rows - 1);
    for (std::uint64_t i = 0; i < design.k; ++i) picked.push_back(pick(rng));
    return picked;
  }
  // Position i of the virtual permutation holds swapped[i] if present, else i.
  std::unordered_map<std::uint64_t, std::uint64_t> swapped;
  swapped.reserve(2 * design.k);
  auto at = [&](std::uint64_t i) {
    const auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  for (std::uint64_t i = 0; i < design.k; ++i) {
    std::uniform_int_distribution<std::uint64_t> pick(i, rows - 1);
    const std::uint64_t j = pick(rng);
    const std::uint64_t value_j = at(j);
    swapped[j] = at(i);
    picked.push_back(value_j);
  }
  return picked;
}

EstimateReport estimate_with_bounds(const TableData& table, const Predicate& predicate,
                                    const EstimateOptions& options) {
  return estimate_with_bounds(table, bind(table, predicate), options);
}

EstimateReport estimate_with_bounds(const TableData& table, const BoundPredicate& predicate,
                                    const EstimateOptions& options) {
  const std::uint64_t n = table.rows();
  if (n == 0) throw DomainError("cannot estimate on an empty table");
  validate_design(options.design, n);
  for (double q : options.q_list) {
    if (!(q >= 1.0)) throw DomainError("every q must be >= 1");
  }

  EstimateReport report;
  report.rows = n;
  report.design = options.design;
  report.seed = options.seed;

  std::mt19937_64 rng = mc::stream_generator(options.seed, 0);
  for (std::uint64_t row : sample_rows(n, options.design, rng)) {
    if (predicate.matches(row)) ++report.hits;
  }
  report.estimate = exact::scaled_estimate(n, options.design.k, report.hits);

  if (options.assumed_p) {
    if (!(*options.assumed_p >= 0.0 && *options.assumed_p <= 1.0)) {
      throw DomainError("assumed p must lie in [0, 1]");
    }
    report.bound_p = *options.assumed_p;
    report.bound_uses_true_p = false;
  } else {
    const std::uint64_t truth = true_cardinality(table, predicate);
    report.truth = truth;
    report.realized_q_error = q_error(report.estimate, static_cast<double>(truth)).value();
    report.bound_p = static_cast<double>(truth) / static_cast<double>(n);
  }

  const InequalitySet set = default_inequalities(options.design.method, options.with_hoeffding);
  for (double q : options.q_list) {
    const BoundResult bound =
        evaluate(BoundQuery{options.design.method, report.bound_p, n, options.design.k, q, set});
    report.confidences.push_back({q, bound.confidence, bound.degenerate});
  }
  if (options.target_confidence) {
    solver::PlanQuery query;
    query.method = options.design.method;
    query.p = report.bound_p;
    query.rows = n;
    query.inequalities = set;
    query.target_confidence = *options.target_confidence;
    query.k = options.design.k;
    report.q_at_target = solver::q_at_confidence(query);
  }
  return report;
}

}  // namespace qbound::ingest
