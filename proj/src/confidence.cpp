#include "qbound/confidence.hpp"

#include <cmath>

#include "qbound/errors.hpp"
#include "qbound/with_replacement.hpp"
#include "qbound/without_replacement.hpp"

namespace qbound {

InequalitySet default_inequalities(SamplingMethod method, bool with_hoeffding) {
  return method == SamplingMethod::WithReplacement
             ? InequalitySet::with_replacement(with_hoeffding)
             : InequalitySet::without_replacement();
}

BoundResult evaluate(const BoundQuery& query) {
  const InequalitySet set =
      query.inequalities.empty() ? default_inequalities(query.method) : query.inequalities;
  if (query.method == SamplingMethod::WithoutReplacement && !query.rows) {
    throw UsageError("sampling without replacement needs the table row count n");
  }
  if (!(query.p >= 0.0 && query.p <= 1.0)) throw DomainError("selectivity p must lie in [0, 1]");

  if (query.p == 0.0) {
    // Still validate the remaining arguments so that bad input is not masked.
    if (query.k == 0) throw DomainError("sample size k must be at least 1");
    if (!(query.q >= 1.0) || !std::isfinite(query.q)) {
      throw DomainError("q must be a finite value >= 1");
    }
    if (query.method == SamplingMethod::WithoutReplacement) {
      validate_design({query.method, query.k}, *query.rows);
    }
    BoundResult result;
    result.degenerate = true;
    return result;
  }

  if (query.method == SamplingMethod::WithReplacement) {
    return wr::confidence(query.p, query.k, query.q, set);
  }
  return wor::confidence(query.p, query.k, *query.rows, query.q, set);
}

BoundResult evaluate(const PopulationSpec& pop, const SampleDesign& design, double q,
                     InequalitySet inequalities) {
  return evaluate(BoundQuery{design.method, pop.selectivity(), pop.rows(), design.k, q,
                             inequalities});
}

}  // namespace qbound
