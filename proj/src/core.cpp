#include "qbound/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qbound/errors.hpp"

namespace qbound {

PopulationSpec::PopulationSpec(std::uint64_t rows, std::uint64_t cardinality)
    : rows_(rows), cardinality_(cardinality) {
  if (rows == 0) throw DomainError("population must have at least one row");
  if (cardinality > rows) {
    throw DomainError("cardinality " + std::to_string(cardinality) +
                      " exceeds row count " + std::to_string(rows));
  }
}

std::string_view to_string(SamplingMethod method) noexcept {
  return method == SamplingMethod::WithReplacement ? "wr" : "wor";
}

SamplingMethod parse_sampling_method(std::string_view text) {
  if (text == "wr" || text == "with-replacement") return SamplingMethod::WithReplacement;
  if (text == "wor" || text == "without-replacement") return SamplingMethod::WithoutReplacement;
  throw UsageError("unknown sampling method '" + std::string(text) + "' (expected wr or wor)");
}

void validate_design(const SampleDesign& design, std::uint64_t rows) {
  if (design.k == 0) throw DomainError("sample size k must be at least 1");
  if (design.method == SamplingMethod::WithoutReplacement) {
    if (rows < 2) throw DomainError("sampling without replacement needs at least 2 rows");
    if (design.k >= rows) {
      throw DomainError("sampling without replacement requires k < n (k=" +
                        std::to_string(design.k) + ", n=" + std::to_string(rows) + ")");
    }
  }
}

QError::QError(double value) : value_(value) {
  if (!(value >= 1.0)) throw DomainError("q-error must be >= 1");
}

QError q_error(double estimate, double truth) {
  if (!(estimate >= 0.0) || !(truth >= 0.0)) {
    throw DomainError("q_error needs non-negative estimate and truth");
  }
  const double e = std::max(estimate, 1.0);
  const double t = std::max(truth, 1.0);
  return QError(std::max(t / e, e / t));
}

double selectivity(const PopulationSpec& pop) noexcept { return pop.selectivity(); }

double population_variance(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("selectivity must lie in [0, 1]");
  return p * (1.0 - p);
}

}  // namespace qbound
