#pragma once

#include <cstdint>
#include <optional>

#include "qbound/bounds.hpp"
#include "qbound/core.hpp"

namespace qbound {

// One bound evaluation. `rows` is required for sampling without replacement
// and ignored otherwise (the with-replacement bounds do not depend on n).
struct BoundQuery {
  SamplingMethod method = SamplingMethod::WithReplacement;
  double p = 0.0;
  std::optional<std::uint64_t> rows;
  std::uint64_t k = 1;
  double q = 1.0;
  InequalitySet inequalities;  // empty selects the method default
};

InequalitySet default_inequalities(SamplingMethod method, bool with_hoeffding = false);

// Dispatches to the method's bound. p = 0 is accepted here and yields a
// degenerate result with confidence 0 (all exponents vanish).
BoundResult evaluate(const BoundQuery& query);

// Convenience for integer populations: p = C / n.
BoundResult evaluate(const PopulationSpec& pop, const SampleDesign& design, double q,
                     InequalitySet inequalities = {});

}  // namespace qbound
