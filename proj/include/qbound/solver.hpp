#pragma once

#include <cstdint>
#include <optional>

#include "qbound/bounds.hpp"
#include "qbound/core.hpp"

// Planning queries: invert the confidence bounds for the sample size or for
// the Q-error threshold. An unreachable target is a normal answer, not an error.
namespace qbound::solver {

struct PlanQuery {
  SamplingMethod method = SamplingMethod::WithReplacement;
  double p = 0.0;
  std::optional<std::uint64_t> rows;  // required without replacement
  InequalitySet inequalities;         // empty selects the method default
  double target_confidence = 0.95;    // in (0, 1)
  double target_q = 2.0;              // used by min_sample_size
  std::uint64_t k = 1;                // used by q_at_confidence
  std::uint64_t k_max = 1'000'000'000;
  double q_max = 1e6;
};

struct SampleSizePlan {
  std::optional<std::uint64_t> k;  // empty when unreachable
  std::uint64_t search_cap = 0;    // largest k the search was allowed to try
  double confidence = 0.0;         // at k, or at the cap when unreachable
  bool used_linear_scan = false;   // non-monotone probes forced a forward scan

  bool reachable() const noexcept { return k.has_value(); }
};

struct QPlan {
  std::optional<double> q;   // empty when unreachable
  double confidence = 0.0;   // at q, or at q_max when unreachable

  bool reachable() const noexcept { return q.has_value(); }
};

// Confidence of the query's bound at an explicit (k, q).
double confidence_at(const PlanQuery& query, std::uint64_t k, double q);

// Least k in [1, cap] reaching target_confidence at target_q, where cap is
// k_max (and n - 1 without replacement). Doubling, then integer bisection.
SampleSizePlan min_sample_size(const PlanQuery& query);

// Least q in [1, q_max] (relative tolerance 1e-9) reaching target_confidence at k.
QPlan q_at_confidence(const PlanQuery& query);

}  // namespace qbound::solver
