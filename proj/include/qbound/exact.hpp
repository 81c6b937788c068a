#pragma once

#include <cstdint>

#include "qbound/core.hpp"

// Exact P(Q-error <= q) by summing the sampling distribution of the sample
// hit count X over the hit counts whose estimate est = n X / k is within a
// factor q of the truth. This is the ground truth every bound is checked against.
namespace qbound::exact {

// Closed integer interval [lo, hi] of hit counts; empty when lo > hi
// (canonically lo = 1, hi = 0).
struct AdmissibleRange {
  std::uint64_t lo = 1;
  std::uint64_t hi = 0;

  bool empty() const noexcept { return lo > hi; }
  bool contains(std::uint64_t x) const noexcept { return lo <= x && x <= hi; }
  friend bool operator==(const AdmissibleRange&, const AdmissibleRange&) = default;
};

// The scale-up estimator for `hits` satisfying rows among k sampled rows.
double scaled_estimate(std::uint64_t rows, std::uint64_t k, std::uint64_t hits) noexcept;

// Maximal interval of X in [0, k] with q_error(n X / k, C) <= q.
AdmissibleRange admissible_range(std::uint64_t rows, std::uint64_t cardinality, std::uint64_t k,
                                 double q);

// log P(Binomial(trials, p) = x). Loader's saddle-point evaluation.
double log_binomial_pmf(std::uint64_t x, std::uint64_t trials, double p);

// log P(X = x) for X hypergeometric: `draws` rows without replacement from a
// table of `rows` rows of which `successes` satisfy the predicate.
double log_hypergeometric_pmf(std::uint64_t x, std::uint64_t rows, std::uint64_t successes,
                              std::uint64_t draws);

// P(Q-error <= q) under the given design. Throws DomainError on invalid input.
double exact_confidence(const PopulationSpec& pop, const SampleDesign& design, double q);

}  // namespace qbound::exact
