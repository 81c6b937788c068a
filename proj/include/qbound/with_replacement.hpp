#pragma once

#include <cstdint>

#include "qbound/bounds.hpp"

// Tail bounds for the hit count of k independent uniform row draws,
// X ~ Binomial(k, p). Each term bounds the probability that the scaled-up
// estimate lands more than a factor q above (Over) or below (Under) the truth.
// All terms are evaluated as exp(log-term) and clamped to [0, 1].
//
// Preconditions shared by every function here: 0 < p <= 1, q >= 1, k >= 1.
// Violations throw DomainError.
namespace qbound::wr {

// Over:  (e^{q-1} / q^q)^{pk}
// Under: (e^{1/q-1} q^{1/q})^{pk}
double chernoff_term(double p, std::uint64_t k, double q, Side side);

// exp(-k eps^2 / (2 sigma^2 + 2 eps / 3)), eps = pq - p (Over) or p - p/q (Under).
double bernstein_term(double p, std::uint64_t k, double q, Side side);

// Over: exp(-2 p^2 (q-1)^2 k).
// Under: exp(-2k (pq-1)^2 / q^2), only applicable when pq > 1.
BoundTerm hoeffding_term(double p, std::uint64_t k, double q, Side side);

// Combined confidence over a non-empty subset of {Chernoff, Bernstein, Hoeffding}.
// Throws UsageError for an empty set or Serfling kinds.
BoundResult confidence(double p, std::uint64_t k, double q, InequalitySet inequalities);

}  // namespace qbound::wr
