#pragma once

#include <cstdint>

#include "qbound/bounds.hpp"

// Serfling-type bounds for k distinct rows drawn from an n-row table, where
// the hit count is hypergeometric. Preconditions: n >= 2, 1 <= k < n,
// 0 < p <= 1, q >= 1; violations throw DomainError.
namespace qbound::wor {

// Finite-population correction factors. rho shrinks the Hoeffding variance
// proxy, zeta scales the range term of the Bernstein-type bound.
struct SerflingCoefficients {
  double rho;
  double zeta;
};

enum class SerflingBranch { SmallSample, LargeSample };

// Picks SmallSample iff 2k <= n (ties go to the small-sample formulas).
SerflingBranch serfling_branch(std::uint64_t k, std::uint64_t n);

SerflingCoefficients serfling_coefficients(std::uint64_t k, std::uint64_t n);

// Evaluates one branch regardless of where k sits; used to probe the
// discontinuity at 2k = n.
SerflingCoefficients serfling_coefficients(std::uint64_t k, std::uint64_t n,
                                           SerflingBranch branch);

double hoeffding_serfling_term(double p, std::uint64_t k, std::uint64_t n, double q, Side side);

// 2 exp(-(k/zeta^2) * inner), clamped to 1. The inner expression is evaluated
// in the rationalized form eps^2 zeta^2 / (eps zeta + sigma^2 rho + s) with
// s = sqrt(2 zeta rho sigma^2 eps + rho^2 sigma^4).
double bernstein_serfling_term(double p, std::uint64_t k, std::uint64_t n, double q, Side side);

BoundResult confidence(double p, std::uint64_t k, std::uint64_t n, double q,
                       InequalitySet inequalities);

}  // namespace qbound::wor
