#include "qbound/without_replacement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qbound/errors.hpp"

namespace qbound::wor {
namespace {

void check_sizes(std::uint64_t k, std::uint64_t n) {
  if (n < 2) throw DomainError("sampling without replacement needs at least 2 rows");
  if (k == 0) throw DomainError("sample size k must be at least 1");
  if (k >= n) {
    throw DomainError("sampling without replacement requires k < n (k=" + std::to_string(k) +
                      ", n=" + std::to_string(n) + ")");
  }
}

void check_args(double p, std::uint64_t k, std::uint64_t n, double q) {
  check_sizes(k, n);
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("selectivity p must lie in (0, 1]");
  if (!(q >= 1.0) || !std::isfinite(q)) throw DomainError("q must be a finite value >= 1");
}

double deviation(double p, double q, Side side) {
  return side == Side::Over ? p * (q - 1.0) : p * (1.0 - 1.0 / q);
}

double clamp_unit(double value) {
  if (std::isnan(value)) return 1.0;
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace

SerflingBranch serfling_branch(std::uint64_t k, std::uint64_t n) {
  return 2 * k <= n ? SerflingBranch::SmallSample : SerflingBranch::LargeSample;
}

SerflingCoefficients serfling_coefficients(std::uint64_t k, std::uint64_t n) {
  return serfling_coefficients(k, n, serfling_branch(k, n));
}

SerflingCoefficients serfling_coefficients(std::uint64_t k, std::uint64_t n,
                                           SerflingBranch branch) {
  check_sizes(k, n);
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  // n - k is formed in integers so that k close to n keeps full precision.
  const double rest = static_cast<double>(n - k);
  if (branch == SerflingBranch::SmallSample) {
    return {1.0 - (kd - 1.0) / nd,
            4.0 / 3.0 + std::sqrt(kd * (kd - 1.0) / (nd * (rest + 1.0)))};
  }
  return {(rest / nd) * (1.0 + 1.0 / kd),
          4.0 / 3.0 + std::sqrt((rest - 1.0) * rest / ((kd + 1.0) * nd))};
}

double hoeffding_serfling_term(double p, std::uint64_t k, std::uint64_t n, double q, Side side) {
  check_args(p, k, n, q);
  const double eps = deviation(p, q, side);
  if (eps <= 0.0) return 1.0;
  const double rho = serfling_coefficients(k, n).rho;
  return clamp_unit(std::exp(-2.0 * static_cast<double>(k) * eps * eps / rho));
}

double bernstein_serfling_term(double p, std::uint64_t k, std::uint64_t n, double q, Side side) {
  check_args(p, k, n, q);
  const double eps = deviation(p, q, side);
  if (eps <= 0.0) return 1.0;
  const auto [rho, zeta] = serfling_coefficients(k, n);
  const double variance = p * (1.0 - p);
  const double s = std::sqrt(2.0 * zeta * rho * variance * eps + rho * rho * variance * variance);
  // (k / zeta^2) * eps^2 zeta^2 / (...) simplifies to k eps^2 / (...).
  const double exponent = static_cast<double>(k) * eps * eps / (eps * zeta + variance * rho + s);
  return clamp_unit(2.0 * std::exp(-exponent));
}

BoundResult confidence(double p, std::uint64_t k, std::uint64_t n, double q,
                       InequalitySet inequalities) {
  if (inequalities.empty()) throw UsageError("inequality set must not be empty");
  for (Inequality kind : inequalities.members()) {
    if (!is_without_replacement(kind)) {
      throw UsageError(std::string(to_string(kind)) +
                       " applies only to sampling with replacement");
    }
  }
  check_args(p, k, n, q);

  std::vector<BoundTerm> terms;
  for (Side side : {Side::Over, Side::Under}) {
    if (inequalities.contains(Inequality::HoeffdingSerfling)) {
      terms.push_back({Inequality::HoeffdingSerfling, side,
                       hoeffding_serfling_term(p, k, n, q, side), true});
    }
    if (inequalities.contains(Inequality::BernsteinSerfling)) {
      terms.push_back({Inequality::BernsteinSerfling, side,
                       bernstein_serfling_term(p, k, n, q, side), true});
    }
  }
  return combine_terms(std::move(terms));
}

}  // namespace qbound::wor
