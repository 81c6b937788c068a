#include "qbound/with_replacement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qbound/errors.hpp"

namespace qbound::wr {
namespace {

void check_args(double p, std::uint64_t k, double q) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("selectivity p must lie in (0, 1]");
  if (!(q >= 1.0) || !std::isfinite(q)) throw DomainError("q must be a finite value >= 1");
  if (k == 0) throw DomainError("sample size k must be at least 1");
}

double clamp_exp(double log_value) {
  if (std::isnan(log_value)) return 1.0;
  return std::clamp(std::exp(log_value), 0.0, 1.0);
}

double deviation(double p, double q, Side side) {
  return side == Side::Over ? p * (q - 1.0) : p * (1.0 - 1.0 / q);
}

}  // namespace

double chernoff_term(double p, std::uint64_t k, double q, Side side) {
  check_args(p, k, q);
  const double log_q = std::log(q);
  const double per_unit = side == Side::Over ? (q - 1.0) - q * log_q
                                             : (1.0 / q - 1.0) + log_q / q;
  // per_unit <= 0 mathematically; rounding near q = 1 can make it a hair positive.
  return clamp_exp(p * static_cast<double>(k) * std::min(per_unit, 0.0));
}

double bernstein_term(double p, std::uint64_t k, double q, Side side) {
  check_args(p, k, q);
  const double eps = deviation(p, q, side);
  if (eps <= 0.0) return 1.0;
  const double variance = p * (1.0 - p);
  return clamp_exp(-static_cast<double>(k) * eps * eps / (2.0 * variance + 2.0 * eps / 3.0));
}

BoundTerm hoeffding_term(double p, std::uint64_t k, double q, Side side) {
  check_args(p, k, q);
  const double kd = static_cast<double>(k);
  BoundTerm term{Inequality::Hoeffding, side, 1.0, true};
  if (side == Side::Over) {
    const double eps = p * (q - 1.0);
    term.probability = clamp_exp(-2.0 * eps * eps * kd);
  } else if (p * q > 1.0) {
    const double gap = (p * q - 1.0) / q;
    term.probability = clamp_exp(-2.0 * kd * gap * gap);
  } else {
    term.applicable = false;
  }
  return term;
}

BoundResult confidence(double p, std::uint64_t k, double q, InequalitySet inequalities) {
  if (inequalities.empty()) throw UsageError("inequality set must not be empty");
  if (inequalities.contains(Inequality::HoeffdingSerfling) ||
      inequalities.contains(Inequality::BernsteinSerfling)) {
    throw UsageError("Serfling inequalities apply only to sampling without replacement");
  }
  check_args(p, k, q);

  std::vector<BoundTerm> terms;
  for (Side side : {Side::Over, Side::Under}) {
    if (inequalities.contains(Inequality::Chernoff)) {
      terms.push_back({Inequality::Chernoff, side, chernoff_term(p, k, q, side), true});
    }
    if (inequalities.contains(Inequality::Bernstein)) {
      terms.push_back({Inequality::Bernstein, side, bernstein_term(p, k, q, side), true});
    }
    if (inequalities.contains(Inequality::Hoeffding)) {
      terms.push_back(hoeffding_term(p, k, q, side));
    }
  }
  return combine_terms(std::move(terms));
}

}  // namespace qbound::wr
