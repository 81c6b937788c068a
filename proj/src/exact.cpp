#include "qbound/exact.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "qbound/errors.hpp"

namespace qbound::exact {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(n!) - log(sqrt(2 pi n) (n/e)^n), the Stirling series remainder.
double stirling_error(std::uint64_t n) {
  static const std::array<double, 16> small = [] {
    std::array<double, 16> table{};
    table[0] = 0.0;
    for (int i = 1; i < 16; ++i) {
      const double x = i;
      table[i] = std::lgamma(x + 1.0) - (x + 0.5) * std::log(x) + x -
                 0.5 * std::log(2.0 * std::numbers::pi);
    }
    return table;
  }();
  if (n < small.size()) return small[n];

  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  const double x = static_cast<double>(n);
  const double xx = x * x;
  if (n > 500) return (s0 - s1 / xx) / x;
  if (n > 80) return (s0 - (s1 - s2 / xx) / xx) / x;
  if (n > 35) return (s0 - (s1 - (s2 - s3 / xx) / xx) / xx) / x;
  return (s0 - (s1 - (s2 - (s3 - s4 / xx) / xx) / xx) / xx) / x;
}

// x log(x / np) + np - x, evaluated without cancellation when x ~ np.
double deviance_part(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double next = s + ej / (2 * j + 1);
      if (next == s) return next;
      s = next;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

// Same as log_binomial_pmf but with q = 1 - p supplied separately so that
// callers holding an exact complement avoid forming 1 - p.
double log_binomial_raw(std::uint64_t x, std::uint64_t trials, double p, double q) {
  if (x > trials) return kNegInf;
  if (p == 0.0) return x == 0 ? 0.0 : kNegInf;
  if (q == 0.0) return x == trials ? 0.0 : kNegInf;
  const double n = static_cast<double>(trials);
  if (x == 0) {
    if (trials == 0) return 0.0;
    return p < 0.1 ? -deviance_part(n, n * q) - n * p : n * std::log(q);
  }
  if (x == trials) {
    return q < 0.1 ? -deviance_part(n, n * p) - n * q : n * std::log(p);
  }
  const double xd = static_cast<double>(x);
  const double rest = static_cast<double>(trials - x);
  const double lc = stirling_error(trials) - stirling_error(x) - stirling_error(trials - x) -
                    deviance_part(xd, n * p) - deviance_part(rest, n * q);
  const double lf = std::log(2.0 * std::numbers::pi) + std::log(xd) + std::log1p(-xd / n);
  return lc - 0.5 * lf;
}

// Accumulates with Neumaier's compensated summation.
class CompensatedSum {
 public:
  void add(double value) noexcept {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Sums exp(log_pmf(x)) for x in [lo, hi], walking outward from `start` and
// stopping once terms drop below 1e-30 of the largest one seen.
template <typename LogPmf>
double sum_outward(std::uint64_t lo, std::uint64_t hi, std::uint64_t start, LogPmf log_pmf) {
  constexpr double kRelativeCutoff = 1e-30;
  CompensatedSum total;
  double peak = 0.0;
  auto visit = [&](std::uint64_t x) {
    const double term = std::exp(log_pmf(x));
    peak = std::max(peak, term);
    total.add(term);
    return term;
  };
  visit(start);
  for (std::uint64_t x = start; x > lo;) {
    --x;
    if (visit(x) < kRelativeCutoff * peak) break;
  }
  for (std::uint64_t x = start; x < hi;) {
    ++x;
    if (visit(x) < kRelativeCutoff * peak) break;
  }
  return total.value();
}

}  // namespace

double scaled_estimate(std::uint64_t rows, std::uint64_t k, std::uint64_t hits) noexcept {
  return static_cast<double>(rows) * static_cast<double>(hits) / static_cast<double>(k);
}

AdmissibleRange admissible_range(std::uint64_t rows, std::uint64_t cardinality, std::uint64_t k,
                                 double q) {
  const PopulationSpec pop(rows, cardinality);
  if (k == 0) throw DomainError("sample size k must be at least 1");
  if (!(q >= 1.0)) throw DomainError("q must be >= 1");

  const double truth = static_cast<double>(cardinality);
  auto admissible = [&](std::uint64_t x) {
    return q_error(scaled_estimate(rows, k, x), truth).value() <= q;
  };

  // The clamped Q-error is quasi-convex in the estimate and the estimate is
  // non-decreasing in X, so the admissible set is an interval around the
  // hit count whose estimate is closest to max(C, 1).
  const double target =
      static_cast<double>(k) * std::max(truth, 1.0) / static_cast<double>(rows);
  const auto below = static_cast<std::uint64_t>(std::min(std::floor(target), double(k)));
  const std::uint64_t above = std::min<std::uint64_t>(below + 1, k);
  const double q_below = q_error(scaled_estimate(rows, k, below), truth).value();
  const double q_above = q_error(scaled_estimate(rows, k, above), truth).value();
  const std::uint64_t centre = q_above < q_below ? above : below;
  if (!admissible(centre)) return {};

  // Smallest admissible x in [0, centre].
  std::uint64_t lo = 0, hi = centre;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (admissible(mid)) hi = mid; else lo = mid + 1;
  }
  const std::uint64_t first = lo;

  // Largest admissible x in [centre, k].
  lo = centre;
  hi = k;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (admissible(mid)) lo = mid; else hi = mid - 1;
  }
  return {first, lo};
}

double log_binomial_pmf(std::uint64_t x, std::uint64_t trials, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial p must lie in [0, 1]");
  return log_binomial_raw(x, trials, p, 1.0 - p);
}

double log_hypergeometric_pmf(std::uint64_t x, std::uint64_t rows, std::uint64_t successes,
                              std::uint64_t draws) {
  if (successes > rows || draws > rows) throw DomainError("invalid hypergeometric parameters");
  const std::uint64_t failures = rows - successes;
  if (x > successes || x > draws || draws - x > failures) return kNegInf;
  // P(X = x) = Bin(x; C, f) Bin(k - x; n - C, f) / Bin(k; n, f) for any f;
  // f = k / n keeps all three factors near their modes.
  const double f = static_cast<double>(draws) / static_cast<double>(rows);
  const double g = static_cast<double>(rows - draws) / static_cast<double>(rows);
  return log_binomial_raw(x, successes, f, g) + log_binomial_raw(draws - x, failures, f, g) -
         log_binomial_raw(draws, rows, f, g);
}

double exact_confidence(const PopulationSpec& pop, const SampleDesign& design, double q) {
  validate_design(design, pop.rows());
  const std::uint64_t n = pop.rows();
  const std::uint64_t c = pop.cardinality();
  const std::uint64_t k = design.k;
  const AdmissibleRange range = admissible_range(n, c, k, q);
  if (range.empty()) return 0.0;

  std::uint64_t lo = range.lo;
  std::uint64_t hi = range.hi;
  if (design.method == SamplingMethod::WithoutReplacement) {
    const std::uint64_t failures = n - c;
    lo = std::max(lo, k > failures ? k - failures : 0);
    hi = std::min({hi, k, c});
    if (lo > hi) return 0.0;
  }

  const double mean = static_cast<double>(k) * static_cast<double>(c) / static_cast<double>(n);
  const auto nearest = static_cast<std::uint64_t>(std::llround(mean));
  const std::uint64_t start = std::clamp(nearest, lo, hi);

  double total;
  if (design.method == SamplingMethod::WithReplacement) {
    const double p = pop.selectivity();
    const double complement = static_cast<double>(n - c) / static_cast<double>(n);
    total = sum_outward(lo, hi, start, [&](std::uint64_t x) {
      return log_binomial_raw(x, k, p, complement);
    });
  } else {
    total = sum_outward(lo, hi, start, [&](std::uint64_t x) {
      return log_hypergeometric_pmf(x, n, c, k);
    });
  }
  return std::clamp(total, 0.0, 1.0);
}

}  // namespace qbound::exact
