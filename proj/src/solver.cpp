#include "qbound/solver.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qbound/confidence.hpp"
#include "qbound/errors.hpp"

namespace qbound::solver {
namespace {

void check_query(const PlanQuery& query) {
  if (!(query.target_confidence > 0.0 && query.target_confidence < 1.0)) {
    throw UsageError("target confidence must lie strictly between 0 and 1");
  }
  if (!(query.p >= 0.0 && query.p <= 1.0)) throw DomainError("selectivity p must lie in [0, 1]");
  if (query.method == SamplingMethod::WithoutReplacement && !query.rows) {
    throw UsageError("sampling without replacement needs the table row count n");
  }
  if (query.k_max == 0) throw UsageError("k_max must be positive");
  if (!(query.q_max >= 1.0) || !std::isfinite(query.q_max)) {
    throw UsageError("q_max must be a finite value >= 1");
  }
}

}  // namespace

double confidence_at(const PlanQuery& query, std::uint64_t k, double q) {
  return evaluate(BoundQuery{query.method, query.p, query.rows, k, q, query.inequalities})
      .confidence;
}

SampleSizePlan min_sample_size(const PlanQuery& query) {
  check_query(query);
  if (!(query.target_q >= 1.0) || !std::isfinite(query.target_q)) {
    throw UsageError("target q must be a finite value >= 1");
  }
  std::uint64_t cap = query.k_max;
  if (query.method == SamplingMethod::WithoutReplacement) {
    if (*query.rows < 2) throw DomainError("sampling without replacement needs at least 2 rows");
    cap = std::min(cap, *query.rows - 1);
  }

  const double target = query.target_confidence;
  auto conf = [&](std::uint64_t k) { return confidence_at(query, k, query.target_q); };

  SampleSizePlan plan;
  plan.search_cap = cap;

  // Doubling phase: probes 1, 2, 4, ... (last probe is the cap itself).
  std::vector<std::pair<std::uint64_t, double>> probes;
  std::uint64_t k = 1;
  while (true) {
    const double c = conf(k);
    probes.emplace_back(k, c);
    if (c >= target || k == cap) break;
    k = k > cap / 2 ? cap : 2 * k;
  }
  if (probes.back().second < target) {
    plan.confidence = probes.back().second;
    return plan;
  }
  if (probes.size() == 1) {
    plan.k = 1;
    plan.confidence = probes.front().second;
    return plan;
  }

  const bool monotone = std::is_sorted(
      probes.begin(), probes.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });
  const std::uint64_t last_fail = probes[probes.size() - 2].first;
  const std::uint64_t first_pass = probes.back().first;

  if (!monotone) {
    plan.used_linear_scan = true;
    for (std::uint64_t candidate = last_fail + 1; candidate <= first_pass; ++candidate) {
      const double c = conf(candidate);
      if (c >= target) {
        plan.k = candidate;
        plan.confidence = c;
        return plan;
      }
    }
  }

  // Invariant: conf(lo) < target <= conf(hi).
  std::uint64_t lo = last_fail;
  std::uint64_t hi = first_pass;
  double hi_conf = probes.back().second;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    const double c = conf(mid);
    if (c >= target) {
      hi = mid;
      hi_conf = c;
    } else {
      lo = mid;
    }
  }
  plan.k = hi;
  plan.confidence = hi_conf;
  return plan;
}

QPlan q_at_confidence(const PlanQuery& query) {
  check_query(query);
  if (query.k == 0) throw UsageError("sample size k must be at least 1");
  const double target = query.target_confidence;
  auto conf = [&](double q) { return confidence_at(query, query.k, q); };

  QPlan plan;
  const double at_cap = conf(query.q_max);
  if (at_cap < target) {
    plan.confidence = at_cap;
    return plan;
  }
  const double at_one = conf(1.0);
  if (at_one >= target) {
    plan.q = 1.0;
    plan.confidence = at_one;
    return plan;
  }

  // Invariant: conf(lo) < target <= conf(hi). Bisect in log q so that the
  // relative width shrinks uniformly across [1, q_max].
  double lo = 1.0;
  double hi = query.q_max;
  double hi_conf = at_cap;
  constexpr double kRelTol = 1e-9;
  while (hi - lo > kRelTol * hi) {
    const double mid = std::sqrt(lo) * std::sqrt(hi);
    const double probe = (mid > lo && mid < hi) ? mid : lo + 0.5 * (hi - lo);
    if (!(probe > lo && probe < hi)) break;
    const double c = conf(probe);
    if (c >= target) {
      hi = probe;
      hi_conf = c;
    } else {
      lo = probe;
    }
  }
  plan.q = hi;
  plan.confidence = hi_conf;
  return plan;
}

}  // namespace qbound::solver
