#pragma once

#include <compare>
#include <cstdint>
#include <string_view>

namespace qbound {

// A table of `rows` rows of which `cardinality` satisfy some predicate.
// Selectivity is always derived from the two integers, never stored.
class PopulationSpec {
 public:
  // Throws DomainError unless rows >= 1 and cardinality <= rows.
  PopulationSpec(std::uint64_t rows, std::uint64_t cardinality);

  std::uint64_t rows() const noexcept { return rows_; }
  std::uint64_t cardinality() const noexcept { return cardinality_; }
  double selectivity() const noexcept {
    return static_cast<double>(cardinality_) / static_cast<double>(rows_);
  }

  friend bool operator==(const PopulationSpec&, const PopulationSpec&) = default;

 private:
  std::uint64_t rows_;
  std::uint64_t cardinality_;
};

enum class SamplingMethod { WithReplacement, WithoutReplacement };

std::string_view to_string(SamplingMethod method) noexcept;
// Accepts "wr" / "wor" (also the long names). Throws UsageError otherwise.
SamplingMethod parse_sampling_method(std::string_view text);

struct SampleDesign {
  SamplingMethod method = SamplingMethod::WithReplacement;
  std::uint64_t k = 1;

  friend bool operator==(const SampleDesign&, const SampleDesign&) = default;
};

// Checks k >= 1, and for sampling without replacement n >= 2 and k < n.
void validate_design(const SampleDesign& design, std::uint64_t rows);

// Q-error is >= 1 by construction; 1 means a perfect estimate.
class QError {
 public:
  explicit QError(double value);
  double value() const noexcept { return value_; }
  auto operator<=>(const QError&) const = default;

 private:
  double value_;
};

// max(T/E, E/T) with E = max(est, 1) and T = max(truth, 1).
QError q_error(double estimate, double truth);

double selectivity(const PopulationSpec& pop) noexcept;

// sigma^2 = p(1-p) of a Bernoulli(p) row indicator.
double population_variance(double p);

}  // namespace qbound
