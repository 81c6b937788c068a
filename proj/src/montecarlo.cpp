#include "qbound/montecarlo.hpp"

#include <cmath>

#include "qbound/errors.hpp"
#include "qbound/exact.hpp"

namespace qbound::mc {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 stream_generator(std::uint64_t seed, std::uint64_t stream) noexcept {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(~stream)));
}

std::uint64_t draw_hits(const PopulationSpec& pop, const SampleDesign& design,
                        std::mt19937_64& rng) {
  if (design.method == SamplingMethod::WithReplacement) {
    std::binomial_distribution<std::uint64_t> binomial(design.k, pop.selectivity());
    return binomial(rng);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uint64_t remaining_rows = pop.rows();
  std::uint64_t remaining_hits = pop.cardinality();
  std::uint64_t hits = 0;
  for (std::uint64_t draw = 0; draw < design.k && remaining_hits > 0; ++draw) {
    if (remaining_hits == remaining_rows) {
      // Every remaining row satisfies the predicate.
      hits += design.k - draw;
      break;
    }
    const double u = unit(rng) * static_cast<double>(remaining_rows);
    if (u < static_cast<double>(remaining_hits)) {
      ++hits;
      --remaining_hits;
    }
    --remaining_rows;
  }
  return hits;
}

SimulationSummary run_simulation(const SimulationConfig& config) {
  validate_design(config.design, config.pop.rows());
  if (config.trials == 0) throw DomainError("simulation needs at least one trial");
  if (!(config.q >= 1.0)) throw DomainError("q must be >= 1");

  const double truth = static_cast<double>(config.pop.cardinality());
  SimulationSummary summary;
  summary.trials = config.trials;
  if (config.keep_q_errors) summary.q_errors.resize(config.trials);

  for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
    std::mt19937_64 rng = stream_generator(config.seed, trial);
    const std::uint64_t hits = draw_hits(config.pop, config.design, rng);
    const double estimate = exact::scaled_estimate(config.pop.rows(), config.design.k, hits);
    const double error = q_error(estimate, truth).value();
    if (error <= config.q) ++summary.successes;
    if (config.keep_q_errors) summary.q_errors[trial] = error;
  }

  const double n = static_cast<double>(summary.trials);
  summary.empirical_rate = static_cast<double>(summary.successes) / n;
  summary.standard_error =
      std::sqrt(summary.empirical_rate * (1.0 - summary.empirical_rate) / n);
  return summary;
}

}  // namespace qbound::mc
