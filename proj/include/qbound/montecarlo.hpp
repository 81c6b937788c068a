#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "qbound/core.hpp"

namespace qbound::mc {

// Identifies the generator and seeding scheme; bump when either changes.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64/splitmix64-v1";

// splitmix64 finalizer, used to decorrelate (seed, stream) pairs.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Independent generator for one trial (or any other indexed stream).
std::mt19937_64 stream_generator(std::uint64_t seed, std::uint64_t stream) noexcept;

struct SimulationConfig {
  PopulationSpec pop{1, 0};
  SampleDesign design;
  double q = 1.0;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  bool keep_q_errors = false;
};

struct SimulationSummary {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double empirical_rate = 0.0;
  double standard_error = 0.0;  // sqrt(r (1 - r) / trials)
  std::vector<double> q_errors;  // per trial, only if requested
};

// Hit count of one sampled table. Without replacement this walks the k draws
// as conditional Bernoulli trials (remaining hits / remaining rows), so it
// never allocates anything proportional to n.
std::uint64_t draw_hits(const PopulationSpec& pop, const SampleDesign& design,
                        std::mt19937_64& rng);

SimulationSummary run_simulation(const SimulationConfig& config);

}  // namespace qbound::mc
