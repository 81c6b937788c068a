#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qbound/core.hpp"
#include "qbound/predicate.hpp"
#include "qbound/solver.hpp"
#include "qbound/table.hpp"

namespace qbound::ingest {

// Row indices of one uniform sample. Without replacement uses a partial
// Fisher-Yates shuffle over a sparse swap map: O(k) memory, no repeats.
std::vector<std::uint64_t> sample_rows(std::uint64_t rows, const SampleDesign& design,
                                       std::mt19937_64& rng);

struct EstimateOptions {
  SampleDesign design;
  std::vector<double> q_list = {2.0};
  std::optional<double> target_confidence;  // also report q reachable at this level
  std::uint64_t seed = 0;
  // When set, ground truth is not computed and the bounds use this p instead.
  std::optional<double> assumed_p;
  bool with_hoeffding = false;
};

struct QConfidence {
  double q = 1.0;
  double confidence = 0.0;
  bool degenerate = false;
};

struct EstimateReport {
  std::uint64_t rows = 0;
  SampleDesign design;
  std::uint64_t seed = 0;
  std::uint64_t hits = 0;
  double estimate = 0.0;  // n * hits / k
  std::optional<std::uint64_t> truth;
  std::optional<double> realized_q_error;
  double bound_p = 0.0;
  bool bound_uses_true_p = true;  // "oracle confidence" when true
  std::vector<QConfidence> confidences;
  std::optional<solver::QPlan> q_at_target;
};

// Draws one sample per design and seed, scales up the hit count and attaches
// a priori confidences for every q. Deterministic for a fixed seed.
EstimateReport estimate_with_bounds(const TableData& table, const Predicate& predicate,
                                    const EstimateOptions& options);
EstimateReport estimate_with_bounds(const TableData& table, const BoundPredicate& predicate,
                                    const EstimateOptions& options);

}  // namespace qbound::ingest
