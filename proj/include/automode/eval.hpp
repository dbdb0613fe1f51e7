#pragma once

// Closed-world negative sampling, precision/recall and k-fold cross
// validation of learned definitions.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "json.hpp"

#include "automode/bias.hpp"
#include "automode/clause.hpp"
#include "automode/learner.hpp"
#include "automode/relstore.hpp"

namespace automode {

struct FoldResult {
  double precision = 1.0;
  double recall = 0.0;
  double wall_ms = 0.0;
};

struct EvalReport {
  int folds = 0;
  std::uint64_t seed = 0;
  std::vector<FoldResult> per_fold;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double mean_wall_ms = 0.0;

  /// Without timing the report is a pure function of inputs and seed.
  nlohmann::json to_json(bool with_timing = true) const;
};

/// Samples ratio * |positives| tuples from the product of per-position
/// positive values, minus the positives. Returns the whole pool when it is
/// smaller. Throws ValidationError when the pool is empty.
std::vector<Tuple> generate_negatives(const std::vector<Tuple>& positives, int ratio, std::uint64_t seed);

/// Precision is 1.0 when nothing is covered; recall is 0.0 without positives.
std::pair<double, double> precision_recall(const HornDefinition& def, const std::vector<Tuple>& positives,
                                           const std::vector<Tuple>& negatives, const DatabaseInstance& db);

/// Runs the learner selected by cfg.generalizer.
HornDefinition train(const DatabaseInstance& db, const ExampleSet& examples, const BiasSpec& bias,
                     const LearnConfig& cfg);

/// Fold index of each of `n` items after a seeded shuffle; fold sizes
/// differ by at most one.
std::vector<int> assign_folds(std::size_t n, int folds, std::mt19937_64& rng);

/// Positives and negatives are shuffled and split independently. Fold f
/// trains with rng seed `seed + f`. Throws ConfigError when folds < 2 or
/// there are fewer positives than folds.
EvalReport cross_validate(const DatabaseInstance& db, const ExampleSet& examples, const BiasSpec& bias,
                          const LearnConfig& cfg, int folds, std::uint64_t seed);

}  // namespace automode
