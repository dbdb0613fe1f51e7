#pragma once

// Bottom-up cover-set learner: bottom-clause construction, armg
// generalization under beam search, and the outer covering loop.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "automode/bias.hpp"
#include "automode/clause.hpp"
#include "automode/relstore.hpp"

namespace automode {

enum class Generalizer { Armg, Lgg };

struct LearnConfig {
  int iterations = 2;        // bottom-clause rounds
  int beam_width = 3;
  int sample_size = 20;      // positives drawn per generalization round
  double min_precision = 0.5;
  /// Minimum covered positives for an accepted clause; unset means 2, or 1
  /// when there are fewer than 4 positives.
  std::optional<int> min_positives;
  int per_relation_cap = 100;  // literals per relation per round
  std::uint64_t rng_seed = 1;
  /// Drop body literals whose removal admits no additional negatives.
  bool negative_reduction = true;
  bool deep_reduce = false;
  Generalizer generalizer = Generalizer::Armg;
  std::size_t max_lgg_tuples = 10000;
  int jobs = 1;

  /// Throws ConfigError.
  void validate() const;
  int effective_min_positives(std::size_t positives) const;
};

struct BottomClause {
  Clause clause;
  Tuple seed;
  std::map<Constant, VarId> var_map;
};

BottomClause build_bottom_clause(std::span<const Constant> example, const DatabaseInstance& db,
                                 const BiasSpec& bias, const LearnConfig& cfg);

/// Drops blocking literals until `example` is covered, then drops literals
/// no longer connected to the head.
Clause armg(const Clause& clause, std::span<const Constant> example, const DatabaseInstance& db);

/// Covered positives minus covered negatives.
long score(const Clause& clause, const std::vector<Tuple>& positives, const std::vector<Tuple>& negatives,
           const DatabaseInstance& db);

/// Removes body literals, first to last, while the clause covers no more
/// negatives than before. With a bias, literals left without a mode are
/// pruned after each removal; otherwise disconnected literals are.
Clause negative_reduce(const Clause& clause, const std::vector<Tuple>& negatives, const DatabaseInstance& db,
                       const BiasSpec* bias);

/// Beam search over armg generalizations of the bottom clause. `positives`
/// are the still-uncovered positives the sample is drawn from.
Clause generalize_clause(const BottomClause& bottom, const std::vector<Tuple>& positives,
                         const std::vector<Tuple>& negatives, const DatabaseInstance& db,
                         const LearnConfig& cfg, std::mt19937_64& rng, const BiasSpec* bias = nullptr);

/// Learns one clause from the uncovered positives; the first is the seed.
using ClauseLearner = std::function<Clause(const std::vector<Tuple>& uncovered,
                                           const std::vector<Tuple>& negatives, std::mt19937_64& rng)>;

/// Covering loop: learn a clause from the first uncovered positive; keep it
/// if it meets the precision and support thresholds and drop the positives
/// it covers, otherwise drop the seed.
HornDefinition cover_set(const DatabaseInstance& db, const std::vector<Tuple>& positives,
                         const std::vector<Tuple>& negatives, const LearnConfig& cfg,
                         const ClauseLearner& learn_clause);

HornDefinition learn_definition(const DatabaseInstance& db, const ExampleSet& examples, const BiasSpec& bias,
                                const LearnConfig& cfg);

}  // namespace automode
