#pragma once

// Least general generalization of clauses, and a cover-set learner that
// folds lgg over ground bottom clauses. Needs predicate declarations only.

#include <map>
#include <utility>

#include "automode/bias.hpp"
#include "automode/clause.hpp"
#include "automode/learner.hpp"
#include "automode/relstore.hpp"

namespace automode {

/// Maps each ordered pair of distinct terms to one variable, minted on
/// first use starting at `first_var`.
class VarPairTable {
 public:
  explicit VarPairTable(VarId first_var = 0) : next_(first_var) {}

  Term variable_for(const Term& a, const Term& b);
  std::size_t size() const { return pairs_.size(); }

 private:
  std::map<std::pair<Term, Term>, VarId> pairs_;
  VarId next_;
};

Term lgg_terms(const Term& a, const Term& b, VarPairTable& table);

/// Pairwise lgg of same-relation body literals under one table, duplicates
/// removed; with `reduce`, also deep-reduced. Throws ValidationError when
/// the heads differ in relation or arity.
Clause lgg_clauses(const Clause& c1, const Clause& c2, bool reduce = true);

/// Bottom clause of `example` with every position a variable, rewritten
/// back to its constants.
Clause ground_bottom_clause(std::span<const Constant> example, const DatabaseInstance& db,
                            const BiasSpec& bias, const LearnConfig& cfg);

/// Body modes with one `+` and `-` elsewhere for every relation that has
/// predicate declarations; the head mode is all `+`.
BiasSpec variable_only_bias(const BiasSpec& bias);

/// Throws ConfigError when the database exceeds cfg.max_lgg_tuples.
HornDefinition lgg_learn(const DatabaseInstance& db, const ExampleSet& examples, const BiasSpec& bias,
                         const LearnConfig& cfg);

}  // namespace automode
