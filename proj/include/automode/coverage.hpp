#pragma once

// Coverage testing (does a clause entail an example relative to the
// database?) and clause-to-clause theta-subsumption.

#include <span>
#include <vector>

#include "automode/clause.hpp"
#include "automode/relstore.hpp"

namespace automode {

/// A clause compiled against one database. Reusable across examples; the
/// database must outlive the matcher.
///
/// Search is backtracking over body literals, most constrained first
/// (fewest unbound variables, then fewest candidate rows), and the remaining
/// literals are split into independent components whenever a binding
/// disconnects them.
class ClauseMatcher {
 public:
  /// Throws ValidationError when a clause relation is missing from `db` or
  /// a literal's arity disagrees with its schema.
  ClauseMatcher(const Clause& clause, const DatabaseInstance& db);

  bool covers(std::span<const Constant> example) const;

 private:
  static constexpr std::uint32_t kUnbound = 0xFFFFFFFFu;

  struct Arg {
    bool is_var;
    std::uint32_t value;  // dense var index or constant
  };
  struct CompiledLiteral {
    const Relation* relation;
    std::vector<Arg> args;
  };

  bool solve(std::vector<std::uint32_t>& bindings, std::vector<std::size_t> literals) const;
  std::vector<std::vector<std::size_t>> components(const std::vector<std::uint32_t>& bindings,
                                                   const std::vector<std::size_t>& literals) const;

  std::vector<Arg> head_;
  std::vector<CompiledLiteral> body_;
  std::size_t var_count_ = 0;
};

/// True iff some substitution maps the head onto `example` and every body
/// literal onto a tuple of `db`.
bool covers(const Clause& clause, std::span<const Constant> example, const DatabaseInstance& db);

bool covers_definition(const HornDefinition& def, std::span<const Constant> example,
                       const DatabaseInstance& db);

/// Examples (by index) covered by the clause.
std::vector<bool> coverage(const Clause& clause, const std::vector<Tuple>& examples,
                           const DatabaseInstance& db);
std::size_t count_covered(const Clause& clause, const std::vector<Tuple>& examples,
                          const DatabaseInstance& db);

/// C theta-subsumes D: some substitution maps head(C) to head(D) and every
/// body literal of C into body(D).
bool theta_subsumes(const Clause& c, const Clause& d);

/// Removes duplicate body literals (first occurrence kept). With `deep`,
/// also removes every literal whose deletion leaves an equivalent clause
/// under theta-subsumption.
Clause minimize(const Clause& clause, bool deep = false);

}  // namespace automode
