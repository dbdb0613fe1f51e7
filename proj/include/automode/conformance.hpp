#pragma once

// Checks a clause against a language bias: every body literal must satisfy a
// mode declaration, and the variables must admit a consistent typing under
// one predicate declaration per literal.

#include <map>
#include <string>
#include <vector>

#include "automode/bias.hpp"
#include "automode/clause.hpp"

namespace automode {

bool literal_matches_mode(const Literal& lit, const ModeDecl& mode, const std::vector<bool>& seen);

/// Body literals that can be ordered so that each satisfies a mode whose `+`
/// variables occur in the head or an earlier literal; the rest are dropped.
Clause prune_to_modes(const Clause& clause, const BiasSpec& bias);

/// True iff some choice of one PredicateDecl per literal (head included)
/// gives every variable a single type. A head relation without declarations
/// is unconstrained; a body relation without declarations fails.
bool types_consistent(const Clause& clause, const BiasSpec& bias);

bool conforms(const Clause& clause, const BiasSpec& bias);

/// Incremental typing used while a clause grows literal by literal.
class TypingState {
 public:
  TypingState(const BiasSpec& bias, const Literal& head);

  /// Adds the literal if the clause stays consistently typed.
  bool try_add(const Literal& lit);

 private:
  struct Entry {
    std::vector<std::vector<int>> decls;  // candidate type vectors
    std::vector<Term> args;
  };

  Entry make_entry(const Literal& lit, bool& known) const;
  bool extend(const Entry& e, std::map<VarId, int>& types) const;
  bool solve(std::vector<const Entry*> pending, std::map<VarId, int>& types) const;

  const BiasSpec& bias_;
  mutable std::map<std::string, int> type_ids_;
  std::vector<Entry> entries_;
  std::map<VarId, int> solution_;
};

}  // namespace automode
