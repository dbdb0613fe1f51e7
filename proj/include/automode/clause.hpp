#pragma once

// Hypothesis language: terms, literals, Horn clauses and definitions, and
// their text format:
//   advisedBy(X0,X1) :- publication(Z0,X0), publication(Z0,X1), inPhase(X0,"post_quals").

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "automode/relstore.hpp"

namespace automode {

using VarId = std::uint32_t;

struct Term {
  enum class Kind : std::uint8_t { Variable, Constant };

  Kind kind = Kind::Variable;
  std::uint32_t id = 0;  // VarId or Constant

  static Term var(VarId v) { return Term{Kind::Variable, v}; }
  static Term constant(Constant c) { return Term{Kind::Constant, c}; }
  bool is_var() const { return kind == Kind::Variable; }
  bool is_const() const { return kind == Kind::Constant; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

struct Literal {
  std::string relation;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

struct Clause {
  Literal head;
  std::vector<Literal> body;

  /// Distinct variables, ascending.
  std::vector<VarId> variables() const;
  /// One past the largest variable id (0 when there are none).
  VarId next_var() const;

  friend bool operator==(const Clause&, const Clause&) = default;
};

struct HornDefinition {
  std::vector<Clause> clauses;
};

/// Renames variables to 0..n-1: head variables first, then body variables in
/// order of first appearance.
Clause canonical_variables(const Clause& c);

/// Drops body literals not reachable from the head through shared variables.
Clause remove_disconnected(const Clause& c);

std::string format_literal(const Literal& l, const SymbolTable& symbols,
                           const std::vector<std::string>* var_names = nullptr);
/// Head variables print as X0,X1,..., body-only variables as Z0,Z1,... in
/// order of first appearance; constants are double-quoted.
std::string format_clause(const Clause& c, const SymbolTable& symbols);
std::string format_definition(const HornDefinition& def, const SymbolTable& symbols);

/// Parses the clause text format. Bare identifiers are variables, quoted
/// strings are constants (interned into `symbols`). Throws LoadError.
Clause parse_clause(std::string_view text, SymbolTable& symbols);
/// One clause per non-comment line.
HornDefinition parse_definition(std::string_view text, SymbolTable& symbols);

}  // namespace automode
