#pragma once

// Bias induction: type graph over attributes, predicate declarations from
// the type assignment, and mode declarations from column statistics.

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "automode/bias.hpp"
#include "automode/profiler.hpp"
#include "automode/relstore.hpp"

namespace automode {

struct TypeToken {
  int type = 0;
  bool approx_crossed = false;  // reached its node over an approximate edge

  friend bool operator==(const TypeToken&, const TypeToken&) = default;
  friend auto operator<=>(const TypeToken&, const TypeToken&) = default;
};

struct TypeEdge {
  std::size_t from = 0;  // lhs of the IND
  std::size_t to = 0;    // rhs of the IND
  bool exact = true;
  double error = 0.0;
};

struct TypeGraph {
  std::vector<AttributeRef> nodes;  // schema order
  std::vector<TypeEdge> edges;
  std::vector<std::set<TypeToken>> tokens;
  /// Nodes that received a fresh type directly, indexed by type.
  std::vector<std::vector<std::size_t>> type_origins;

  std::size_t type_count() const { return type_origins.size(); }
  /// Distinct type ids at a node, ascending.
  std::vector<int> types(std::size_t node) const;
  std::vector<int> types(const AttributeRef& attr) const;
  std::ptrdiff_t node_of(const AttributeRef& attr) const;

  static std::string type_name(int type) { return "T" + std::to_string(type + 1); }
};

/// Builds the graph from deduplicated INDs: sink strongly connected
/// components and non-trivial components get fresh types, which then flow
/// against edge direction; a token crosses at most one approximate edge.
/// Nodes still untyped afterwards get a fresh type of their own.
TypeGraph build_type_graph(const std::vector<RelationSchema>& schema, const IndSet& inds);

/// Cartesian product of attribute types per relation.
std::vector<PredicateDecl> generate_predicates(const TypeGraph& graph);

struct ModeSet {
  ModeDecl head;
  std::vector<ModeDecl> body;
};

/// Head mode (all +) for the target, plus `+`/`-` base modes and `#`
/// variants for every non-empty subset of constant-eligible attributes of
/// every other relation. Throws ConfigError when threshold < 1.
ModeSet generate_modes(const DatabaseInstance& db, const std::vector<RelationSchema>& schema,
                       int threshold, const std::string& target);

std::vector<RelationSchema> schemas_of(const DatabaseInstance& db);

/// discover_inds -> dedupe_bidirectional -> type graph -> predicates + modes.
BiasSpec induce_bias(const DatabaseInstance& db, double alpha, int threshold,
                     const std::string& target);

}  // namespace automode
