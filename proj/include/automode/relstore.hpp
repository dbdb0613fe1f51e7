#pragma once

// Relational store: schemas, interned constants, fact tables and the
// value index used by bottom-clause construction and coverage testing.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace automode {

/// Interned data constant.
using Constant = std::uint32_t;
using Tuple = std::vector<Constant>;

/// Bidirectional string <-> Constant map shared by a database and every
/// example set, clause and bias derived from it.
class SymbolTable {
 public:
  Constant intern(std::string_view value);
  /// Returns false and leaves `out` untouched when the value was never interned.
  bool lookup(std::string_view value, Constant& out) const;
  const std::string& name(Constant c) const { return names_.at(c); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Constant> ids_;
};

struct AttributeRef {
  std::string relation;
  std::size_t position = 0;
  std::string name;

  std::string to_string() const { return relation + "[" + name + "]"; }

  friend bool operator==(const AttributeRef& a, const AttributeRef& b) {
    return a.relation == b.relation && a.position == b.position;
  }
  friend bool operator<(const AttributeRef& a, const AttributeRef& b) {
    if (a.relation != b.relation) return a.relation < b.relation;
    return a.position < b.position;
  }
};

struct RelationSchema {
  std::string name;
  std::vector<std::string> attributes;

  std::size_t arity() const { return attributes.size(); }
  /// Renders `name(a,b,...)` as written in schema files.
  std::string to_string() const;
};

/// Parses `name(attr1,attr2,...)`. Throws LoadError.
RelationSchema parse_schema_line(std::string_view line);

/// Duplicate-free tuple set of one relation, stored row-major in insertion
/// order, with a per-position value -> row index.
class Relation {
 public:
  explicit Relation(RelationSchema schema);

  const RelationSchema& schema() const { return schema_; }
  const std::string& name() const { return schema_.name; }
  std::size_t arity() const { return schema_.arity(); }
  std::size_t size() const { return arity() == 0 ? 0 : data_.size() / arity(); }
  bool empty() const { return data_.empty(); }

  std::span<const Constant> tuple(std::size_t row) const {
    return {data_.data() + row * arity(), arity()};
  }
  Constant at(std::size_t row, std::size_t pos) const { return data_[row * arity() + pos]; }

  /// Rows whose value at `pos` equals `c`; empty span when none.
  std::span<const std::uint32_t> rows_with(std::size_t pos, Constant c) const;
  bool contains(std::span<const Constant> t) const;

  /// Inserts unless already present. Returns true when inserted.
  bool insert(std::span<const Constant> t);
  void clear();

 private:
  struct TupleHash {
    std::size_t operator()(const Tuple& t) const noexcept;
  };

  RelationSchema schema_;
  std::vector<Constant> data_;
  std::unordered_map<Tuple, std::uint32_t, TupleHash> rows_;
  std::vector<std::unordered_map<Constant, std::vector<std::uint32_t>>> by_position_;
};

/// One occurrence of a constant in the database.
struct Occurrence {
  std::uint32_t relation;
  std::uint32_t position;
  std::uint32_t row;

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
  friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

/// Background knowledge: schemas plus fact tables. Built by the loaders and
/// treated as immutable afterwards.
class DatabaseInstance {
 public:
  DatabaseInstance();
  explicit DatabaseInstance(std::shared_ptr<SymbolTable> symbols);

  SymbolTable& symbols() { return *symbols_; }
  const SymbolTable& symbols() const { return *symbols_; }
  std::shared_ptr<SymbolTable> shared_symbols() const { return symbols_; }

  /// Registers a relation. Throws LoadError on duplicates or invalid schemas.
  std::size_t add_relation(RelationSchema schema);
  std::size_t relation_count() const { return relations_.size(); }
  const Relation& relation(std::size_t index) const { return relations_[index]; }
  const Relation* find(std::string_view name) const;
  /// Index of the relation or -1.
  std::ptrdiff_t index_of(std::string_view name) const;
  const Relation& relation(std::string_view name) const;

  /// Inserts a tuple (string values). Throws LoadError on arity mismatch.
  bool insert(std::string_view relation, const std::vector<std::string>& values);
  bool insert(std::size_t relation, std::span<const Constant> t);
  /// Replaces the tuples of a relation, e.g. to attach target examples.
  void replace_tuples(std::size_t relation, const std::vector<Tuple>& tuples);

  std::size_t tuple_count() const;
  std::vector<AttributeRef> attributes() const;
  AttributeRef attribute(std::size_t relation, std::size_t position) const;

  /// Every (relation, position, row) holding `c`, sorted.
  std::span<const Occurrence> occurrences(Constant c) const;
  /// Recomputes the value index from the tuple sets.
  void rebuild_index();
  /// True when the stored value index equals a fresh rebuild.
  bool index_consistent() const;

  /// Canonical text dump: schema block then `rel,v1,v2` rows.
  std::string dump() const;

 private:
  std::unordered_map<Constant, std::vector<Occurrence>> compute_index() const;

  std::shared_ptr<SymbolTable> symbols_;
  std::vector<Relation> relations_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::unordered_map<Constant, std::vector<Occurrence>> index_;
};

struct ExampleSet {
  RelationSchema target;
  std::vector<Tuple> positives;
  std::vector<Tuple> negatives;
};

struct AttributeStats {
  AttributeRef attribute;
  std::size_t distinct_count = 0;
  std::vector<Constant> distinct_values;  // sorted
};

/// Reads `schema.txt` and `facts_dir/<relation>.csv`. A relation without a
/// facts file loads empty; a CSV with no declared relation is an error.
DatabaseInstance load_database(const std::filesystem::path& schema_file,
                               const std::filesystem::path& facts_dir);

/// Parses the schema file alone.
std::vector<RelationSchema> load_schema(const std::filesystem::path& schema_file);

/// Reads `+ rel(a,b)` / `- rel(a,b)` lines into `db`'s symbol table. The
/// target schema is taken from `db` when declared there, otherwise inferred
/// from the first example.
ExampleSet load_examples(const std::filesystem::path& examples_file, DatabaseInstance& db);
ExampleSet parse_examples(std::string_view text, DatabaseInstance& db);

/// Registers the target relation in `db` (if absent) and makes its tuples the
/// positive examples, so the profiler can type its attributes.
void attach_target(DatabaseInstance& db, const ExampleSet& examples);

AttributeStats attribute_stats(const DatabaseInstance& db, const AttributeRef& attr);

std::string tuple_to_string(const SymbolTable& symbols, std::string_view relation,
                            std::span<const Constant> t);

}  // namespace automode
