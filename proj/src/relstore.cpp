#include "automode/relstore.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "automode/errors.hpp"
#include "text_util.hpp"

namespace automode {

Constant SymbolTable::intern(std::string_view value) {
  auto it = ids_.find(std::string(value));
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<Constant>(names_.size());
  names_.emplace_back(value);
  ids_.emplace(names_.back(), id);
  return id;
}

bool SymbolTable::lookup(std::string_view value, Constant& out) const {
  auto it = ids_.find(std::string(value));
  if (it == ids_.end()) return false;
  out = it->second;
  return true;
}

std::string RelationSchema::to_string() const {
  std::string s = name + "(";
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (i) s += ',';
    s += attributes[i];
  }
  return s + ")";
}

RelationSchema parse_schema_line(std::string_view line) {
  const auto text = detail::trim(line);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')' || open == 0)
    throw LoadError("malformed schema line: '" + std::string(text) + "'");
  RelationSchema schema;
  schema.name = std::string(detail::trim(text.substr(0, open)));
  if (!detail::is_identifier(schema.name))
    throw LoadError("invalid relation name: '" + schema.name + "'");
  for (auto& attr : detail::split(text.substr(open + 1, text.size() - open - 2), ',')) {
    auto a = std::string(detail::trim(attr));
    if (a.empty()) throw LoadError("empty attribute name in '" + std::string(text) + "'");
    if (std::find(schema.attributes.begin(), schema.attributes.end(), a) != schema.attributes.end())
      throw LoadError("duplicate attribute '" + a + "' in relation " + schema.name);
    schema.attributes.push_back(std::move(a));
  }
  if (schema.attributes.empty()) throw LoadError("relation " + schema.name + " has arity 0");
  return schema;
}

std::size_t Relation::TupleHash::operator()(const Tuple& t) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (Constant c : t) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Relation::Relation(RelationSchema schema)
    : schema_(std::move(schema)), by_position_(schema_.arity()) {}

std::span<const std::uint32_t> Relation::rows_with(std::size_t pos, Constant c) const {
  const auto& idx = by_position_[pos];
  auto it = idx.find(c);
  if (it == idx.end()) return {};
  return it->second;
}

bool Relation::contains(std::span<const Constant> t) const {
  return rows_.count(Tuple(t.begin(), t.end())) != 0;
}

bool Relation::insert(std::span<const Constant> t) {
  Tuple key(t.begin(), t.end());
  const auto row = static_cast<std::uint32_t>(size());
  if (!rows_.emplace(std::move(key), row).second) return false;
  data_.insert(data_.end(), t.begin(), t.end());
  for (std::size_t p = 0; p < t.size(); ++p) by_position_[p][t[p]].push_back(row);
  return true;
}

void Relation::clear() {
  data_.clear();
  rows_.clear();
  for (auto& idx : by_position_) idx.clear();
}

DatabaseInstance::DatabaseInstance() : symbols_(std::make_shared<SymbolTable>()) {}

DatabaseInstance::DatabaseInstance(std::shared_ptr<SymbolTable> symbols)
    : symbols_(std::move(symbols)) {}

std::size_t DatabaseInstance::add_relation(RelationSchema schema) {
  if (schema.arity() == 0) throw LoadError("relation " + schema.name + " has arity 0");
  if (by_name_.count(schema.name)) throw LoadError("relation declared twice: " + schema.name);
  const auto idx = relations_.size();
  by_name_.emplace(schema.name, idx);
  relations_.emplace_back(std::move(schema));
  return idx;
}

const Relation* DatabaseInstance::find(std::string_view name) const {
  auto i = index_of(name);
  return i < 0 ? nullptr : &relations_[static_cast<std::size_t>(i)];
}

std::ptrdiff_t DatabaseInstance::index_of(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  return it == by_name_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

const Relation& DatabaseInstance::relation(std::string_view name) const {
  const auto* r = find(name);
  if (!r) throw LoadError("unknown relation: " + std::string(name));
  return *r;
}

bool DatabaseInstance::insert(std::string_view relation, const std::vector<std::string>& values) {
  const auto idx = index_of(relation);
  if (idx < 0) throw LoadError("unknown relation: " + std::string(relation));
  Tuple t;
  t.reserve(values.size());
  for (const auto& v : values) t.push_back(symbols_->intern(v));
  return insert(static_cast<std::size_t>(idx), t);
}

bool DatabaseInstance::insert(std::size_t relation, std::span<const Constant> t) {
  auto& rel = relations_.at(relation);
  if (t.size() != rel.arity())
    throw LoadError("arity mismatch for relation " + rel.name() + ": expected " +
                    std::to_string(rel.arity()) + ", got " + std::to_string(t.size()));
  const auto row = static_cast<std::uint32_t>(rel.size());
  if (!rel.insert(t)) return false;
  for (std::size_t p = 0; p < t.size(); ++p) {
    auto& occ = index_[t[p]];
    const Occurrence o{static_cast<std::uint32_t>(relation), static_cast<std::uint32_t>(p), row};
    occ.insert(std::upper_bound(occ.begin(), occ.end(), o), o);
  }
  return true;
}

void DatabaseInstance::replace_tuples(std::size_t relation, const std::vector<Tuple>& tuples) {
  relations_.at(relation).clear();
  for (const auto& t : tuples) {
    if (t.size() != relations_[relation].arity())
      throw LoadError("arity mismatch for relation " + relations_[relation].name());
    relations_[relation].insert(t);
  }
  rebuild_index();
}

std::size_t DatabaseInstance::tuple_count() const {
  std::size_t n = 0;
  for (const auto& r : relations_) n += r.size();
  return n;
}

std::vector<AttributeRef> DatabaseInstance::attributes() const {
  std::vector<AttributeRef> out;
  for (std::size_t r = 0; r < relations_.size(); ++r)
    for (std::size_t p = 0; p < relations_[r].arity(); ++p) out.push_back(attribute(r, p));
  return out;
}

AttributeRef DatabaseInstance::attribute(std::size_t relation, std::size_t position) const {
  const auto& s = relations_.at(relation).schema();
  return AttributeRef{s.name, position, s.attributes.at(position)};
}

std::span<const Occurrence> DatabaseInstance::occurrences(Constant c) const {
  auto it = index_.find(c);
  if (it == index_.end()) return {};
  return it->second;
}

std::unordered_map<Constant, std::vector<Occurrence>> DatabaseInstance::compute_index() const {
  std::unordered_map<Constant, std::vector<Occurrence>> idx;
  for (std::size_t r = 0; r < relations_.size(); ++r) {
    const auto& rel = relations_[r];
    for (std::size_t row = 0; row < rel.size(); ++row)
      for (std::size_t p = 0; p < rel.arity(); ++p)
        idx[rel.at(row, p)].push_back(Occurrence{static_cast<std::uint32_t>(r),
                                                 static_cast<std::uint32_t>(p),
                                                 static_cast<std::uint32_t>(row)});
  }
  for (auto& [c, occ] : idx) std::sort(occ.begin(), occ.end());
  return idx;
}

void DatabaseInstance::rebuild_index() { index_ = compute_index(); }

bool DatabaseInstance::index_consistent() const {
  auto fresh = compute_index();
  if (fresh.size() != index_.size()) return false;
  for (const auto& [c, occ] : index_) {
    auto it = fresh.find(c);
    if (it == fresh.end()) return false;
    auto sorted = occ;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != it->second) return false;
  }
  return true;
}

std::string DatabaseInstance::dump() const {
  std::ostringstream out;
  for (const auto& r : relations_) out << r.schema().to_string() << '\n';
  for (const auto& r : relations_) {
    std::vector<std::string> rows;
    for (std::size_t row = 0; row < r.size(); ++row) {
      std::string line = r.name();
      for (Constant c : r.tuple(row)) line += ',' + symbols_->name(c);
      rows.push_back(std::move(line));
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& line : rows) out << line << '\n';
  }
  return out.str();
}

std::vector<RelationSchema> load_schema(const std::filesystem::path& schema_file) {
  std::ifstream in(schema_file);
  if (!in) throw LoadError("cannot open schema file: " + schema_file.string());
  std::vector<RelationSchema> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    try {
      out.push_back(parse_schema_line(t));
    } catch (const LoadError& e) {
      throw LoadError(schema_file.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

DatabaseInstance load_database(const std::filesystem::path& schema_file,
                               const std::filesystem::path& facts_dir) {
  DatabaseInstance db;
  for (auto& s : load_schema(schema_file)) db.add_relation(std::move(s));

  if (std::filesystem::is_directory(facts_dir)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(facts_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      const auto relname = file.stem().string();
      const auto idx = db.index_of(relname);
      if (idx < 0) throw LoadError("facts file for unknown relation: " + file.string());
      const auto& schema = db.relation(static_cast<std::size_t>(idx)).schema();

      std::ifstream in(file);
      if (!in) throw LoadError("cannot open facts file: " + file.string());
      std::string line;
      std::size_t lineno = 0;
      bool header_seen = false;
      while (std::getline(in, line)) {
        ++lineno;
        auto t = detail::trim(line);
        if (t.empty()) continue;
        std::vector<std::string> values;
        for (auto v : detail::split(t, ',')) values.emplace_back(detail::trim(v));
        const auto where = relname + " (" + file.string() + ":" + std::to_string(lineno) + ")";
        if (!header_seen) {
          header_seen = true;
          if (values != schema.attributes)
            throw LoadError("header does not match schema " + schema.to_string() + " in " + where);
          continue;
        }
        if (values.size() != schema.arity())
          throw LoadError("arity mismatch in " + where + ": expected " +
                          std::to_string(schema.arity()) + " values, got " +
                          std::to_string(values.size()));
        for (const auto& v : values)
          if (v.empty()) throw LoadError("missing value in " + where);
        db.insert(static_cast<std::size_t>(idx), [&] {
          Tuple tup;
          for (const auto& v : values) tup.push_back(db.symbols().intern(v));
          return tup;
        }());
      }
    }
  } else if (std::filesystem::exists(facts_dir)) {
    throw LoadError("facts path is not a directory: " + facts_dir.string());
  }
  db.rebuild_index();
  return db;
}

namespace {

struct ParsedAtom {
  std::string relation;
  std::vector<std::string> values;
};

ParsedAtom parse_ground_atom(std::string_view text) {
  text = detail::trim(text);
  if (!text.empty() && text.back() == '.') text = detail::trim(text.substr(0, text.size() - 1));
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.empty() || text.back() != ')')
    throw LoadError("malformed example: '" + std::string(text) + "'");
  ParsedAtom atom;
  atom.relation = std::string(detail::trim(text.substr(0, open)));
  for (auto v : detail::split(text.substr(open + 1, text.size() - open - 2), ',')) {
    auto value = std::string(detail::trim(v));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (value.empty()) throw LoadError("missing value in example: '" + std::string(text) + "'");
    atom.values.push_back(std::move(value));
  }
  return atom;
}

}  // namespace

ExampleSet parse_examples(std::string_view text, DatabaseInstance& db) {
  ExampleSet set;
  bool have_target = false;
  std::set<Tuple> pos_seen, neg_seen;
  std::size_t lineno = 0;
  for (auto raw : detail::split(text, '\n')) {
    ++lineno;
    auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    bool positive;
    std::string_view rest;
    if (line.front() == '+' || line.front() == '-') {
      positive = line.front() == '+';
      rest = line.substr(1);
    } else if (line.substr(0, 3) == "\xE2\x88\x92") {  // U+2212 minus sign
      positive = false;
      rest = line.substr(3);
    } else {
      throw LoadError("line " + std::to_string(lineno) + ": example label must be + or -");
    }
    auto atom = parse_ground_atom(rest);
    if (!have_target) {
      have_target = true;
      if (const auto* r = db.find(atom.relation)) {
        set.target = r->schema();
      } else {
        set.target.name = atom.relation;
        for (std::size_t i = 0; i < atom.values.size(); ++i)
          set.target.attributes.push_back("a" + std::to_string(i));
      }
    }
    if (atom.relation != set.target.name)
      throw LoadError("line " + std::to_string(lineno) + ": examples mix relations " +
                      set.target.name + " and " + atom.relation);
    if (atom.values.size() != set.target.arity())
      throw LoadError("line " + std::to_string(lineno) + ": arity mismatch for " + atom.relation);
    Tuple t;
    for (const auto& v : atom.values) t.push_back(db.symbols().intern(v));
    auto& own = positive ? pos_seen : neg_seen;
    auto& other = positive ? neg_seen : pos_seen;
    if (other.count(t))
      throw ValidationError("example labeled both + and -: " +
                            tuple_to_string(db.symbols(), atom.relation, t));
    if (own.insert(t).second) (positive ? set.positives : set.negatives).push_back(std::move(t));
  }
  return set;
}

ExampleSet load_examples(const std::filesystem::path& examples_file, DatabaseInstance& db) {
  std::ifstream in(examples_file);
  if (!in) throw LoadError("cannot open examples file: " + examples_file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_examples(buf.str(), db);
}

void attach_target(DatabaseInstance& db, const ExampleSet& examples) {
  if (examples.target.name.empty()) return;
  auto idx = db.index_of(examples.target.name);
  if (idx < 0) idx = static_cast<std::ptrdiff_t>(db.add_relation(examples.target));
  db.replace_tuples(static_cast<std::size_t>(idx), examples.positives);
}

AttributeStats attribute_stats(const DatabaseInstance& db, const AttributeRef& attr) {
  const auto* rel = db.find(attr.relation);
  if (!rel || attr.position >= rel->arity())
    throw LoadError("unknown attribute: " + attr.relation + "[" + std::to_string(attr.position) + "]");
  AttributeStats stats;
  stats.attribute = db.attribute(static_cast<std::size_t>(db.index_of(attr.relation)), attr.position);
  stats.distinct_values.reserve(rel->size());
  for (std::size_t row = 0; row < rel->size(); ++row)
    stats.distinct_values.push_back(rel->at(row, attr.position));
  std::sort(stats.distinct_values.begin(), stats.distinct_values.end());
  stats.distinct_values.erase(std::unique(stats.distinct_values.begin(), stats.distinct_values.end()),
                              stats.distinct_values.end());
  stats.distinct_count = stats.distinct_values.size();
  return stats;
}

std::string tuple_to_string(const SymbolTable& symbols, std::string_view relation,
                            std::span<const Constant> t) {
  std::string s(relation);
  s += '(';
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ',';
    s += symbols.name(t[i]);
  }
  return s + ')';
}

}  // namespace automode
