#include "automode/coverage.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "automode/errors.hpp"

namespace automode {

ClauseMatcher::ClauseMatcher(const Clause& clause, const DatabaseInstance& db) {
  std::unordered_map<VarId, std::uint32_t> dense;
  auto compile = [&](const Literal& l) {
    std::vector<Arg> args;
    for (const auto& t : l.args) {
      if (t.is_const()) {
        args.push_back(Arg{false, t.id});
      } else {
        auto [it, fresh] = dense.emplace(t.id, static_cast<std::uint32_t>(dense.size()));
        args.push_back(Arg{true, it->second});
      }
    }
    return args;
  };
  head_ = compile(clause.head);
  for (const auto& l : clause.body) {
    const auto* rel = db.find(l.relation);
    if (!rel) throw ValidationError("clause mentions relation absent from database: " + l.relation);
    if (rel->arity() != l.arity())
      throw ValidationError("arity mismatch for " + l.relation + " in clause literal");
    body_.push_back(CompiledLiteral{rel, compile(l)});
  }
  var_count_ = dense.size();
}

bool ClauseMatcher::covers(std::span<const Constant> example) const {
  if (example.size() != head_.size()) return false;
  std::vector<std::uint32_t> bindings(var_count_, kUnbound);
  for (std::size_t i = 0; i < head_.size(); ++i) {
    const auto& a = head_[i];
    if (!a.is_var) {
      if (a.value != example[i]) return false;
    } else if (bindings[a.value] == kUnbound) {
      bindings[a.value] = example[i];
    } else if (bindings[a.value] != example[i]) {
      return false;
    }
  }
  std::vector<std::size_t> all(body_.size());
  std::iota(all.begin(), all.end(), 0);
  for (auto& comp : components(bindings, all))
    if (!solve(bindings, std::move(comp))) return false;
  return true;
}

std::vector<std::vector<std::size_t>> ClauseMatcher::components(
    const std::vector<std::uint32_t>& bindings, const std::vector<std::size_t>& literals) const {
  std::vector<std::size_t> parent(literals.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::unordered_map<std::uint32_t, std::size_t> owner;
  for (std::size_t i = 0; i < literals.size(); ++i) {
    for (const auto& a : body_[literals[i]].args) {
      if (!a.is_var || bindings[a.value] != kUnbound) continue;
      auto [it, fresh] = owner.emplace(a.value, i);
      if (!fresh) parent[find(i)] = find(it->second);
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::unordered_map<std::size_t, std::size_t> group_of;
  for (std::size_t i = 0; i < literals.size(); ++i) {
    auto [it, fresh] = group_of.emplace(find(i), groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(literals[i]);
  }
  return groups;
}

bool ClauseMatcher::solve(std::vector<std::uint32_t>& bindings, std::vector<std::size_t> literals) const {
  while (!literals.empty()) {
    std::size_t best = 0;
    std::size_t best_unbound = std::numeric_limits<std::size_t>::max();
    std::size_t best_estimate = std::numeric_limits<std::size_t>::max();
    std::span<const std::uint32_t> best_rows;
    bool best_indexed = false;

    for (std::size_t k = 0; k < literals.size(); ++k) {
      const auto& lit = body_[literals[k]];
      std::size_t unbound = 0;
      std::span<const std::uint32_t> rows;
      bool indexed = false;
      for (std::size_t p = 0; p < lit.args.size(); ++p) {
        const auto& a = lit.args[p];
        const auto value = a.is_var ? bindings[a.value] : a.value;
        if (value == kUnbound) {
          ++unbound;
          continue;
        }
        auto r = lit.relation->rows_with(p, value);
        if (!indexed || r.size() < rows.size()) {
          rows = r;
          indexed = true;
        }
      }
      const std::size_t estimate = indexed ? rows.size() : lit.relation->size();
      if (estimate == 0) return false;
      if (unbound < best_unbound || (unbound == best_unbound && estimate < best_estimate)) {
        best = k;
        best_unbound = unbound;
        best_estimate = estimate;
        best_rows = rows;
        best_indexed = indexed;
      }
    }

    const auto& lit = body_[literals[best]];
    literals.erase(literals.begin() + static_cast<std::ptrdiff_t>(best));

    if (best_unbound == 0) {
      Tuple t;
      t.reserve(lit.args.size());
      for (const auto& a : lit.args) t.push_back(a.is_var ? bindings[a.value] : a.value);
      if (!lit.relation->contains(t)) return false;
      continue;
    }

    std::vector<std::uint32_t> newly;
    auto try_row = [&](std::size_t row) {
      newly.clear();
      for (std::size_t p = 0; p < lit.args.size(); ++p) {
        const auto& a = lit.args[p];
        const auto v = lit.relation->at(row, p);
        if (!a.is_var) {
          if (a.value != v) return false;
        } else if (bindings[a.value] == kUnbound) {
          bindings[a.value] = v;
          newly.push_back(a.value);
        } else if (bindings[a.value] != v) {
          return false;
        }
      }
      return true;
    };
    auto undo = [&] {
      for (auto v : newly) bindings[v] = kUnbound;
    };

    const std::size_t n = best_indexed ? best_rows.size() : lit.relation->size();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t row = best_indexed ? best_rows[i] : i;
      if (try_row(row)) {
        bool ok = true;
        for (auto& comp : components(bindings, literals)) {
          if (!solve(bindings, std::move(comp))) {
            ok = false;
            break;
          }
        }
        if (ok) {
          undo();
          return true;
        }
      }
      undo();
    }
    return false;
  }
  return true;
}

bool covers(const Clause& clause, std::span<const Constant> example, const DatabaseInstance& db) {
  return ClauseMatcher(clause, db).covers(example);
}

bool covers_definition(const HornDefinition& def, std::span<const Constant> example,
                       const DatabaseInstance& db) {
  for (const auto& c : def.clauses)
    if (covers(c, example, db)) return true;
  return false;
}

std::vector<bool> coverage(const Clause& clause, const std::vector<Tuple>& examples,
                           const DatabaseInstance& db) {
  ClauseMatcher m(clause, db);
  std::vector<bool> out(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) out[i] = m.covers(examples[i]);
  return out;
}

std::size_t count_covered(const Clause& clause, const std::vector<Tuple>& examples,
                          const DatabaseInstance& db) {
  ClauseMatcher m(clause, db);
  std::size_t n = 0;
  for (const auto& e : examples) n += m.covers(e) ? 1 : 0;
  return n;
}

namespace {

constexpr std::uint32_t kFrozenVarBit = 0x80000000u;

Constant freeze(const Term& t) { return t.is_var() ? (t.id | kFrozenVarBit) : t.id; }

}  // namespace

bool theta_subsumes(const Clause& c, const Clause& d) {
  if (c.head.relation != d.head.relation || c.head.arity() != d.head.arity()) return false;

  DatabaseInstance frozen;
  std::unordered_map<std::string, std::size_t> arity;
  auto declare = [&](const Literal& l) {
    auto [it, fresh] = arity.emplace(l.relation, l.arity());
    if (!fresh) return it->second == l.arity();
    RelationSchema s{l.relation, {}};
    for (std::size_t i = 0; i < l.arity(); ++i) s.attributes.push_back("a" + std::to_string(i));
    frozen.add_relation(std::move(s));
    return true;
  };
  for (const auto& l : d.body)
    if (!declare(l)) return false;
  for (const auto& l : c.body)
    if (!declare(l)) return false;

  for (const auto& l : d.body) {
    Tuple t;
    for (const auto& term : l.args) t.push_back(freeze(term));
    frozen.insert(static_cast<std::size_t>(frozen.index_of(l.relation)), t);
  }
  Tuple head;
  for (const auto& term : d.head.args) head.push_back(freeze(term));
  return ClauseMatcher(c, frozen).covers(head);
}

Clause minimize(const Clause& clause, bool deep) {
  Clause out{clause.head, {}};
  for (const auto& l : clause.body)
    if (std::find(out.body.begin(), out.body.end(), l) == out.body.end()) out.body.push_back(l);
  if (!deep) return out;

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = out.body.size(); i-- > 0;) {
      Clause candidate = out;
      candidate.body.erase(candidate.body.begin() + static_cast<std::ptrdiff_t>(i));
      if (theta_subsumes(out, candidate)) {
        out = std::move(candidate);
        changed = true;
      }
    }
  }
  return out;
}

}  // namespace automode
