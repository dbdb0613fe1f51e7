#include "automode/conformance.hpp"

#include <algorithm>
#include <limits>

namespace automode {

bool literal_matches_mode(const Literal& lit, const ModeDecl& mode, const std::vector<bool>& seen) {
  if (lit.relation != mode.relation || lit.arity() != mode.symbols.size()) return false;
  for (std::size_t i = 0; i < lit.arity(); ++i) {
    const auto& t = lit.args[i];
    switch (mode.symbols[i]) {
      case ModeSymbol::Input:
        if (!t.is_var() || t.id >= seen.size() || !seen[t.id]) return false;
        break;
      case ModeSymbol::Output:
        if (!t.is_var()) return false;
        break;
      case ModeSymbol::Constant:
        if (!t.is_const()) return false;
        break;
    }
  }
  return true;
}

Clause prune_to_modes(const Clause& clause, const BiasSpec& bias) {
  std::vector<bool> seen(clause.next_var(), false);
  for (const auto& t : clause.head.args)
    if (t.is_var()) seen[t.id] = true;

  std::vector<bool> placed(clause.body.size(), false);
  std::vector<std::size_t> order;
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i < clause.body.size(); ++i) {
      if (placed[i]) continue;
      const auto& lit = clause.body[i];
      bool ok = false;
      for (const auto* m : bias.modes_for(lit.relation))
        if (literal_matches_mode(lit, *m, seen)) {
          ok = true;
          break;
        }
      if (!ok) continue;
      placed[i] = true;
      order.push_back(i);
      for (const auto& t : lit.args)
        if (t.is_var()) seen[t.id] = true;
      progress = true;
      break;  // restart so earlier literals keep precedence
    }
  }
  Clause out{clause.head, {}};
  for (auto i : order) out.body.push_back(clause.body[i]);
  return out;
}

TypingState::TypingState(const BiasSpec& bias, const Literal& head) : bias_(bias) {
  bool known = false;
  auto e = make_entry(head, known);
  if (known) {
    entries_.push_back(e);
    extend(entries_.back(), solution_);
  }
}

TypingState::Entry TypingState::make_entry(const Literal& lit, bool& known) const {
  Entry e;
  e.args = lit.args;
  for (const auto* p : bias_.predicates_for(lit.relation)) {
    if (p->types.size() != lit.arity()) continue;
    std::vector<int> ids;
    for (const auto& t : p->types) ids.push_back(type_ids_.emplace(t, static_cast<int>(type_ids_.size())).first->second);
    e.decls.push_back(std::move(ids));
  }
  known = !e.decls.empty();
  return e;
}

namespace {

bool decl_fits(const std::vector<int>& decl, const std::vector<Term>& args, const std::map<VarId, int>& types,
               std::map<VarId, int>* pending = nullptr) {
  std::map<VarId, int> local;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (!args[i].is_var()) continue;
    const auto v = args[i].id;
    if (auto it = types.find(v); it != types.end()) {
      if (it->second != decl[i]) return false;
    } else if (auto jt = local.find(v); jt != local.end()) {
      if (jt->second != decl[i]) return false;
    } else {
      local.emplace(v, decl[i]);
    }
  }
  if (pending) *pending = std::move(local);
  return true;
}

}  // namespace

bool TypingState::extend(const Entry& e, std::map<VarId, int>& types) const {
  for (const auto& decl : e.decls) {
    std::map<VarId, int> fresh;
    if (decl_fits(decl, e.args, types, &fresh)) {
      types.insert(fresh.begin(), fresh.end());
      return true;
    }
  }
  return false;
}

bool TypingState::solve(std::vector<const Entry*> pending, std::map<VarId, int>& types) const {
  while (!pending.empty()) {
    std::size_t best = 0;
    std::size_t best_count = std::numeric_limits<std::size_t>::max();
    for (std::size_t k = 0; k < pending.size(); ++k) {
      std::size_t count = 0;
      for (const auto& d : pending[k]->decls) count += decl_fits(d, pending[k]->args, types) ? 1 : 0;
      if (count == 0) return false;
      if (count < best_count) {
        best = k;
        best_count = count;
      }
    }
    const Entry* e = pending[best];
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));

    bool all_bound = true;
    for (const auto& t : e->args)
      if (t.is_var() && !types.count(t.id)) all_bound = false;
    if (all_bound) continue;

    for (const auto& d : e->decls) {
      std::map<VarId, int> fresh;
      if (!decl_fits(d, e->args, types, &fresh)) continue;
      types.insert(fresh.begin(), fresh.end());
      if (solve(pending, types)) return true;
      for (const auto& [v, t] : fresh) types.erase(v);
    }
    return false;
  }
  return true;
}

bool TypingState::try_add(const Literal& lit) {
  bool known = false;
  auto e = make_entry(lit, known);
  if (!known) return false;
  auto extended = solution_;
  if (extend(e, extended)) {
    entries_.push_back(std::move(e));
    solution_ = std::move(extended);
    return true;
  }
  entries_.push_back(std::move(e));
  std::vector<const Entry*> all;
  for (const auto& x : entries_) all.push_back(&x);
  std::map<VarId, int> types;
  if (solve(all, types)) {
    solution_ = std::move(types);
    return true;
  }
  entries_.pop_back();
  return false;
}

bool types_consistent(const Clause& clause, const BiasSpec& bias) {
  TypingState state(bias, clause.head);
  for (const auto& l : clause.body)
    if (!state.try_add(l)) return false;
  return true;
}

bool conforms(const Clause& clause, const BiasSpec& bias) {
  if (clause.head.relation != bias.target() || clause.head.arity() != bias.head_mode.symbols.size())
    return false;
  for (const auto& t : clause.head.args)
    if (!t.is_var()) return false;
  if (prune_to_modes(clause, bias).body.size() != clause.body.size()) return false;
  return types_consistent(clause, bias);
}

}  // namespace automode
