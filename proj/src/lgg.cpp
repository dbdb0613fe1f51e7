#include "automode/lgg.hpp"

#include <algorithm>
#include <set>

#include "automode/coverage.hpp"
#include "automode/errors.hpp"

namespace automode {

Term VarPairTable::variable_for(const Term& a, const Term& b) {
  auto [it, fresh] = pairs_.emplace(std::make_pair(a, b), next_);
  if (fresh) ++next_;
  return Term::var(it->second);
}

Term lgg_terms(const Term& a, const Term& b, VarPairTable& table) {
  if (a == b) return a;
  return table.variable_for(a, b);
}

Clause lgg_clauses(const Clause& c1, const Clause& c2, bool reduce) {
  if (c1.head.relation != c2.head.relation || c1.head.arity() != c2.head.arity())
    throw ValidationError("lgg of clauses with incompatible heads: " + c1.head.relation + " and " +
                          c2.head.relation);
  VarPairTable table(std::max(c1.next_var(), c2.next_var()));
  auto lgg_literal = [&](const Literal& a, const Literal& b) {
    Literal out{a.relation, {}};
    for (std::size_t i = 0; i < a.arity(); ++i) out.args.push_back(lgg_terms(a.args[i], b.args[i], table));
    return out;
  };

  Clause out;
  out.head = lgg_literal(c1.head, c2.head);
  std::set<Literal> seen;
  for (const auto& a : c1.body)
    for (const auto& b : c2.body) {
      if (a.relation != b.relation || a.arity() != b.arity()) continue;
      auto l = lgg_literal(a, b);
      if (seen.insert(l).second) out.body.push_back(std::move(l));
    }
  return reduce ? minimize(out, true) : out;
}

BiasSpec variable_only_bias(const BiasSpec& bias) {
  BiasSpec out;
  out.predicates = bias.predicates;
  out.head_mode = bias.head_mode;
  out.constant_threshold = bias.constant_threshold;
  std::set<std::pair<std::string, std::size_t>> relations;
  for (const auto& p : bias.predicates)
    if (p.relation != bias.target()) relations.emplace(p.relation, p.types.size());
  for (const auto& p : bias.predicates) {
    if (!relations.erase({p.relation, p.types.size()})) continue;
    for (std::size_t i = 0; i < p.types.size(); ++i) {
      ModeDecl m{p.relation, std::vector<ModeSymbol>(p.types.size(), ModeSymbol::Output)};
      m.symbols[i] = ModeSymbol::Input;
      out.modes.push_back(std::move(m));
    }
  }
  return out;
}

Clause ground_bottom_clause(std::span<const Constant> example, const DatabaseInstance& db,
                            const BiasSpec& bias, const LearnConfig& cfg) {
  auto bottom = build_bottom_clause(example, db, bias, cfg);
  std::map<VarId, Constant> inverse;
  for (const auto& [c, v] : bottom.var_map) inverse.emplace(v, c);
  auto ground = [&](Literal l) {
    for (auto& t : l.args)
      if (t.is_var()) t = Term::constant(inverse.at(t.id));
    return l;
  };
  Clause out;
  out.head = ground(bottom.clause.head);
  for (const auto& l : bottom.clause.body) out.body.push_back(ground(l));
  return out;
}

HornDefinition lgg_learn(const DatabaseInstance& db, const ExampleSet& examples, const BiasSpec& bias,
                         const LearnConfig& cfg) {
  cfg.validate();
  if (db.tuple_count() > cfg.max_lgg_tuples)
    throw ConfigError("lgg generalization is intractable on this database (" + std::to_string(db.tuple_count()) +
                      " tuples > guard " + std::to_string(cfg.max_lgg_tuples) +
                      "); clause size grows multiplicatively with every lgg step");
  const auto vbias = variable_only_bias(bias);
  return cover_set(db, examples.positives, examples.negatives, cfg,
                   [&](const std::vector<Tuple>& uncovered, const std::vector<Tuple>& negatives,
                       std::mt19937_64&) {
                     Clause current = minimize(ground_bottom_clause(uncovered.front(), db, vbias, cfg), true);
                     long best = score(current, uncovered, negatives, db);
                     int attempts = 0;
                     for (std::size_t i = 1; i < uncovered.size() && attempts < cfg.sample_size; ++i) {
                       if (covers(current, uncovered[i], db)) continue;
                       ++attempts;
                       auto other = ground_bottom_clause(uncovered[i], db, vbias, cfg);
                       auto candidate = remove_disconnected(lgg_clauses(current, other, true));
                       const long s = score(candidate, uncovered, negatives, db);
                       if (s > best) {
                         best = s;
                         current = std::move(candidate);
                       }
                     }
                     return current;
                   });
}

}  // namespace automode
