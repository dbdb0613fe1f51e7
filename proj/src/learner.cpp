#include "automode/learner.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "automode/conformance.hpp"
#include "automode/coverage.hpp"
#include "automode/errors.hpp"
#include "parallel.hpp"

namespace automode {

void LearnConfig::validate() const {
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (beam_width < 1) throw ConfigError("beam width must be >= 1");
  if (sample_size < 1) throw ConfigError("sample size must be >= 1");
  if (!(min_precision > 0.0 && min_precision <= 1.0)) throw ConfigError("min precision must be in (0,1]");
  if (min_positives && *min_positives < 1) throw ConfigError("min positives must be >= 1");
  if (per_relation_cap < 1) throw ConfigError("per-relation cap must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

int LearnConfig::effective_min_positives(std::size_t positives) const {
  if (min_positives) return *min_positives;
  return positives < 4 ? 1 : 2;
}

BottomClause build_bottom_clause(std::span<const Constant> example, const DatabaseInstance& db,
                                 const BiasSpec& bias, const LearnConfig& cfg) {
  BottomClause out;
  out.seed.assign(example.begin(), example.end());
  out.clause.head.relation = bias.target();

  std::unordered_map<Constant, int> introduced;  // round in which a constant got its variable
  std::vector<Constant> frontier;
  VarId next = 0;
  for (Constant c : example) {
    auto [it, fresh] = out.var_map.emplace(c, next);
    if (fresh) {
      ++next;
      introduced.emplace(c, 0);
      frontier.push_back(c);
    }
    out.clause.head.args.push_back(Term::var(it->second));
  }

  TypingState typing(bias, out.clause.head);
  std::set<Literal> emitted;
  const auto target_idx = db.index_of(bias.target());

  for (int round = 1; round <= cfg.iterations && !frontier.empty(); ++round) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> rows;
    for (Constant c : frontier)
      for (const auto& occ : db.occurrences(c)) rows.emplace_back(occ.relation, occ.row);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

    std::vector<Constant> next_frontier;
    std::unordered_map<std::uint32_t, int> emitted_per_relation;
    for (const auto& [rel_idx, row] : rows) {
      const auto& rel = db.relation(rel_idx);
      const auto tuple = rel.tuple(row);
      if (static_cast<std::ptrdiff_t>(rel_idx) == target_idx &&
          std::equal(tuple.begin(), tuple.end(), example.begin(), example.end()))
        continue;
      for (const auto* mode : bias.modes_for(rel.name())) {
        if (mode->symbols.size() != rel.arity()) continue;
        auto& count = emitted_per_relation[rel_idx];
        if (count >= cfg.per_relation_cap) break;

        bool ok = true;
        for (std::size_t i = 0; i < rel.arity() && ok; ++i) {
          if (mode->symbols[i] != ModeSymbol::Input) continue;
          auto it = introduced.find(tuple[i]);
          ok = it != introduced.end() && it->second < round;
        }
        if (!ok) continue;

        Literal lit{rel.name(), {}};
        std::vector<std::pair<Constant, VarId>> minted;
        for (std::size_t i = 0; i < rel.arity(); ++i) {
          const Constant c = tuple[i];
          if (mode->symbols[i] == ModeSymbol::Constant) {
            lit.args.push_back(Term::constant(c));
          } else if (auto it = out.var_map.find(c); it != out.var_map.end()) {
            lit.args.push_back(Term::var(it->second));
          } else {
            auto m = std::find_if(minted.begin(), minted.end(), [&](const auto& p) { return p.first == c; });
            if (m == minted.end()) {
              minted.emplace_back(c, next + static_cast<VarId>(minted.size()));
              m = minted.end() - 1;
            }
            lit.args.push_back(Term::var(m->second));
          }
        }
        if (emitted.count(lit) || !typing.try_add(lit)) continue;
        for (const auto& [c, v] : minted) {
          out.var_map.emplace(c, v);
          introduced.emplace(c, round);
          next_frontier.push_back(c);
        }
        next += static_cast<VarId>(minted.size());
        emitted.insert(lit);
        out.clause.body.push_back(std::move(lit));
        ++count;
      }
    }
    frontier = std::move(next_frontier);
  }
  return out;
}

namespace {

Clause prefix(const Clause& c, std::size_t n) {
  return Clause{c.head, std::vector<Literal>(c.body.begin(), c.body.begin() + static_cast<std::ptrdiff_t>(n))};
}

}  // namespace

Clause armg(const Clause& clause, std::span<const Constant> example, const DatabaseInstance& db) {
  Clause cur = clause;
  while (!covers(cur, example, db)) {
    if (!covers(prefix(cur, 0), example, db)) return prefix(cur, 0);
    // Least i whose prefix L1..Li fails; prefix coverage is monotone in i.
    std::size_t lo = 1, hi = cur.body.size();
    while (lo < hi) {
      const auto mid = lo + (hi - lo) / 2;
      if (covers(prefix(cur, mid), example, db)) lo = mid + 1;
      else hi = mid;
    }
    cur.body.erase(cur.body.begin() + static_cast<std::ptrdiff_t>(lo - 1));
    cur = remove_disconnected(cur);
  }
  return cur;
}

long score(const Clause& clause, const std::vector<Tuple>& positives, const std::vector<Tuple>& negatives,
           const DatabaseInstance& db) {
  ClauseMatcher m(clause, db);
  long s = 0;
  for (const auto& e : positives) s += m.covers(e) ? 1 : 0;
  for (const auto& e : negatives) s -= m.covers(e) ? 1 : 0;
  return s;
}

Clause negative_reduce(const Clause& clause, const std::vector<Tuple>& negatives, const DatabaseInstance& db,
                       const BiasSpec* bias) {
  Clause cur = clause;
  const auto fp = count_covered(cur, negatives, db);
  std::size_t i = 0;
  while (i < cur.body.size()) {
    Clause candidate = cur;
    candidate.body.erase(candidate.body.begin() + static_cast<std::ptrdiff_t>(i));
    candidate = bias ? prune_to_modes(candidate, *bias) : remove_disconnected(candidate);
    if (count_covered(candidate, negatives, db) <= fp) {
      // Pruning may reorder; restart so no literal is skipped.
      cur = std::move(candidate);
      i = 0;
    } else {
      ++i;
    }
  }
  return cur;
}

namespace {

struct Scored {
  Clause clause;
  long score = 0;
  std::string text;
};

bool better(const Scored& a, const Scored& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.clause.body.size() != b.clause.body.size()) return a.clause.body.size() < b.clause.body.size();
  return a.text < b.text;
}

std::string key_of(const Clause& c, const DatabaseInstance& db) { return format_clause(c, db.symbols()); }

}  // namespace

Clause generalize_clause(const BottomClause& bottom, const std::vector<Tuple>& positives,
                         const std::vector<Tuple>& negatives, const DatabaseInstance& db,
                         const LearnConfig& cfg, std::mt19937_64& rng, const BiasSpec* bias) {
  Scored best{bottom.clause, score(bottom.clause, positives, negatives, db), key_of(bottom.clause, db)};
  std::vector<Scored> beam{best};

  while (true) {
    std::vector<Tuple> sample;
    std::sample(positives.begin(), positives.end(), std::back_inserter(sample),
                static_cast<std::size_t>(cfg.sample_size), rng);

    std::vector<Scored> candidates;
    std::set<std::string> seen;
    for (const auto& b : beam) {
      ClauseMatcher matcher(b.clause, db);
      for (const auto& e : sample) {
        if (matcher.covers(e)) continue;
        Clause c = armg(b.clause, e, db);
        if (bias) c = prune_to_modes(c, *bias);
        auto text = key_of(c, db);
        if (seen.insert(text).second) candidates.push_back(Scored{std::move(c), 0, std::move(text)});
      }
    }
    if (candidates.empty()) break;

    detail::parallel_for(candidates.size(), cfg.jobs, [&](std::size_t i) {
      candidates[i].score = score(candidates[i].clause, positives, negatives, db);
    });
    std::sort(candidates.begin(), candidates.end(), better);
    if (candidates.size() > static_cast<std::size_t>(cfg.beam_width))
      candidates.resize(static_cast<std::size_t>(cfg.beam_width));
    if (candidates.front().score <= best.score) break;
    best = candidates.front();
    beam = std::move(candidates);
  }

  Clause result = minimize(best.clause, cfg.deep_reduce);
  if (cfg.negative_reduction) result = negative_reduce(result, negatives, db, bias);
  return result;
}

HornDefinition cover_set(const DatabaseInstance& db, const std::vector<Tuple>& positives,
                         const std::vector<Tuple>& negatives, const LearnConfig& cfg,
                         const ClauseLearner& learn_clause) {
  HornDefinition def;
  std::vector<Tuple> uncovered = positives;
  std::mt19937_64 rng(cfg.rng_seed);
  const auto min_pos = static_cast<std::size_t>(cfg.effective_min_positives(positives.size()));

  while (!uncovered.empty()) {
    Clause c = learn_clause(uncovered, negatives, rng);
    const auto covered = coverage(c, uncovered, db);
    const auto tp = static_cast<std::size_t>(std::count(covered.begin(), covered.end(), true));
    const auto fp = count_covered(c, negatives, db);
    const double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp > 0 && covered[0] && precision >= cfg.min_precision && tp >= min_pos) {
      def.clauses.push_back(std::move(c));
      std::vector<Tuple> rest;
      for (std::size_t i = 0; i < uncovered.size(); ++i)
        if (!covered[i]) rest.push_back(std::move(uncovered[i]));
      uncovered = std::move(rest);
    } else {
      uncovered.erase(uncovered.begin());
    }
  }
  return def;
}

HornDefinition learn_definition(const DatabaseInstance& db, const ExampleSet& examples, const BiasSpec& bias,
                                const LearnConfig& cfg) {
  cfg.validate();
  if (!examples.target.name.empty() && examples.target.name != bias.target())
    throw ConfigError("examples target " + examples.target.name + " differs from bias head " + bias.target());
  return cover_set(db, examples.positives, examples.negatives, cfg,
                   [&](const std::vector<Tuple>& uncovered, const std::vector<Tuple>& negatives,
                       std::mt19937_64& rng) {
                     auto bottom = build_bottom_clause(uncovered.front(), db, bias, cfg);
                     return generalize_clause(bottom, uncovered, negatives, db, cfg, rng, &bias);
                   });
}

}  // namespace automode
