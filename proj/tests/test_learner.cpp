#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "automode/biasgen.hpp"
#include "automode/conformance.hpp"
#include "automode/coverage.hpp"
#include "automode/errors.hpp"
#include "automode/fixtures.hpp"
#include "automode/learner.hpp"
#include "support/oracles.hpp"

using namespace automode;

namespace {

constexpr const char* kAliceBobBottom =
    "advisedBy(X,Y) :- student(X), inPhase(X,U), professor(Y), hasPosition(Y,V), publication(Z,X), "
    "publication(Z,Y).";
constexpr const char* kCoPublication = "advisedBy(X,Y) :- publication(Z,X), publication(Z,Y).";

std::string without_line(std::string text, const std::string& line) {
  const auto pos = text.find(line + "\n");
  if (pos != std::string::npos) text.erase(pos, line.size() + 1);
  return text;
}

class Synthetic : public ::testing::Test {
 protected:
  Synthetic() : db(load_fixture(uwcse_fragment())) {
    examples = parse_examples(uwcse_fragment().examples, db);
    attach_target(db, examples);
    manual = parse_bias(uwcse_fragment().bias);
  }

  Tuple tuple(const std::string& a, const std::string& b) {
    return {db.symbols().intern(a), db.symbols().intern(b)};
  }
  Clause clause(const std::string& text) { return parse_clause(text, db.symbols()); }

  DatabaseInstance db;
  ExampleSet examples;
  BiasSpec manual;
};

}  // namespace

TEST_F(Synthetic, BottomClauseWithVariableModesHasSixLiterals) {
  auto bias = parse_bias(without_line(uwcse_fragment().bias, "inPhase(+,#)"));
  LearnConfig cfg;
  cfg.iterations = 1;
  auto bottom = build_bottom_clause(tuple("alice", "bob"), db, bias, cfg);
  EXPECT_TRUE(oracle::variant(bottom.clause, clause(kAliceBobBottom))) << format_clause(bottom.clause, db.symbols());

  ASSERT_EQ(bottom.var_map.size(), 5u);
  std::set<VarId> vars;
  for (const auto& name : {"alice", "bob", "p1", "post_quals", "assistant_prof"}) {
    Constant c;
    ASSERT_TRUE(db.symbols().lookup(name, c));
    ASSERT_TRUE(bottom.var_map.count(c)) << name;
    vars.insert(bottom.var_map.at(c));
  }
  EXPECT_EQ(vars.size(), 5u);
  EXPECT_EQ(bottom.clause.head.args[0], Term::var(bottom.var_map.at(db.symbols().intern("alice"))));
  EXPECT_EQ(bottom.clause.head.args[1], Term::var(bottom.var_map.at(db.symbols().intern("bob"))));
}

TEST_F(Synthetic, BottomClauseWithConstantModeAddsInPhaseConstant) {
  LearnConfig cfg;
  cfg.iterations = 1;
  auto bottom = build_bottom_clause(tuple("alice", "bob"), db, manual, cfg);
  ASSERT_EQ(bottom.clause.body.size(), 7u);
  auto rest = bottom.clause;
  const auto constant_lit = std::find_if(rest.body.begin(), rest.body.end(), [](const Literal& l) {
    return l.relation == "inPhase" && l.args[1].is_const();
  });
  ASSERT_NE(constant_lit, rest.body.end());
  EXPECT_EQ(db.symbols().name(constant_lit->args[1].id), "post_quals");
  rest.body.erase(constant_lit);
  EXPECT_TRUE(oracle::variant(rest, clause(kAliceBobBottom)));
}

TEST_F(Synthetic, BottomClauseOnEmptyDatabaseIsHeadOnly) {
  DatabaseInstance empty;
  for (std::size_t r = 0; r < db.relation_count(); ++r) empty.add_relation(db.relation(r).schema());
  Tuple e{empty.symbols().intern("alice"), empty.symbols().intern("bob")};
  auto bottom = build_bottom_clause(e, empty, manual, LearnConfig{});
  EXPECT_TRUE(bottom.clause.body.empty());
  EXPECT_EQ(bottom.clause.head.relation, "advisedBy");
}

TEST_F(Synthetic, SecondIterationExtendsFirst) {
  LearnConfig one, two;
  one.iterations = 1;
  two.iterations = 2;
  const auto bias = induce_bias(db, 0.5, 5, "advisedBy");
  auto b1 = build_bottom_clause(tuple("alice", "bob"), db, bias, one);
  auto b2 = build_bottom_clause(tuple("alice", "bob"), db, bias, two);
  ASSERT_GE(b2.clause.body.size(), b1.clause.body.size());
  EXPECT_TRUE(std::equal(b1.clause.body.begin(), b1.clause.body.end(), b2.clause.body.begin()));
  EXPECT_GT(b2.clause.body.size(), b1.clause.body.size());
  EXPECT_TRUE(covers(b2.clause, tuple("alice", "bob"), db));
  EXPECT_TRUE(conforms(b2.clause, bias));
}

TEST_F(Synthetic, BottomClauseExcludesSeedTargetTuple) {
  // A body mode for the target itself must not reproduce the seed.
  auto bias = manual;
  bias.modes.push_back(parse_mode_decl("advisedBy(+,-)"));
  auto bottom = build_bottom_clause(tuple("alice", "bob"), db, bias, LearnConfig{});
  for (const auto& l : bottom.clause.body)
    EXPECT_FALSE(l.relation == "advisedBy" && l.args == bottom.clause.head.args);
}

TEST_F(Synthetic, PerRelationCapLimitsOutput) {
  LearnConfig cfg;
  cfg.iterations = 1;
  cfg.per_relation_cap = 1;
  auto bottom = build_bottom_clause(tuple("alice", "bob"), db, manual, cfg);
  std::map<std::string, int> counts;
  for (const auto& l : bottom.clause.body) ++counts[l.relation];
  for (const auto& [rel, n] : counts) EXPECT_LE(n, 1) << rel;
}

TEST_F(Synthetic, ArmgKeepsClauseThatAlreadyCovers) {
  auto c = clause(kAliceBobBottom);
  EXPECT_EQ(armg(c, tuple("john", "mary"), db), c);
}

TEST_F(Synthetic, ArmgDropsBlockingHasPosition) {
  auto c = clause(
      "advisedBy(X,Y) :- student(X), inPhase(X,U), professor(Y), hasPosition(Y,\"assistant_prof\"), "
      "publication(Z,X), publication(Z,Y).");
  auto g = armg(c, tuple("john", "mary"), db);
  auto expected = c;
  expected.body.erase(expected.body.begin() + 3);
  EXPECT_EQ(g, expected);
  EXPECT_TRUE(covers(g, tuple("john", "mary"), db));
}

TEST_F(Synthetic, ArmgRemovesLiteralsCutOffFromHead) {
  auto c = clause("advisedBy(X,Y) :- publication(Z,X), publication(Z,W), inPhase(W,\"pre_quals\").");
  auto g = armg(c, tuple("alice", "bob"), db);
  EXPECT_TRUE(covers(g, tuple("alice", "bob"), db));
  EXPECT_EQ(remove_disconnected(g), g);
}

TEST_F(Synthetic, Scores) {
  EXPECT_EQ(score(clause(kCoPublication), examples.positives, examples.negatives, db), 2);
  EXPECT_EQ(score(clause("advisedBy(X,Y)."), examples.positives, examples.negatives, db), 0);
  EXPECT_EQ(score(clause("advisedBy(X,Y) :- inPhase(X,\"pre_quals\")."), examples.positives, examples.negatives, db),
            0);
}

TEST_F(Synthetic, CoPublicationUniquelyMaximisesScore) {
  // Every sub-clause of the two-iteration bottom clause scores at most 2,
  // and those scoring 2 contain the co-publication join.
  auto bottom = build_bottom_clause(examples.positives[0], db, manual, LearnConfig{});
  const auto n = bottom.clause.body.size();
  ASSERT_LE(n, 16u);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Clause c{bottom.clause.head, {}};
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) c.body.push_back(bottom.clause.body[i]);
    const auto s = score(c, examples.positives, examples.negatives, db);
    ASSERT_LE(s, 2);
    if (s == 2) EXPECT_TRUE(theta_subsumes(clause(kCoPublication), c)) << format_clause(c, db.symbols());
  }
}

TEST_F(Synthetic, GeneralizeFindsCoPublication) {
  auto bottom = build_bottom_clause(examples.positives[0], db, manual, LearnConfig{});
  std::mt19937_64 rng(1);
  auto c = generalize_clause(bottom, examples.positives, examples.negatives, db, LearnConfig{}, rng, &manual);
  EXPECT_TRUE(oracle::variant(c, clause(kCoPublication))) << format_clause(c, db.symbols());
}

TEST_F(Synthetic, GeneralizeWithoutNegativeReductionKeepsCoPublication) {
  LearnConfig cfg;
  cfg.negative_reduction = false;
  auto bottom = build_bottom_clause(examples.positives[0], db, manual, cfg);
  std::mt19937_64 rng(1);
  auto c = generalize_clause(bottom, examples.positives, examples.negatives, db, cfg, rng, &manual);
  EXPECT_TRUE(theta_subsumes(clause(kCoPublication), c));
  EXPECT_EQ(score(c, examples.positives, examples.negatives, db), 2);
}

TEST_F(Synthetic, SinglePositiveNoNegatives) {
  std::vector<Tuple> pos{examples.positives[0]};
  auto bottom = build_bottom_clause(pos[0], db, manual, LearnConfig{});
  std::mt19937_64 rng(1);
  auto c = generalize_clause(bottom, pos, {}, db, LearnConfig{}, rng, &manual);
  EXPECT_EQ(score(c, pos, {}, db), 1);
}

TEST_F(Synthetic, GreedySearchTerminates) {
  LearnConfig cfg;
  cfg.beam_width = 1;
  cfg.sample_size = 1;
  auto def = learn_definition(db, examples, manual, cfg);
  EXPECT_LE(def.clauses.size(), examples.positives.size());
}

TEST_F(Synthetic, LearnDefinitionManualBias) {
  auto def = learn_definition(db, examples, manual, LearnConfig{});
  ASSERT_EQ(def.clauses.size(), 1u);
  EXPECT_TRUE(oracle::variant(def.clauses[0], clause(kCoPublication)));
  for (const auto& c : def.clauses) EXPECT_TRUE(conforms(c, manual));
}

TEST_F(Synthetic, LearnDefinitionInducedBias) {
  auto bias = induce_bias(db, 0.5, 5, "advisedBy");
  auto def = learn_definition(db, examples, bias, LearnConfig{});
  ASSERT_EQ(def.clauses.size(), 1u);
  EXPECT_TRUE(oracle::variant(def.clauses[0], clause(kCoPublication)));
  for (const auto& c : def.clauses) EXPECT_TRUE(conforms(c, bias));
}

TEST_F(Synthetic, EmptyPositivesGiveEmptyDefinition) {
  ExampleSet none{examples.target, {}, examples.negatives};
  EXPECT_TRUE(learn_definition(db, none, manual, LearnConfig{}).clauses.empty());
}

TEST_F(Synthetic, DeterministicForFixedSeed) {
  auto bias = induce_bias(db, 0.5, 5, "advisedBy");
  LearnConfig cfg;
  cfg.rng_seed = 42;
  auto a = format_definition(learn_definition(db, examples, bias, cfg), db.symbols());
  auto b = format_definition(learn_definition(db, examples, bias, cfg), db.symbols());
  EXPECT_EQ(a, b);
  cfg.jobs = 4;
  EXPECT_EQ(format_definition(learn_definition(db, examples, bias, cfg), db.symbols()), a);
}

TEST_F(Synthetic, TargetMismatchRejected) {
  auto bias = manual;
  bias.head_mode.relation = "other";
  EXPECT_THROW(learn_definition(db, examples, bias, LearnConfig{}), ConfigError);
}

TEST(Learner, IndistinguishableExamplesGiveEmptyDefinition) {
  DatabaseInstance db;
  db.add_relation({"r", {"a"}});
  auto ex = parse_examples("+ h(a,b)\n+ h(c,d)\n- h(a,d)\n- h(c,b)\n- h(e,f)\n", db);
  attach_target(db, ex);
  auto bias = parse_bias("PREDICATES:\nh(T1,T2)\nr(T1)\nMODES:\nh(+,+)\nr(+)\n");
  auto def = learn_definition(db, ex, bias, LearnConfig{});
  EXPECT_TRUE(def.clauses.empty());
}

TEST(Learner, ConfigValidation) {
  LearnConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  for (auto mutate : std::vector<std::function<void(LearnConfig&)>>{
           [](LearnConfig& c) { c.iterations = 0; }, [](LearnConfig& c) { c.beam_width = 0; },
           [](LearnConfig& c) { c.sample_size = 0; }, [](LearnConfig& c) { c.min_precision = 0.0; },
           [](LearnConfig& c) { c.min_precision = 1.5; }, [](LearnConfig& c) { c.min_positives = 0; },
           [](LearnConfig& c) { c.per_relation_cap = 0; }, [](LearnConfig& c) { c.jobs = 0; }}) {
    LearnConfig c;
    mutate(c);
    EXPECT_THROW(c.validate(), ConfigError);
  }
  EXPECT_EQ(cfg.effective_min_positives(3), 1);
  EXPECT_EQ(cfg.effective_min_positives(4), 2);
  cfg.min_positives = 5;
  EXPECT_EQ(cfg.effective_min_positives(3), 5);
}

TEST_F(Synthetic, CoverSetStrictlyShrinksUncovered) {
  std::vector<std::size_t> sizes;
  LearnConfig cfg;
  cover_set(db, examples.positives, examples.negatives, cfg,
            [&](const std::vector<Tuple>& uncovered, const std::vector<Tuple>&, std::mt19937_64&) {
              sizes.push_back(uncovered.size());
              return clause("advisedBy(X,Y) :- inPhase(X,\"post_quals\"), hasPosition(Y,\"assistant_prof\").");
            });
  ASSERT_EQ(sizes.size(), 2u);
  EXPECT_GT(sizes[0], sizes[1]);
}

TEST_F(Synthetic, NegativeReduceDropsUselessLiterals) {
  auto c = clause(kAliceBobBottom);
  auto r = negative_reduce(c, examples.negatives, db, &manual);
  EXPECT_TRUE(oracle::variant(r, clause(kCoPublication))) << format_clause(r, db.symbols());
}
