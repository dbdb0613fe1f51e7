#include <gtest/gtest.h>

#include "automode/coverage.hpp"
#include "automode/errors.hpp"
#include "automode/fixtures.hpp"
#include "automode/lgg.hpp"
#include "support/oracles.hpp"

using namespace automode;

namespace {

constexpr const char* kC1 =
    "advisedBy(\"alice\",\"bob\") :- student(\"alice\"), inPhase(\"alice\",\"post_quals\"), professor(\"bob\"), "
    "hasPosition(\"bob\",\"assistant_prof\"), publication(\"p1\",\"alice\"), publication(\"p1\",\"bob\").";
constexpr const char* kC2 =
    "advisedBy(\"john\",\"mary\") :- student(\"john\"), inPhase(\"john\",\"post_quals\"), professor(\"mary\"), "
    "hasPosition(\"mary\",\"associate_prof\"), publication(\"p2\",\"john\"), publication(\"p2\",\"mary\").";
constexpr const char* kLgg =
    "advisedBy(A,B) :- student(A), inPhase(A,\"post_quals\"), professor(B), hasPosition(B,P), "
    "publication(T,A), publication(T,B).";

class LggPair : public ::testing::Test {
 protected:
  LggPair() : db(load_fixture(uwcse_fragment())) {}
  Clause clause(const std::string& text) { return parse_clause(text, db.symbols()); }
  DatabaseInstance db;
};

}  // namespace

TEST(LggTerms, IdenticalTermsPassThrough) {
  VarPairTable table(10);
  EXPECT_EQ(lgg_terms(Term::constant(3), Term::constant(3), table), Term::constant(3));
  EXPECT_EQ(lgg_terms(Term::var(2), Term::var(2), table), Term::var(2));
  EXPECT_EQ(table.size(), 0u);
}

TEST(LggTerms, DistinctPairsGetStableFreshVariables) {
  VarPairTable table(10);
  const auto aj = lgg_terms(Term::constant(1), Term::constant(2), table);
  EXPECT_TRUE(aj.is_var());
  EXPECT_EQ(aj.id, 10u);
  EXPECT_EQ(lgg_terms(Term::constant(1), Term::constant(2), table), aj);
  EXPECT_NE(lgg_terms(Term::constant(2), Term::constant(1), table), aj);
  EXPECT_NE(lgg_terms(Term::constant(1), Term::var(0), table), aj);
  EXPECT_EQ(table.size(), 3u);
}

TEST_F(LggPair, PrintedLggUpToRenaming) {
  auto g = lgg_clauses(clause(kC1), clause(kC2));
  EXPECT_TRUE(oracle::variant(g, clause(kLgg))) << format_clause(g, db.symbols());
  EXPECT_TRUE(oracle::subsumes(g, clause(kC1)));
  EXPECT_TRUE(oracle::subsumes(g, clause(kC2)));
}

TEST_F(LggPair, RawProductHasFourPublicationPairs) {
  auto raw = lgg_clauses(clause(kC1), clause(kC2), false);
  int pubs = 0;
  for (const auto& l : raw.body) pubs += l.relation == "publication";
  EXPECT_EQ(pubs, 4);
  EXPECT_LE(raw.body.size(), 6u * 6u);
}

TEST_F(LggPair, SelfLggIsVariant) {
  auto c = clause(kLgg);
  EXPECT_TRUE(oracle::variant(lgg_clauses(c, c), c));
}

TEST_F(LggPair, SingleAtomBodies) {
  auto g = lgg_clauses(clause("advisedBy(\"a\",\"b\") :- student(\"a\")."),
                       clause("advisedBy(\"c\",\"d\") :- student(\"c\")."));
  EXPECT_EQ(format_clause(g, db.symbols()), "advisedBy(X0,X1) :- student(X0).");
}

TEST_F(LggPair, IncompatibleHeadsRejected) {
  EXPECT_THROW(lgg_clauses(clause("advisedBy(A,B)."), clause("student(A).")), ValidationError);
}

TEST_F(LggPair, LggCoversUnionOfCoveredSets) {
  auto c1 = clause(kC1), c2 = clause(kC2);
  auto g = lgg_clauses(c1, c2);
  for (const auto& a : {"alice", "john", "bob", "mary"})
    for (const auto& b : {"alice", "john", "bob", "mary"}) {
      Tuple e{db.symbols().intern(a), db.symbols().intern(b)};
      if (covers(c1, e, db) || covers(c2, e, db)) EXPECT_TRUE(covers(g, e, db));
    }
}

TEST_F(LggPair, GroundBottomClauseOfAliceBob) {
  auto bias = variable_only_bias(parse_bias(uwcse_fragment().bias));
  for (const auto& m : bias.modes)
    EXPECT_EQ(std::count(m.symbols.begin(), m.symbols.end(), ModeSymbol::Constant), 0);
  LearnConfig cfg;
  cfg.iterations = 1;
  auto ex = parse_examples(uwcse_fragment().examples, db);
  attach_target(db, ex);
  auto ground = ground_bottom_clause(ex.positives[0], db, bias, cfg);
  // The variable-only bias adds inPhase(-,+), so the reverse publication
  // literals are reachable too; the expected lgg must be contained.
  EXPECT_TRUE(oracle::subsumes(clause(kC1), ground));
  for (const auto& l : ground.body)
    for (const auto& t : l.args) EXPECT_TRUE(t.is_const());
}

TEST_F(LggPair, LggLearnerOnSyntheticSet) {
  auto ex = parse_examples(uwcse_fragment().examples, db);
  attach_target(db, ex);
  auto bias = parse_bias(uwcse_fragment().bias);
  auto def = lgg_learn(db, ex, bias, LearnConfig{});
  ASSERT_EQ(def.clauses.size(), 1u);
  for (const auto& e : ex.positives) EXPECT_TRUE(covers(def.clauses[0], e, db));
  for (const auto& e : ex.negatives) EXPECT_FALSE(covers(def.clauses[0], e, db));
  EXPECT_TRUE(theta_subsumes(clause("advisedBy(X,Y) :- publication(Z,X), publication(Z,Y)."), def.clauses[0]));
}

TEST_F(LggPair, OnePositiveGivesItsReducedBottomClause) {
  auto ex = parse_examples("+ advisedBy(alice,bob)\n", db);
  attach_target(db, ex);
  auto bias = parse_bias(uwcse_fragment().bias);
  LearnConfig cfg;
  auto def = lgg_learn(db, ex, bias, cfg);
  ASSERT_EQ(def.clauses.size(), 1u);
  auto bottom = minimize(ground_bottom_clause(ex.positives[0], db, variable_only_bias(bias), cfg), true);
  EXPECT_EQ(def.clauses[0], bottom);
}

TEST(LggLearn, DisjointNeighbourhoodsReduceToHeadVariables) {
  DatabaseInstance db;
  db.add_relation({"r", {"a", "b"}});
  db.add_relation({"s", {"a", "b"}});
  db.add_relation({"h", {"x"}});
  db.insert("r", {"a1", "x1"});
  db.insert("r", {"y1", "a1"});
  db.insert("s", {"a2", "x2"});
  db.insert("s", {"y2", "a2"});
  auto ex = parse_examples("+ h(a1)\n+ h(a2)\n", db);
  attach_target(db, ex);
  auto bias = parse_bias("PREDICATES:\nh(T1)\nr(T1,T1)\ns(T1,T1)\n", false);
  bias.head_mode = parse_mode_decl("h(+)");

  LearnConfig cfg;
  const auto vbias = variable_only_bias(bias);
  const auto c1 = ground_bottom_clause(ex.positives[0], db, vbias, cfg);
  const auto c2 = ground_bottom_clause(ex.positives[1], db, vbias, cfg);
  ASSERT_EQ(c1.body.size(), 2u);
  ASSERT_EQ(c2.body.size(), 2u);
  auto g = lgg_clauses(c1, c2);
  EXPECT_TRUE(g.body.empty()) << format_clause(g, db.symbols());
  EXPECT_TRUE(g.head.args[0].is_var());
  EXPECT_TRUE(oracle::subsumes(g, c1));
  EXPECT_TRUE(oracle::subsumes(g, c2));

  auto def = lgg_learn(db, ex, bias, cfg);
  ASSERT_EQ(def.clauses.size(), 1u);
  EXPECT_EQ(format_clause(def.clauses[0], db.symbols()), "h(X0).");
}

TEST(LggLearn, TupleGuard) {
  auto db = load_fixture(uwcse_fragment());
  auto ex = parse_examples(uwcse_fragment().examples, db);
  attach_target(db, ex);
  LearnConfig cfg;
  cfg.max_lgg_tuples = 5;
  try {
    lgg_learn(db, ex, parse_bias(uwcse_fragment().bias), cfg);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("intractable"), std::string::npos);
  }
}
