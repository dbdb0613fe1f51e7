#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "automode/biasgen.hpp"
#include "automode/errors.hpp"
#include "automode/fixtures.hpp"
#include "support/oracles.hpp"

using namespace automode;

namespace {

AttributeRef ref(const std::string& rel, std::size_t pos, const std::string& name) { return {rel, pos, name}; }

std::vector<RelationSchema> unary_chain() {
  return {{"a", {"x"}}, {"b", {"x"}}, {"c", {"x"}}};
}

std::set<std::string> modes_of(const BiasSpec& bias, const std::string& rel) {
  std::set<std::string> out;
  for (const auto* m : bias.modes_for(rel)) out.insert(m->to_string());
  return out;
}

std::set<std::string> preds_of(const BiasSpec& bias, const std::string& rel) {
  std::set<std::string> out;
  for (const auto* p : bias.predicates_for(rel)) out.insert(p->to_string());
  return out;
}

}  // namespace

TEST(TypeGraph, NoEdgesGivesDistinctTypes) {
  auto g = build_type_graph(unary_chain(), IndSet{});
  ASSERT_EQ(g.type_count(), 3u);
  for (std::size_t v = 0; v < 3; ++v) EXPECT_EQ(g.types(v), std::vector<int>{static_cast<int>(v)});
}

TEST(TypeGraph, ApproximateChainCrossesOneHop) {
  // a <= b (approx), b <= c (approx): c's token reaches b flagged, never a.
  IndSet inds{{{ref("a", 0, "x"), ref("b", 0, "x"), 0.2}, {ref("b", 0, "x"), ref("c", 0, "x"), 0.2}}, 0.5};
  auto g = build_type_graph(unary_chain(), inds);
  const auto tc = g.types(ref("c", 0, "x"));
  ASSERT_EQ(tc.size(), 1u);
  EXPECT_EQ(g.types(ref("b", 0, "x")), tc);
  const auto ta = g.types(ref("a", 0, "x"));
  ASSERT_EQ(ta.size(), 1u);
  EXPECT_NE(ta, tc);
}

TEST(TypeGraph, ExactChainPropagatesAllTheWay) {
  IndSet inds{{{ref("a", 0, "x"), ref("b", 0, "x"), 0.0}, {ref("b", 0, "x"), ref("c", 0, "x"), 0.0}}, 0.5};
  auto g = build_type_graph(unary_chain(), inds);
  EXPECT_EQ(g.type_count(), 1u);
  for (std::size_t v = 0; v < 3; ++v) EXPECT_EQ(g.types(v), std::vector<int>{0});
}

TEST(TypeGraph, ExactAfterApproximateKeepsFlag) {
  // a <= b (exact), b <= c (approx): c's token crosses once into b, then
  // flows on to a over the exact edge.
  IndSet inds{{{ref("a", 0, "x"), ref("b", 0, "x"), 0.0}, {ref("b", 0, "x"), ref("c", 0, "x"), 0.3}}, 0.5};
  auto g = build_type_graph(unary_chain(), inds);
  EXPECT_EQ(g.types(ref("a", 0, "x")), g.types(ref("c", 0, "x")));
}

TEST(TypeGraph, CycleSharesOneType) {
  IndSet inds{{{ref("a", 0, "x"), ref("b", 0, "x"), 0.0},
               {ref("b", 0, "x"), ref("a", 0, "x"), 0.0},
               {ref("b", 0, "x"), ref("c", 0, "x"), 0.0}},
              0.5};
  auto g = build_type_graph(unary_chain(), inds);
  // {a,b} is a non-sink cycle with its own type and also inherits c's.
  EXPECT_EQ(g.types(ref("a", 0, "x")), g.types(ref("b", 0, "x")));
  EXPECT_EQ(g.types(ref("a", 0, "x")).size(), 2u);
  EXPECT_EQ(g.types(ref("c", 0, "x")).size(), 1u);
}

TEST(TypeGraph, AuthorOverlapFixtureAssignment) {
  auto db = load_fixture(author_overlap_fixture());
  auto g = build_type_graph(schemas_of(db), dedupe_bidirectional(discover_inds(db, 0.5)));
  const auto stud = g.types(ref("student", 0, "stud"));
  const auto prof = g.types(ref("professor", 0, "prof"));
  ASSERT_EQ(stud.size(), 1u);
  ASSERT_EQ(prof.size(), 1u);
  EXPECT_EQ(TypeGraph::type_name(stud[0]), "T1");
  EXPECT_EQ(TypeGraph::type_name(prof[0]), "T3");
  EXPECT_EQ(g.types(ref("inPhase", 0, "stud")), stud);
  EXPECT_EQ(g.types(ref("ta", 1, "stud")), stud);
  EXPECT_EQ(g.types(ref("publication", 1, "author")), (std::vector<int>{stud[0], prof[0]}));
  EXPECT_EQ(TypeGraph::type_name(g.types(ref("publication", 0, "title")).at(0)), "T5");
}

TEST(Predicates, CartesianProduct) {
  auto db = load_fixture(author_overlap_fixture());
  auto bias = induce_bias(db, 0.5, 5, "advisedBy");
  EXPECT_EQ(preds_of(bias, "publication"), (std::set<std::string>{"publication(T5,T1)", "publication(T5,T3)"}));
  EXPECT_EQ(preds_of(bias, "student"), (std::set<std::string>{"student(T1)"}));
}

TEST(Predicates, TwoByTwoGivesFour) {
  std::vector<RelationSchema> schema{{"r", {"a", "b"}}, {"s", {"x"}}, {"t", {"x"}}};
  IndSet inds{{{ref("r", 0, "a"), ref("s", 0, "x"), 0.0},
               {ref("r", 0, "a"), ref("t", 0, "x"), 0.0},
               {ref("r", 1, "b"), ref("s", 0, "x"), 0.0},
               {ref("r", 1, "b"), ref("t", 0, "x"), 0.0}},
              0.5};
  auto preds = generate_predicates(build_type_graph(schema, inds));
  EXPECT_EQ(std::count_if(preds.begin(), preds.end(), [](const auto& p) { return p.relation == "r"; }), 4);
}

TEST(Modes, InPhaseWithEligiblePhase) {
  auto db = load_fixture(author_overlap_fixture());
  auto bias = induce_bias(db, 0.5, 5, "advisedBy");
  EXPECT_EQ(modes_of(bias, "inPhase"), (std::set<std::string>{"inPhase(+,-)", "inPhase(-,+)", "inPhase(+,#)"}));
  EXPECT_EQ(bias.head_mode.to_string(), "advisedBy(+,+)");
}

TEST(Modes, NoEligibleGivesBaseModes) {
  auto db = load_fixture(author_overlap_fixture());
  auto modes = generate_modes(db, schemas_of(db), 2, "advisedBy");
  std::set<std::string> pub;
  for (const auto& m : modes.body)
    if (m.relation == "publication") pub.insert(m.to_string());
  EXPECT_EQ(pub, (std::set<std::string>{"publication(+,-)", "publication(-,+)"}));
}

TEST(Modes, BothEligibleGivesFour) {
  DatabaseInstance db;
  db.add_relation({"r", {"a", "b"}});
  db.add_relation({"h", {"x"}});
  db.insert("r", {"u", "v"});
  auto modes = generate_modes(db, schemas_of(db), 5, "h");
  std::set<std::string> got;
  for (const auto& m : modes.body) got.insert(m.to_string());
  EXPECT_EQ(got, (std::set<std::string>{"r(+,-)", "r(-,+)", "r(#,+)", "r(+,#)"}));
}

TEST(Modes, CountFormulaAndSoundness) {
  auto db = load_fixture(author_overlap_fixture());
  const int threshold = 5;
  auto modes = generate_modes(db, schemas_of(db), threshold, "advisedBy");
  for (std::size_t r = 0; r < db.relation_count(); ++r) {
    const auto& rel = db.relation(r);
    if (rel.name() == "advisedBy") continue;
    const std::size_t n = rel.arity();
    std::size_t k = 0;
    for (std::size_t p = 0; p < n; ++p) {
      auto s = attribute_stats(db, db.attribute(r, p));
      k += s.distinct_count > 0 && s.distinct_count < static_cast<std::size_t>(threshold);
    }
    // n + sum over non-empty M of (n - |M|)
    std::size_t expected = n;
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask)
      expected += n - static_cast<std::size_t>(__builtin_popcountll(mask));
    std::size_t got = 0;
    for (const auto& m : modes.body) {
      if (m.relation != rel.name()) continue;
      ++got;
      EXPECT_TRUE(m.has_input()) << m.to_string();
      for (std::size_t p = 0; p < n; ++p)
        if (m.symbols[p] == ModeSymbol::Constant)
          EXPECT_LT(attribute_stats(db, db.attribute(r, p)).distinct_count, static_cast<std::size_t>(threshold));
    }
    EXPECT_EQ(got, expected) << rel.name();
  }
}

TEST(Modes, ThresholdBelowOneRejected) {
  auto db = load_fixture(uwcse_fragment());
  try {
    generate_modes(db, schemas_of(db), 0, "advisedBy");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_STREQ(e.what(), "threshold must be >= 1");
  }
  EXPECT_THROW(induce_bias(db, 0.5, 0, "advisedBy"), ConfigError);
  EXPECT_THROW(generate_modes(db, schemas_of(db), 5, "nope"), ConfigError);
}

TEST(InduceBias, EmptyDatabase) {
  DatabaseInstance db;
  db.add_relation({"r", {"a", "b"}});
  db.add_relation({"s", {"c"}});
  db.add_relation({"h", {"x"}});
  auto bias = induce_bias(db, 0.5, 5, "h");
  EXPECT_EQ(bias.predicates.size(), 3u);
  std::set<std::string> types;
  for (const auto& p : bias.predicates) types.insert(p.types.begin(), p.types.end());
  EXPECT_EQ(types.size(), 4u);
  for (const auto& m : bias.modes)
    EXPECT_EQ(std::count(m.symbols.begin(), m.symbols.end(), ModeSymbol::Constant), 0);
  EXPECT_EQ(bias.modes.size(), 3u);
}

TEST(InduceBias, DeterministicAndRoundTrips) {
  auto db = load_fixture(uwcse_fragment());
  auto a = format_bias(induce_bias(db, 0.5, 5, "advisedBy"));
  auto b = format_bias(induce_bias(db, 0.5, 5, "advisedBy"));
  EXPECT_EQ(a, b);
  EXPECT_EQ(format_bias(parse_bias(a)), a);
}

TEST(InduceBias, JoinSoundnessOnExactInds) {
  for (const auto* f : {&uwcse_fragment(), &author_overlap_fixture()}) {
    auto db = load_fixture(*f);
    auto inds = dedupe_bidirectional(discover_inds(db, 0.5));
    auto g = build_type_graph(schemas_of(db), inds);
    for (const auto& i : inds.inds) {
      if (!i.exact()) continue;
      auto a = g.types(i.lhs), b = g.types(i.rhs);
      std::vector<int> common;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
      EXPECT_FALSE(common.empty()) << i.to_string();
    }
  }
}

TEST(Bias, ParseAndFormat) {
  auto bias = parse_bias(uwcse_fragment().bias);
  EXPECT_EQ(bias.target(), "advisedBy");
  EXPECT_EQ(bias.constant_threshold, 5);
  EXPECT_EQ(bias.predicates.size(), 7u);
  EXPECT_EQ(bias.modes.size(), 6u);
  EXPECT_EQ(format_bias(bias), uwcse_fragment().bias);
  EXPECT_THROW(parse_bias("PREDICATES:\nr(T1)\n"), LoadError);
  EXPECT_NO_THROW(parse_bias("PREDICATES:\nr(T1)\n", false));
  EXPECT_THROW(parse_bias("r(T1)\n"), LoadError);
  EXPECT_THROW(parse_bias("MODES:\nr(+,?)\n"), LoadError);
}
