#include <gtest/gtest.h>

#include <set>

#include "support/fixtures.hpp"
#include "wlkit/ilg.hpp"

namespace wlkit {
namespace {

using S = PropositionStatus;

struct ExpectedNode {
  std::string name;
  ColourId colour;
  double value;
};

TEST(ColourTableTest, LayoutForCapacityBlocksworld) {
  ColourTable t(fixtures::cc_domain());
  EXPECT_EQ(t.size(), 20u);  // 1 + 0 + 3*4 + 1 + 6
  EXPECT_EQ(t.object(), 0);
  EXPECT_EQ(t.predicate(0, S::AchievedGoal), 1);
  EXPECT_EQ(t.predicate(0, S::UnachievedGoal), 2);
  EXPECT_EQ(t.predicate(0, S::AchievedNonGoal), 3);
  EXPECT_EQ(t.function(0), 13);
  EXPECT_EQ(t.numeric_goal(Comparator::GE, false), 14);
  EXPECT_EQ(t.numeric_goal(Comparator::EQ, true), 19);
  EXPECT_EQ(t.individualised(), 20);
  EXPECT_EQ(t.unseen(), 21);
  EXPECT_EQ(t.names()[2], "on:upg");
  EXPECT_EQ(t.names()[13], "capacity");
  EXPECT_EQ(t.names()[16], ">:ung");
}

TEST(ColourTableTest, SizeFormulaOnRandomDomains) {
  fixtures::Rng rng(21);
  for (int i = 0; i < 50; ++i) {
    Domain d = fixtures::random_domain(rng, 8, 5);
    ColourTable t(d);
    EXPECT_EQ(t.size(), 1 + d.constants().size() + 3 * d.predicates().size() + d.functions().size() + 6);
    std::set<std::string> distinct(t.names().begin(), t.names().end());
    EXPECT_EQ(distinct.size(), t.size());
  }
}

TEST(IlgTest, CapacityBlocksworldEncoding) {
  Domain d = fixtures::cc_domain();
  IlgGenerator gen(d);
  gen.set_problem(fixtures::cc_problem(d));
  Graph g = gen.to_graph(gen.problem().initial_state());

  const std::vector<ExpectedNode> expected{
      {"a", 0, 0}, {"b", 0, 0}, {"c", 0, 0}, {"d", 0, 0}, {"x", 0, 0}, {"y", 0, 0}, {"z", 0, 0},
      {"on(a,b)", 2, 0},  // goal, not achieved
      {"on(b,x)", 2, 0},
      {"on(a,x)", 3, 0},  // true, not a goal
      {"on(b,y)", 3, 0}, {"on(c,z)", 3, 0}, {"on(d,b)", 3, 0},
      {"clear(a)", 6, 0}, {"clear(c)", 6, 0}, {"clear(d)", 6, 0},
      {"handempty()", 12, 0},
      {"capacity(x)", 13, 3}, {"capacity(y)", 13, 3}, {"capacity(z)", 13, 3},
  };
  ASSERT_EQ(g.node_count(), expected.size());
  for (NodeId u = 0; u < static_cast<NodeId>(expected.size()); ++u) {
    EXPECT_EQ(g.name(u), expected[u].name);
    EXPECT_EQ(g.colour(u), expected[u].colour) << expected[u].name;
    EXPECT_EQ(g.value(u), expected[u].value) << expected[u].name;
  }

  // (atom node, object, label)
  const std::set<std::tuple<NodeId, NodeId, EdgeLabel>> edges{
      {7, 0, 1},  {7, 1, 2},  {8, 1, 1},  {8, 4, 2},  {9, 0, 1},  {9, 4, 2},  {10, 1, 1}, {10, 5, 2}, {11, 2, 1},
      {11, 6, 2}, {12, 3, 1}, {12, 1, 2}, {13, 0, 1}, {14, 2, 1}, {15, 3, 1}, {17, 4, 1}, {18, 5, 1}, {19, 6, 1},
  };
  EXPECT_EQ(g.edge_count(), edges.size());
  for (auto [a, o, l] : edges) EXPECT_EQ(g.edge_label(a, o), l) << a << "-" << o;
}

TEST(IlgTest, ExampleSubgraphEncoding) {
  Domain d = fixtures::cc_domain();
  IlgGenerator gen(d);
  gen.set_problem(fixtures::cc_subgraph_problem(d));
  Graph g = gen.to_graph(gen.problem().initial_state());
  const std::vector<ExpectedNode> expected{
      {"a", 0, 0},       {"b", 0, 0},       {"d", 0, 0},       {"x", 0, 0},           {"y", 0, 0},
      {"on(a,b)", 2, 0}, {"on(b,x)", 2, 0}, {"on(a,x)", 3, 0}, {"on(b,y)", 3, 0},     {"on(d,b)", 3, 0},
      {"capacity(x)", 13, 3},               {"capacity(y)", 13, 3},
  };
  ASSERT_EQ(g.node_count(), 12u);
  for (NodeId u = 0; u < 12; ++u) {
    EXPECT_EQ(g.name(u), expected[u].name);
    EXPECT_EQ(g.colour(u), expected[u].colour);
    EXPECT_EQ(g.value(u), expected[u].value);
  }
  const std::set<std::tuple<NodeId, NodeId, EdgeLabel>> edges{
      {5, 0, 1}, {5, 1, 2}, {6, 1, 1}, {6, 3, 2}, {7, 0, 1},  {7, 3, 2},
      {8, 1, 1}, {8, 4, 2}, {9, 2, 1}, {9, 1, 2}, {10, 3, 1}, {11, 4, 1},
  };
  EXPECT_EQ(g.edge_count(), edges.size());
  for (auto [a, o, l] : edges) EXPECT_EQ(g.edge_label(a, o), l);
}

TEST(IlgTest, AchievedGoalAndNumericGoal) {
  Domain d = fixtures::cc_domain();
  Problem p = parse_problem(
      "(define (problem q) (:domain ccblocksworld) (:objects a - block x - base)"
      " (:init (on a x) (= (capacity x) 1)) (:goal (and (on a x) (>= (capacity x) 3) (= (capacity x) 1))))",
      d);
  IlgGenerator gen(d);
  gen.set_problem(p);
  Graph g = gen.to_graph(p.initial_state());
  ASSERT_EQ(g.node_count(), 6u);
  const ColourTable& t = gen.colour_table();
  EXPECT_EQ(g.colour(2), t.predicate(0, S::AchievedGoal));
  EXPECT_EQ(g.colour(3), t.function(0));
  EXPECT_EQ(g.value(3), 1.0);
  // capacity - 3 >= 0 fails with error -2
  EXPECT_EQ(g.colour(4), t.numeric_goal(Comparator::GE, false));
  EXPECT_EQ(g.value(4), -2.0);
  EXPECT_EQ(g.edge_label(4, 3), 0);
  // satisfied numeric goals carry 0
  EXPECT_EQ(g.colour(5), t.numeric_goal(Comparator::EQ, true));
  EXPECT_EQ(g.value(5), 0.0);
  EXPECT_EQ(g.edge_label(5, 3), 0);
}

TEST(IlgTest, ObjectsWithoutAtomsAreIsolated) {
  Domain d("d", {{"p", 1}}, {}, {});
  Problem p(d, {"a", "b", "c", "e"}, {}, {}, State{});
  IlgGenerator gen(d);
  gen.set_problem(p);
  Graph g = gen.to_graph(State{});
  EXPECT_EQ(g.node_count(), 4u);
  EXPECT_EQ(g.edge_count(), 0u);
  for (NodeId u = 0; u < 4; ++u) EXPECT_EQ(g.colour(u), ColourTable::object());
}

TEST(IlgTest, NullaryAtomIsAnIsolatedNode) {
  Domain d("d", {{"p", 0}}, {}, {});
  IlgGenerator gen(d);
  gen.set_problem(Problem(d, {"a"}, {}, {}, State{}));
  Graph g = gen.to_graph(State{}.add_proposition({0, {}}));
  ASSERT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.colour(1), gen.colour_table().predicate(0, S::AchievedNonGoal));
  EXPECT_TRUE(g.neighbours(1).empty());
}

TEST(IlgTest, ConstantsGetTheirOwnColour) {
  Domain d("d", {{"p", 1}}, {}, {"k"});
  IlgGenerator gen(d);
  gen.set_problem(Problem(d, {"a"}, {}, {}, State{}));
  Graph g = gen.to_graph(State{});
  EXPECT_EQ(g.colour(0), ColourTable::object());
  EXPECT_EQ(g.colour(1), gen.colour_table().constant(0));
}

TEST(IlgTest, NegativeGoalCountsAsAchievedWhenFalse) {
  Domain d("d", {{"p", 1}}, {}, {});
  IlgGenerator gen(d);
  gen.set_problem(Problem(d, {"a"}, {{false, {0, {0}}}}, {}, State{}));
  const ColourTable& t = gen.colour_table();
  EXPECT_EQ(gen.to_graph(State{}).colour(1), t.predicate(0, S::AchievedGoal));
  Graph g = gen.to_graph(State{}.add_proposition({0, {0}}));
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.colour(1), t.predicate(0, S::UnachievedGoal));
}

TEST(IlgTest, RepeatedArgumentKeepsFirstPosition) {
  Domain d("d", {{"p", 2}}, {}, {});
  IlgGenerator gen(d);
  gen.set_problem(Problem(d, {"a"}, {}, {}, State{}));
  Graph g = gen.to_graph(State{}.add_proposition({0, {0, 0}}));
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.edge_label(1, 0), 1);
}

TEST(IlgTest, NodeAndEdgeCountsOnRandomTasks) {
  fixtures::Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    auto t = fixtures::random_task(rng, 60, 2);
    IlgGenerator gen(t.domain);
    gen.set_problem(t.problem);
    for (const auto& s : t.states) {
      Graph g = gen.to_graph(s);
      std::set<GroundAtom> atoms(s.propositions().begin(), s.propositions().end());
      for (const auto& goal : t.problem.propositional_goals()) atoms.insert(goal.atom);
      std::size_t expected_nodes =
          t.problem.object_count() + atoms.size() + s.values().size() + t.problem.numeric_goals().size();
      EXPECT_EQ(g.node_count(), expected_nodes);
      std::size_t expected_edges = 0;
      for (const auto& a : atoms) expected_edges += a.args.size();  // random args are distinct
      for (const auto& [a, v] : s.values()) expected_edges += a.args.size();
      for (const auto& c : t.problem.numeric_goals()) expected_edges += variables(c.expression).size();
      EXPECT_EQ(g.edge_count(), expected_edges);
      for (NodeId u = 0; u < static_cast<NodeId>(g.node_count()); ++u)
        EXPECT_LT(static_cast<std::size_t>(g.colour(u)), gen.colour_table().size());
    }
  }
}

TEST(IlgTest, Errors) {
  Domain d = fixtures::cc_domain();
  IlgGenerator gen(d);
  try {
    gen.to_graph(State{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ProblemNotSet);
  }
  Domain other("other", {{"p", 1}}, {}, {});
  try {
    gen.set_problem(Problem(other, {"a"}, {}, {}, State{}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainMismatch);
  }
  gen.set_problem(fixtures::cc_problem(d));
  try {
    gen.to_graph(State{}.add_proposition({0, {0, 99}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownSymbol);
  }
  IlgGenerator small(d, IlgOptions{5});
  small.set_problem(fixtures::cc_problem(d));
  try {
    small.to_graph(small.problem().initial_state());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NodeBudgetExceeded);
  }
}

TEST(IlgTest, MissingGoalFluentInState) {
  Domain d = fixtures::cc_domain();
  Problem p = parse_problem(
      "(define (problem q) (:domain ccblocksworld) (:objects x - base)"
      " (:init (= (capacity x) 1)) (:goal (>= (capacity x) 3)))",
      d);
  IlgGenerator gen(d);
  gen.set_problem(p);
  try {
    gen.to_graph(State{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnassignedGoalFluent);
  }
}

}  // namespace
}  // namespace wlkit
