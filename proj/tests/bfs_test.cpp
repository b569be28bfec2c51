#include "kgqa/bfs.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "support/brute_force.hpp"

using namespace kgqa;

namespace {

KnowledgeGraph from_string(const std::string& text) {
  std::istringstream in(text);
  return KnowledgeGraph::load(in);
}

RelationPlan named_plan(const KnowledgeGraph& g, std::vector<std::vector<std::string>> hops) {
  RelationPlan plan;
  for (auto& hop : hops) {
    std::vector<RelationId> ids;
    for (auto& name : hop) ids.push_back(*g.find_relation(name));
    plan.hops.push_back(ids);
  }
  return plan;
}

std::set<EntityId> as_set(const AnswerSet& a) { return {a.entities.begin(), a.entities.end()}; }

}  // namespace

TEST(ExecutePlan, SingleChain) {
  auto g = from_string("A|r1|B\nB|r2|C\n");
  auto result = execute_plan(g, std::vector<EntityId>{*g.find_entity("A")}, named_plan(g, {{"r1"}, {"r2"}}), 2);
  ASSERT_EQ(result.answers.entities.size(), 1u);
  EXPECT_EQ(result.answers.surfaces[0], "C");
}

TEST(ExecutePlan, DiamondDeduplicates) {
  auto g = from_string("A|r|B\nA|r|C\nB|s|D\nC|s|D\n");
  auto result = execute_plan(g, std::vector<EntityId>{*g.find_entity("A")}, named_plan(g, {{"r"}, {"s"}}), 2);
  EXPECT_EQ(result.answers.surfaces, std::vector<std::string>{"D"});
}

// Mini-graph shaped like a co-writer lookup: movie -> writer -> other movies
// by that writer -> their genres, via a reverse hop in the middle.
TEST(ExecutePlan, ReverseHopChainMatchesOracle) {
  auto g = from_string(
      "Inception|written_by|W\n"
      "M2|written_by|W\n"
      "M3|written_by|W\n"
      "M2|has_genre|Thriller\n"
      "M3|has_genre|Sci-Fi\n"
      "Inception|has_genre|Action\n");
  auto plan = named_plan(g, {{"written_by"}, {"written_by_reverse"}, {"has_genre"}});
  std::vector<EntityId> seeds{*g.find_entity("Inception")};
  auto result = execute_plan(g, seeds, plan, 3);
  EXPECT_EQ(as_set(result.answers), oracles::brute_force_plan_answers(g, seeds, plan));
  // Inception itself is reachable via the reverse hop, so Action is included.
  std::set<std::string> got(result.answers.surfaces.begin(), result.answers.surfaces.end());
  EXPECT_TRUE(got.contains("Thriller"));
  EXPECT_TRUE(got.contains("Sci-Fi"));
}

TEST(ExecutePlan, InputValidation) {
  auto g = from_string("A|r|B\n");
  auto plan = named_plan(g, {{"r"}});
  EXPECT_THROW(execute_plan(g, std::vector<EntityId>{}, plan, 1), ValidationError);
  EXPECT_THROW(execute_plan(g, std::vector<EntityId>{0}, plan, 2), ValidationError);
  EXPECT_THROW(execute_plan(g, std::vector<EntityId>{0}, plan, 0), ValidationError);
  EXPECT_THROW(execute_plan(g, std::vector<EntityId>{0}, plan, -1), ValidationError);
}

TEST(ExecutePlan, StatsCountUniqueExpansions) {
  auto g = from_string("A|r|B\nA|r|C\nB|s|D\nC|s|D\n");
  auto result = execute_plan(g, std::vector<EntityId>{*g.find_entity("A")}, named_plan(g, {{"r"}, {"s"}}), 2);
  // Depth 0: A. Depth 1: B, C. Answers: D once.
  EXPECT_EQ(result.stats.nodes_expanded, 3u);
  ASSERT_EQ(result.stats.frontier_sizes.size(), 3u);
  EXPECT_EQ(result.stats.frontier_sizes[0], 1u);
  EXPECT_EQ(result.stats.frontier_sizes[1], 2u);
  EXPECT_EQ(result.stats.frontier_sizes[2], 1u);
  EXPECT_GE(result.stats.wall_time_s, 0.0);
}

TEST(ExecutePlan, CyclicGraphRevisitsAtDifferentDepths) {
  // A <-> B cycle: depth parity decides reachability.
  auto g = from_string("A|r|B\nB|r|A\n");
  std::vector<EntityId> seeds{*g.find_entity("A")};
  auto plan3 = named_plan(g, {{"r"}, {"r"}, {"r"}});
  auto result = execute_plan(g, seeds, plan3, 3);
  EXPECT_EQ(result.answers.surfaces, std::vector<std::string>{"B"});
}

TEST(ExecutePlan, MonotoneInHopSets) {
  auto g = from_string("A|r|B\nA|s|C\nB|t|D\nC|t|E\n");
  std::vector<EntityId> seeds{*g.find_entity("A")};
  auto narrow = execute_plan(g, seeds, named_plan(g, {{"r"}, {"t"}}), 2);
  auto wide = execute_plan(g, seeds, named_plan(g, {{"r", "s"}, {"t"}}), 2);
  for (EntityId v : narrow.answers.entities) EXPECT_TRUE(wide.answers.contains(v));
  EXPECT_GT(wide.answers.entities.size(), narrow.answers.entities.size());
}

// Property: on random graphs with random plans, the executor agrees exactly
// with naive enumeration of all relation-constrained walks.
TEST(ExecutePlan, OracleEquivalenceOnRandomGraphs) {
  SplitMix64 rng(20240817);
  for (int trial = 0; trial < 300; ++trial) {
    auto g = from_string(oracles::random_kb_text(rng));
    int k = 1 + static_cast<int>(rng.below(3));
    auto plan = oracles::random_plan(rng, g, k);
    std::vector<EntityId> seeds{static_cast<EntityId>(rng.below(g.entity_count()))};
    auto result = execute_plan(g, seeds, plan, k);
    EXPECT_EQ(as_set(result.answers), oracles::brute_force_plan_answers(g, seeds, plan)) << "trial " << trial;
  }
}
