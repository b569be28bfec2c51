#include "kgqa/kg.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace kgqa;

namespace {

KnowledgeGraph from_string(const std::string& text) {
  std::istringstream in(text);
  return KnowledgeGraph::load(in);
}

std::vector<EntityId> ids(const KnowledgeGraph& g, std::initializer_list<const char*> names) {
  std::vector<EntityId> out;
  for (const char* n : names) out.push_back(*g.find_entity(n));
  return out;
}

}  // namespace

TEST(KgLoad, MinimalGraph) {
  auto g = from_string("A|r|B\n");
  EXPECT_EQ(g.entity_count(), 2u);
  EXPECT_EQ(g.triple_count(), 1u);
  EXPECT_EQ(g.forward_relation_count(), 1u);
  auto a = *g.find_entity("A");
  auto b = *g.find_entity("B");
  auto r = *g.find_relation("r");
  ASSERT_EQ(g.neighbors(a, r).size(), 1u);
  EXPECT_EQ(g.neighbors(a, r)[0], b);
  ASSERT_EQ(g.neighbors(b, reverse_of(r)).size(), 1u);
  EXPECT_EQ(g.neighbors(b, reverse_of(r))[0], a);
}

TEST(KgLoad, DuplicateLinesAreDeduplicated) {
  auto g = from_string("A|r|B\nA|r|B\n");
  EXPECT_EQ(g.triple_count(), 1u);
  EXPECT_EQ(g.load_report().raw_triple_lines, 2u);
  EXPECT_EQ(g.load_report().deduplicated_triples, 1u);
}

TEST(KgLoad, MalformedLineCarriesLineNumber) {
  try {
    from_string("A|r|B\nbad line\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2u);
  }
}

TEST(KgLoad, TooManyFieldsRejected) {
  EXPECT_THROW(from_string("A|r|B|extra\n"), ParseError);
}

TEST(KgLoad, EmptyInputRejected) {
  EXPECT_THROW(from_string(""), ParseError);
  EXPECT_THROW(from_string("\n\n  \n"), ParseError);
}

TEST(KgLoad, TrailingWhitespaceTrimmedInteriorKept) {
  auto g = from_string("Movie One|directed_by|Jane Doe  \r\n");
  EXPECT_TRUE(g.find_entity("Movie One").has_value());
  EXPECT_TRUE(g.find_entity("Jane Doe").has_value());
}

TEST(KgRelations, ForwardEvenReverseOddPairedByXor) {
  auto g = from_string("A|first|B\nA|second|C\n");
  auto first = *g.find_relation("first");
  auto second = *g.find_relation("second");
  EXPECT_EQ(first % 2, 0u);
  EXPECT_EQ(second % 2, 0u);
  EXPECT_EQ(*g.find_relation("first_reverse"), reverse_of(first));
  EXPECT_EQ(reverse_of(reverse_of(first)), first);
  EXPECT_TRUE(is_reverse_relation(reverse_of(second)));
  EXPECT_EQ(g.relation_name(reverse_of(first)), "first_reverse");
}

TEST(KgRelations, VocabularyIsForwardNamesFirstSeen) {
  auto g = from_string("A|zeta|B\nB|alpha|C\nC|zeta|A\n");
  auto vocab = g.relation_vocabulary();
  ASSERT_EQ(vocab.size(), 2u);
  EXPECT_EQ(vocab[0], "zeta");
  EXPECT_EQ(vocab[1], "alpha");
}

TEST(KgNeighbors, SortedAndEmptyCases) {
  auto g = from_string("A|r|C\nA|r|B\n");
  auto [a, b, c] = std::tuple{*g.find_entity("A"), *g.find_entity("B"), *g.find_entity("C")};
  auto r = *g.find_relation("r");
  auto n = g.neighbors(a, r);
  ASSERT_EQ(n.size(), 2u);
  EXPECT_LT(n[0], n[1]);
  EXPECT_TRUE(g.neighbors(b, r).empty());
  ASSERT_EQ(g.neighbors(b, reverse_of(r)).size(), 1u);
  EXPECT_EQ(g.neighbors(c, reverse_of(r))[0], a);
}

TEST(KgNeighbors, InvalidIdsRejected) {
  auto g = from_string("A|r|B\n");
  EXPECT_THROW(g.neighbors(99, 0), ValidationError);
  EXPECT_THROW(g.neighbors(0, 99), ValidationError);
}

TEST(KgFrontier, DeterministicOrderByHeadRelationTail) {
  auto g = from_string("A|r|B\nA|r|C\n");
  auto a = *g.find_entity("A");
  auto r = *g.find_relation("r");
  auto edges = g.frontier_edges(std::vector<EntityId>{a});
  ASSERT_EQ(edges.size(), 2u);
  EXPECT_EQ(edges[0].head, a);
  EXPECT_EQ(edges[0].relation, r);
  EXPECT_LT(edges[0].tail, edges[1].tail);

  auto bc = ids(g, {"B", "C"});
  auto rev_edges = g.frontier_edges(bc);
  ASSERT_EQ(rev_edges.size(), 2u);
  for (const auto& e : rev_edges) {
    EXPECT_EQ(e.relation, reverse_of(r));
    EXPECT_EQ(e.tail, a);
  }
  EXPECT_TRUE(g.frontier_edges(std::vector<EntityId>{}).empty());
}

TEST(KgLink, ExactMatchInOrder) {
  auto g = from_string("Tom Hanks|acted_in|Big\nMeg Ryan|acted_in|Joe Versus the Volcano\n");
  auto linked = g.link_entities("what films star [Tom Hanks] and [Meg Ryan]");
  ASSERT_EQ(linked.size(), 2u);
  EXPECT_EQ(g.entity_name(linked[0]), "Tom Hanks");
  EXPECT_EQ(g.entity_name(linked[1]), "Meg Ryan");
  EXPECT_TRUE(g.link_entities("no brackets here").empty());
}

TEST(KgLink, UnknownMentionNamesSpan) {
  auto g = from_string("A|r|B\n");
  try {
    g.link_entities("who wrote [Nonexistent Movie]?");
    FAIL() << "expected LinkError";
  } catch (const LinkError& e) {
    EXPECT_EQ(e.span, "Nonexistent Movie");
  }
}

TEST(KgLink, UnbalancedBracketsRejected) {
  auto g = from_string("A|r|B\n");
  EXPECT_THROW(g.link_entities("what about [A"), LinkError);
  EXPECT_THROW(g.link_entities("what about A]"), LinkError);
  EXPECT_THROW(g.link_entities("nested [outer [A]]"), LinkError);
}

TEST(KgLink, CaseSensitive) {
  auto g = from_string("Tom Hanks|acted_in|Big\n");
  EXPECT_THROW(g.link_entities("[tom hanks]"), LinkError);
}

// Reverse closure: t in N_r(h) iff h in N_rev(r)(t), for every loaded triple.
TEST(KgInvariants, ReverseClosure) {
  auto g = from_string("A|r|B\nB|s|C\nC|r|A\nA|s|A\nB|r|B\n");
  for (const auto& t : g.forward_triples()) {
    auto fwd = g.neighbors(t.head, t.relation);
    EXPECT_TRUE(std::binary_search(fwd.begin(), fwd.end(), t.tail));
    auto rev = g.neighbors(t.tail, reverse_of(t.relation));
    EXPECT_TRUE(std::binary_search(rev.begin(), rev.end(), t.head));
  }
}

// Sum of |N_r(v)| over all (v, r) equals twice the forward triple count.
TEST(KgInvariants, EdgeConservation) {
  auto g = from_string("A|r|B\nB|s|C\nC|r|A\nA|s|A\nB|r|B\nA|r|C\n");
  std::size_t total = 0;
  for (EntityId v = 0; v < g.entity_count(); ++v)
    for (const auto& row : g.rows_of(v)) total += row.targets.size();
  EXPECT_EQ(total, 2 * g.triple_count());
}

TEST(KgInvariants, DeterministicAcrossLoads) {
  const std::string text = "M1|directed_by|P1\nM2|directed_by|P1\nM1|has_genre|G1\nM2|has_genre|G2\n";
  auto g1 = from_string(text);
  auto g2 = from_string(text);
  EXPECT_EQ(g1.relation_vocabulary(), g2.relation_vocabulary());
  ASSERT_EQ(g1.entity_count(), g2.entity_count());
  std::vector<EntityId> all;
  for (EntityId v = 0; v < g1.entity_count(); ++v) all.push_back(v);
  auto e1 = g1.frontier_edges(all);
  auto e2 = g2.frontier_edges(all);
  ASSERT_EQ(e1.size(), e2.size());
  for (std::size_t i = 0; i < e1.size(); ++i) EXPECT_EQ(e1[i], e2[i]);
}
