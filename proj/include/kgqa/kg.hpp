#pragma once

// Knowledge graph store: interned entities and relations, forward plus
// synthesized reverse adjacency, exact-match entity linking. Immutable after
// load; safe for concurrent readers.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgqa/errors.hpp"

namespace kgqa {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

// Forward relations get even ids, their reverses the following odd id, so
// flipping direction is id ^ 1 and reverse-of-reverse is the identity.
inline constexpr RelationId reverse_of(RelationId r) { return r ^ 1u; }
inline constexpr bool is_reverse_relation(RelationId r) { return (r & 1u) != 0; }

struct Triple {
  EntityId head;
  RelationId relation;
  EntityId tail;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct LoadReport {
  std::size_t raw_triple_lines = 0;   // non-empty lines parsed
  std::size_t deduplicated_triples = 0;
};

class KnowledgeGraph {
 public:
  std::size_t entity_count() const { return entity_names_.size(); }
  std::size_t forward_relation_count() const { return relation_names_.size() / 2; }
  std::size_t relation_count() const { return relation_names_.size(); }  // incl. reverses
  std::size_t triple_count() const { return forward_triples_.size(); }
  const LoadReport& load_report() const { return report_; }

  const std::string& entity_name(EntityId v) const {
    check_entity(v);
    return entity_names_[v];
  }

  const std::string& relation_name(RelationId r) const {
    check_relation(r);
    return relation_names_[r];
  }

  std::optional<EntityId> find_entity(std::string_view surface) const {
    auto it = entity_index_.find(std::string(surface));
    if (it == entity_index_.end()) return std::nullopt;
    return it->second;
  }

  // Accepts both forward names and "<name>_reverse" forms.
  std::optional<RelationId> find_relation(std::string_view name) const {
    auto it = relation_index_.find(std::string(name));
    if (it == relation_index_.end()) return std::nullopt;
    return it->second;
  }

  // Forward relation names, first-seen order. This is the vocabulary shown
  // to the planner.
  std::vector<std::string> relation_vocabulary() const {
    std::vector<std::string> out;
    out.reserve(forward_relation_count());
    for (std::size_t r = 0; r < relation_names_.size(); r += 2) out.push_back(relation_names_[r]);
    return out;
  }

  const std::vector<Triple>& forward_triples() const { return forward_triples_; }

  // N_r(v): tails of stored directed edges (v, r, .), ascending by id.
  std::span<const EntityId> neighbors(EntityId v, RelationId r) const {
    check_entity(v);
    check_relation(r);
    auto lo = rows_.begin() + row_offsets_[v];
    auto hi = rows_.begin() + row_offsets_[v + 1];
    auto it = std::lower_bound(lo, hi, r, [](const AdjRow& row, RelationId rel) { return row.relation < rel; });
    if (it == hi || it->relation != r) return {};
    return std::span<const EntityId>(targets_.data() + it->begin, it->end - it->begin);
  }

  // Relations with at least one edge out of v, ascending by relation id.
  struct RelationRow {
    RelationId relation;
    std::span<const EntityId> targets;
  };

  std::vector<RelationRow> rows_of(EntityId v) const {
    check_entity(v);
    std::vector<RelationRow> out;
    for (std::uint32_t i = row_offsets_[v]; i < row_offsets_[v + 1]; ++i) {
      const AdjRow& row = rows_[i];
      out.push_back({row.relation, std::span<const EntityId>(targets_.data() + row.begin, row.end - row.begin)});
    }
    return out;
  }

  // All directed edges out of the frontier, ordered by (head, relation, tail).
  // The frontier is treated as a set; duplicates are ignored.
  std::vector<Triple> frontier_edges(std::span<const EntityId> frontier) const {
    std::vector<EntityId> nodes(frontier.begin(), frontier.end());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    std::vector<Triple> out;
    for (EntityId v : nodes) {
      check_entity(v);
      for (std::uint32_t i = row_offsets_[v]; i < row_offsets_[v + 1]; ++i) {
        const AdjRow& row = rows_[i];
        for (std::uint32_t t = row.begin; t < row.end; ++t) out.push_back({v, row.relation, targets_[t]});
      }
    }
    return out;
  }

  // Entities whose surface string exactly equals each bracketed [span], in
  // order of appearance. Case-sensitive.
  std::vector<EntityId> link_entities(std::string_view question) const {
    std::vector<EntityId> out;
    std::size_t pos = 0;
    while (pos < question.size()) {
      char c = question[pos];
      if (c == ']') throw LinkError("unbalanced brackets: ']' without matching '['");
      if (c != '[') {
        ++pos;
        continue;
      }
      std::size_t close = pos + 1;
      while (close < question.size() && question[close] != ']' && question[close] != '[') ++close;
      if (close >= question.size() || question[close] == '[')
        throw LinkError("unbalanced brackets: '[' without matching ']'");
      std::string span(question.substr(pos + 1, close - pos - 1));
      auto id = find_entity(span);
      if (!id) throw LinkError("no entity exactly matches bracketed mention '" + span + "'", span);
      out.push_back(*id);
      pos = close + 1;
    }
    return out;
  }

  static KnowledgeGraph load(std::istream& in);

  static KnowledgeGraph load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open KB file: " + path);
    return load(in);
  }

 private:
  struct AdjRow {
    RelationId relation;
    std::uint32_t begin;  // into targets_
    std::uint32_t end;
  };

  void check_entity(EntityId v) const {
    if (v >= entity_names_.size()) throw ValidationError("entity id out of range: " + std::to_string(v));
  }
  void check_relation(RelationId r) const {
    if (r >= relation_names_.size()) throw ValidationError("relation id out of range: " + std::to_string(r));
  }

  std::vector<std::string> entity_names_;
  std::unordered_map<std::string, EntityId> entity_index_;
  std::vector<std::string> relation_names_;  // [2i] forward, [2i+1] its reverse
  std::unordered_map<std::string, RelationId> relation_index_;
  std::vector<Triple> forward_triples_;  // deduplicated, sorted
  std::vector<std::uint32_t> row_offsets_;  // entity -> [begin,end) into rows_
  std::vector<AdjRow> rows_;
  std::vector<EntityId> targets_;
  LoadReport report_;
};

// Loads pipe-delimited triple lines: head|relation|tail, one per line.
// Trailing whitespace is trimmed; interior whitespace is significant; '|'
// never appears inside fields. Reverse edges are synthesized with surface
// name "<relation>_reverse".
inline KnowledgeGraph KnowledgeGraph::load(std::istream& in) {
  KnowledgeGraph g;
  std::string line;
  std::size_t line_number = 0;

  auto intern_entity = [&g](std::string_view s) -> EntityId {
    auto it = g.entity_index_.find(std::string(s));
    if (it != g.entity_index_.end()) return it->second;
    EntityId id = static_cast<EntityId>(g.entity_names_.size());
    g.entity_names_.emplace_back(s);
    g.entity_index_.emplace(g.entity_names_.back(), id);
    return id;
  };
  auto intern_relation = [&g](std::string_view s) -> RelationId {
    auto it = g.relation_index_.find(std::string(s));
    if (it != g.relation_index_.end()) return it->second;
    RelationId id = static_cast<RelationId>(g.relation_names_.size());
    g.relation_names_.emplace_back(s);
    g.relation_names_.emplace_back(std::string(s) + "_reverse");
    g.relation_index_.emplace(g.relation_names_[id], id);
    g.relation_index_.emplace(g.relation_names_[id + 1], id + 1);
    return id;
  };

  while (std::getline(in, line)) {
    ++line_number;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    if (line.empty()) continue;
    ++g.report_.raw_triple_lines;

    std::size_t p1 = line.find('|');
    std::size_t p2 = p1 == std::string::npos ? std::string::npos : line.find('|', p1 + 1);
    std::size_t p3 = p2 == std::string::npos ? std::string::npos : line.find('|', p2 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos || p3 != std::string::npos)
      throw ParseError("expected exactly three pipe-separated fields", line_number);

    std::string_view head(line.data(), p1);
    std::string_view rel(line.data() + p1 + 1, p2 - p1 - 1);
    std::string_view tail(line.data() + p2 + 1, line.size() - p2 - 1);
    if (head.empty() || rel.empty() || tail.empty())
      throw ParseError("empty field in triple", line_number);

    g.forward_triples_.push_back({intern_entity(head), intern_relation(rel), intern_entity(tail)});
  }
  if (g.forward_triples_.empty()) throw ParseError("empty input: no triples found");

  std::sort(g.forward_triples_.begin(), g.forward_triples_.end());
  g.forward_triples_.erase(std::unique(g.forward_triples_.begin(), g.forward_triples_.end()),
                           g.forward_triples_.end());
  g.report_.deduplicated_triples = g.forward_triples_.size();

  // Build CSR adjacency over directed edges (forward + reverse).
  std::vector<Triple> edges;
  edges.reserve(g.forward_triples_.size() * 2);
  for (const Triple& t : g.forward_triples_) {
    edges.push_back(t);
    edges.push_back({t.tail, reverse_of(t.relation), t.head});
  }
  std::sort(edges.begin(), edges.end());

  const std::size_t n = g.entity_names_.size();
  g.row_offsets_.assign(n + 1, 0);
  g.targets_.reserve(edges.size());
  std::vector<std::vector<AdjRow>> per_entity(n);
  std::size_t i = 0;
  while (i < edges.size()) {
    std::size_t j = i;
    while (j < edges.size() && edges[j].head == edges[i].head && edges[j].relation == edges[i].relation) ++j;
    AdjRow row{edges[i].relation, static_cast<std::uint32_t>(g.targets_.size()), 0};
    for (std::size_t e = i; e < j; ++e) g.targets_.push_back(edges[e].tail);
    row.end = static_cast<std::uint32_t>(g.targets_.size());
    per_entity[edges[i].head].push_back(row);
    i = j;
  }
  for (std::size_t v = 0; v < n; ++v) {
    g.row_offsets_[v] = static_cast<std::uint32_t>(g.rows_.size());
    for (const AdjRow& row : per_entity[v]) g.rows_.push_back(row);
  }
  g.row_offsets_[n] = static_cast<std::uint32_t>(g.rows_.size());
  return g;
}

inline KnowledgeGraph load_kb(std::istream& in) { return KnowledgeGraph::load(in); }
inline KnowledgeGraph load_kb_file(const std::string& path) { return KnowledgeGraph::load_file(path); }

}  // namespace kgqa
