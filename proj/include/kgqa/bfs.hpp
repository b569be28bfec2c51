#pragma once

// Deterministic execution of a relation plan: constrained BFS that expands
// hop d only along the plan's hop-d relations and returns every entity
// reached by exactly k hops. Answers are grounded by construction.

#include <chrono>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "kgqa/errors.hpp"
#include "kgqa/kg.hpp"
#include "kgqa/relation_plan.hpp"

namespace kgqa {

struct TraversalStats {
  // Dequeued (v, d) pairs with d < k that had not been expanded before.
  std::size_t nodes_expanded = 0;
  // [d] for d < k: distinct entities expanded at depth d; [k]: unique answers.
  std::vector<std::size_t> frontier_sizes;
  double wall_time_s = 0.0;
};

struct AnswerSet {
  std::vector<EntityId> entities;    // ascending, unique
  std::vector<std::string> surfaces;  // aligned with entities

  bool contains(EntityId v) const {
    return std::binary_search(entities.begin(), entities.end(), v);
  }
};

inline AnswerSet make_answer_set(const KnowledgeGraph& g, std::vector<EntityId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  AnswerSet out;
  out.entities = std::move(ids);
  out.surfaces.reserve(out.entities.size());
  for (EntityId v : out.entities) out.surfaces.push_back(g.entity_name(v));
  return out;
}

struct ExecutionResult {
  AnswerSet answers;
  TraversalStats stats;
};

// Runs the plan over the graph starting from seeds. Requires |plan.hops| == k
// and k >= 1. A (v, d) pair is expanded at most once; an entity may be
// re-expanded at a different depth, which matters on cyclic graphs.
inline ExecutionResult execute_plan(const KnowledgeGraph& g, std::span<const EntityId> seeds,
                                    const RelationPlan& plan, int k) {
  if (seeds.empty()) throw ValidationError("execute_plan: empty seed set");
  if (k < 1) throw ValidationError("execute_plan: k must be >= 1");
  if (static_cast<int>(plan.hops.size()) != k)
    throw ValidationError("execute_plan: plan has " + std::to_string(plan.hops.size()) +
                          " hops but k = " + std::to_string(k));

  auto t0 = std::chrono::steady_clock::now();

  ExecutionResult result;
  result.stats.frontier_sizes.assign(static_cast<std::size_t>(k) + 1, 0);

  auto key = [](EntityId v, int d) { return (static_cast<std::uint64_t>(d) << 32) | v; };
  std::unordered_set<std::uint64_t> seen;
  std::deque<std::pair<EntityId, int>> queue;
  std::vector<EntityId> answers;

  {
    // Seeds enter at depth 0 in ascending order for reproducible traversal.
    std::vector<EntityId> sorted_seeds(seeds.begin(), seeds.end());
    std::sort(sorted_seeds.begin(), sorted_seeds.end());
    sorted_seeds.erase(std::unique(sorted_seeds.begin(), sorted_seeds.end()), sorted_seeds.end());
    for (EntityId s : sorted_seeds) {
      g.entity_name(s);  // validates grounding
      queue.emplace_back(s, 0);
    }
  }

  std::vector<EntityId> expansion;  // union of N_r(v) over the hop's relations
  while (!queue.empty()) {
    auto [v, d] = queue.front();
    queue.pop_front();
    if (d == k) {
      answers.push_back(v);
      continue;
    }
    if (!seen.insert(key(v, d)).second) continue;
    ++result.stats.nodes_expanded;
    ++result.stats.frontier_sizes[static_cast<std::size_t>(d)];

    expansion.clear();
    for (RelationId r : plan.hops[static_cast<std::size_t>(d)]) {
      auto targets = g.neighbors(v, r);
      expansion.insert(expansion.end(), targets.begin(), targets.end());
    }
    std::sort(expansion.begin(), expansion.end());
    expansion.erase(std::unique(expansion.begin(), expansion.end()), expansion.end());
    for (EntityId u : expansion) {
      if (!seen.contains(key(u, d + 1))) queue.emplace_back(u, d + 1);
    }
  }

  result.answers = make_answer_set(g, std::move(answers));
  result.stats.frontier_sizes[static_cast<std::size_t>(k)] = result.answers.entities.size();
  result.stats.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace kgqa
