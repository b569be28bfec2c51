#pragma once

// A relation plan: for each hop, the set of relation ids the traversal may
// follow, plus the model's free-text reasoning. Parsing is deliberately
// forgiving about surrounding prose and strict about structure.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgqa/errors.hpp"
#include "kgqa/json_extract.hpp"
#include "kgqa/kg.hpp"

namespace kgqa {

inline constexpr int kMaxHopDepth = 3;
inline constexpr int kMaxRelationsPerHop = 2;

struct RelationPlan {
  std::string reasoning;
  std::vector<std::vector<RelationId>> hops;
  std::vector<std::string> warnings;  // diagnostics (truncations), not part of equality

  friend bool operator==(const RelationPlan& a, const RelationPlan& b) {
    return a.reasoning == b.reasoning && a.hops == b.hops;
  }
};

// Resolves a relation name against the forward vocabulary, accepting
// "<name>_reverse" forms.
inline std::optional<RelationId> resolve_relation_name(const KnowledgeGraph& g, std::string_view name) {
  return g.find_relation(name);
}

// Canonical plan JSON: {"reasoning": string, "hops": [[name, ...], ...]}.
inline nlohmann::json plan_to_json(const KnowledgeGraph& g, const RelationPlan& plan) {
  nlohmann::json hops = nlohmann::json::array();
  for (const auto& hop : plan.hops) {
    nlohmann::json names = nlohmann::json::array();
    for (RelationId r : hop) names.push_back(g.relation_name(r));
    hops.push_back(std::move(names));
  }
  return nlohmann::json{{"reasoning", plan.reasoning}, {"hops", std::move(hops)}};
}

inline std::string serialize_plan(const KnowledgeGraph& g, const RelationPlan& plan) {
  return plan_to_json(g, plan).dump();
}

// Extracts the first balanced JSON object from raw model output and
// validates it into a RelationPlan.
//
// Throws ParseError when no parseable object is present and ValidationError
// when the object violates the schema (missing/empty hops, unknown relation
// names, non-string entries). Plans longer than max_hops are truncated with
// a warning; hops with more than two relations keep the first two.
inline RelationPlan parse_plan(std::string_view raw, const KnowledgeGraph& g, int max_hops) {
  if (max_hops < 1 || max_hops > kMaxHopDepth)
    throw ValidationError("max_hops must be between 1 and " + std::to_string(kMaxHopDepth));

  auto object_text = extract_json_object(raw);
  if (!object_text) throw ParseError("no balanced JSON object found in model output");

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(*object_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("extracted object is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("extracted JSON value is not an object");

  RelationPlan plan;
  if (doc.contains("reasoning")) {
    if (!doc["reasoning"].is_string()) throw ValidationError("'reasoning' must be a string");
    plan.reasoning = doc["reasoning"].get<std::string>();
  }

  if (!doc.contains("hops")) throw ValidationError("plan object has no 'hops' field");
  const nlohmann::json& hops = doc["hops"];
  if (!hops.is_array()) throw ValidationError("'hops' must be an array of arrays");
  if (hops.empty()) throw ValidationError("'hops' is empty");

  for (const auto& hop : hops) {
    if (static_cast<int>(plan.hops.size()) >= max_hops) {
      plan.warnings.push_back("plan longer than " + std::to_string(max_hops) + " hops; extra hops dropped");
      break;
    }
    if (!hop.is_array()) throw ValidationError("each hop must be an array of relation names");
    if (hop.empty()) throw ValidationError("hop " + std::to_string(plan.hops.size()) + " has no relations");
    std::vector<RelationId> ids;
    for (const auto& name : hop) {
      if (!name.is_string()) throw ValidationError("relation entries must be strings");
      if (static_cast<int>(ids.size()) >= kMaxRelationsPerHop) {
        plan.warnings.push_back("hop " + std::to_string(plan.hops.size()) + " lists more than " +
                                std::to_string(kMaxRelationsPerHop) + " relations; extras dropped");
        break;
      }
      auto id = resolve_relation_name(g, name.get<std::string>());
      if (!id) throw ValidationError("unknown relation name '" + name.get<std::string>() + "'");
      ids.push_back(*id);
    }
    plan.hops.push_back(std::move(ids));
  }
  return plan;
}

}  // namespace kgqa
