#pragma once

// Turns a question into either a relation plan (grounded mode) or a direct
// answer list (zero-shot baseline). Both paths share the same robustness
// strategy: extract the first balanced JSON value, and if that fails, ask
// the model once to reformat its own output.

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgqa/errors.hpp"
#include "kgqa/json_extract.hpp"
#include "kgqa/kg.hpp"
#include "kgqa/llm.hpp"
#include "kgqa/relation_plan.hpp"

namespace kgqa {

// Hop-wise relation-selection prompt. Placeholders: {available_relations},
// {question}, {max_hops}. Whitespace is significant, including the trailing
// spaces before some line breaks; do not reflow.
inline constexpr const char* kPlanPromptTemplate =
    "You are analyzing a knowledge graph question \n"
    "to determine which relations to traverse.\n"
    "\n"
    "Available relations in the knowledge graph:\n"
    "{available_relations}\n"
    "\n"
    "Question: \"{question}\"\n"
    "\n"
    "This is a {max_hops}-hop question. You need to select \n"
    "which relation(s) might be relevant at EACH hop.\n"
    "\n"
    "For each hop, select 1-2 most relevant relations from \n"
    "the list above. Think about the logical path needed \n"
    "to answer the question.\n"
    "\n"
    "Examples:\n"
    "- \"Who directed movies starring [Actor]?\" \n"
    "\u2192 Hop 1: starred_actors, Hop 2: directed_by\n"
    "- \"What genre are films written by [Writer]?\" \n"
    "\u2192 Hop 1: written_by, Hop 2: has_genre\n"
    "- \"What year were movies by the director of [Movie]?\" \n"
    "\u2192 Hop 1: directed_by, Hop 2: release_year\n"
    "- \"What films can be described by [occupation]?\" \n"
    "\u2192 Hop 1: has_tags (films point TO tags/themes)\n"
    "- \"What films can be described by [Person Name]?\" \n"
    "\u2192 Hop 1: has_tags (films associated with person as tag)\n"
    "\n"
    "Respond in JSON format:\n"
    "{\n"
    "  \"reasoning\": \"brief explanation of the path\",\n"
    "  \"hops\": [\n"
    "    [\"relation1\"],\n"
    "    [\"relation2\"],\n"
    "    ...\n"
    "  ]\n"
    "}\n"
    "\n"
    "Provide your analysis:";

namespace detail {

inline void replace_once(std::string& text, std::string_view placeholder, std::string_view value) {
  auto pos = text.find(placeholder);
  if (pos == std::string::npos) return;
  text.replace(pos, placeholder.size(), value);
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace detail

// Pure function: identical inputs yield identical bytes.
inline std::string build_plan_prompt(const std::string& question,
                                     const std::vector<std::string>& relation_vocabulary, int max_hops) {
  if (max_hops < 1 || max_hops > kMaxHopDepth)
    throw ValidationError("max_hops must be between 1 and " + std::to_string(kMaxHopDepth));
  if (relation_vocabulary.empty()) throw ValidationError("relation vocabulary is empty");
  std::string prompt = kPlanPromptTemplate;
  detail::replace_once(prompt, "{available_relations}", detail::join(relation_vocabulary, ", "));
  detail::replace_once(prompt, "{question}", question);
  detail::replace_once(prompt, "{max_hops}", std::to_string(max_hops));
  return prompt;
}

inline std::string plan_repair_prompt(const std::string& raw) {
  return "The text below was supposed to be a JSON object with a string field "
         "\"reasoning\" and a field \"hops\" holding an array of arrays of relation names, "
         "but it is malformed or incomplete. Rewrite it as one valid JSON object in exactly "
         "that schema. Output only the JSON object.\n\nText:\n" +
         raw;
}

// One planning call plus at most one repair pass. Throws PlanningError (with
// both raw completions) when the repaired output still fails to parse;
// validation errors (unknown relations, empty hops) are not repairable by
// reformatting and surface immediately on the repair pass too.
inline RelationPlan plan_question(const LlmClient& client, const KnowledgeGraph& g,
                                  const std::string& question, int max_hops,
                                  double* cost_accumulator = nullptr,
                                  std::vector<std::string>* raw_out = nullptr) {
  std::string prompt = build_plan_prompt(question, g.relation_vocabulary(), max_hops);
  LlmResponse first = client.complete("", prompt);
  if (cost_accumulator) *cost_accumulator += first.estimated_cost;
  std::vector<std::string> raws{first.text};
  try {
    RelationPlan plan = parse_plan(first.text, g, max_hops);
    if (raw_out) *raw_out = std::move(raws);
    return plan;
  } catch (const Error&) {
    LlmResponse second = client.complete("", plan_repair_prompt(first.text));
    if (cost_accumulator) *cost_accumulator += second.estimated_cost;
    raws.push_back(second.text);
    try {
      RelationPlan plan = parse_plan(second.text, g, max_hops);
      if (raw_out) *raw_out = std::move(raws);
      return plan;
    } catch (const Error& e) {
      throw PlanningError(std::string("planning failed after repair pass: ") + e.what(), std::move(raws));
    }
  }
}

// ---------------------------------------------------------------------------
// Zero-shot baseline
// ---------------------------------------------------------------------------

inline constexpr int kZeroShotAnswerCap = 50;

// Not taken from any external template: the output contract (a JSON array of
// at most 50 answer strings, with a reformatting second pass) is what
// matters, the wording is this project's own.
inline std::string zero_shot_prompt(const std::string& question) {
  return "Answer the question from your own knowledge. List every plausible factual answer.\n"
         "Respond with a JSON array of answer strings, at most " +
         std::to_string(kZeroShotAnswerCap) +
         " items, and nothing else.\n\nQuestion: \"" + question + "\"\n\nAnswers:";
}

inline std::string zero_shot_repair_prompt(const std::string& raw) {
  return "Convert the text below into a JSON array of answer strings (at most " +
         std::to_string(kZeroShotAnswerCap) +
         " items). Output only the JSON array.\n\nText:\n" + raw;
}

struct ZeroShotAnswerSet {
  std::vector<std::string> answers;       // deduplicated, order preserved, <= 50
  std::vector<std::string> raw_passes;    // one or two raw completions, for audit
};

namespace detail {

inline std::optional<std::vector<std::string>> try_extract_answer_array(std::string_view text) {
  auto array_text = extract_json_array(text);
  if (!array_text) return std::nullopt;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(*array_text);
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
  if (!doc.is_array()) return std::nullopt;
  std::vector<std::string> out;
  for (const auto& item : doc) {
    if (item.is_string())
      out.push_back(item.get<std::string>());
    else if (item.is_number_integer())
      out.push_back(std::to_string(item.get<std::int64_t>()));
    else
      return std::nullopt;  // structured garbage; let the repair pass handle it
  }
  return out;
}

inline std::vector<std::string> dedup_and_cap(std::vector<std::string> answers, int cap) {
  std::vector<std::string> out;
  for (auto& a : answers) {
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(std::move(a));
    if (static_cast<int>(out.size()) >= cap) break;
  }
  return out;
}

}  // namespace detail

// Pass 1 asks for answers directly; if no JSON string-array can be extracted,
// pass 2 asks the model to reformat its own pass-1 text. Throws ParseError
// when both passes fail (callers record that as a miss, not a crash).
inline ZeroShotAnswerSet zero_shot_answers(const LlmClient& client, const std::string& question,
                                           double* cost_accumulator = nullptr) {
  ZeroShotAnswerSet result;
  LlmResponse first = client.complete("", zero_shot_prompt(question));
  if (cost_accumulator) *cost_accumulator += first.estimated_cost;
  result.raw_passes.push_back(first.text);
  auto parsed = detail::try_extract_answer_array(first.text);
  if (!parsed) {
    LlmResponse second = client.complete("", zero_shot_repair_prompt(first.text));
    if (cost_accumulator) *cost_accumulator += second.estimated_cost;
    result.raw_passes.push_back(second.text);
    parsed = detail::try_extract_answer_array(second.text);
    if (!parsed) throw ParseError("zero-shot output unparseable after two passes");
  }
  result.answers = detail::dedup_and_cap(std::move(*parsed), kZeroShotAnswerCap);
  return result;
}

// ---------------------------------------------------------------------------
// Teacher traces
// ---------------------------------------------------------------------------

// One instruction-tuning record per (question, plan) pair, JSON-lines with
// fields instruction / input / output. The instruction is the plan prompt at
// the plan's own hop count; the output is the canonical plan JSON and
// round-trips through parse_plan.
inline std::size_t export_teacher_traces(const KnowledgeGraph& g, const std::vector<std::string>& questions,
                                         const std::vector<RelationPlan>& plans, std::ostream& out) {
  if (questions.size() != plans.size())
    throw ValidationError("export_teacher_traces: " + std::to_string(questions.size()) + " questions vs " +
                          std::to_string(plans.size()) + " plans");
  auto vocabulary = g.relation_vocabulary();
  for (std::size_t i = 0; i < questions.size(); ++i) {
    int hops = static_cast<int>(plans[i].hops.size());
    nlohmann::json record{{"instruction", build_plan_prompt(questions[i], vocabulary, hops)},
                          {"input", ""},
                          {"output", serialize_plan(g, plans[i])}};
    out << record.dump() << '\n';
  }
  return questions.size();
}

}  // namespace kgqa
