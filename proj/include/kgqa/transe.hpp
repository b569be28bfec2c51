#pragma once

// TransE graph embeddings trained from scratch: margin ranking loss over
// corrupted directed edges, per-example SGD, entity rows renormalized after
// every epoch. Reverse relations get their own vectors and the training set
// contains both edge directions.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgqa/container.hpp"
#include "kgqa/errors.hpp"
#include "kgqa/kg.hpp"
#include "kgqa/rng.hpp"

namespace kgqa {

struct TransEConfig {
  int dim = 256;
  double margin = 1.0;
  double learning_rate = 0.01;
  int epochs = 200;
  int negatives_per_positive = 1;
  std::uint64_t seed = 42;
};

inline void validate(const TransEConfig& cfg) {
  if (cfg.dim <= 0) throw ConfigError("transe dim must be positive");
  if (cfg.margin <= 0) throw ConfigError("transe margin must be positive");
  if (cfg.learning_rate <= 0) throw ConfigError("transe learning rate must be positive");
  if (cfg.epochs < 0) throw ConfigError("transe epochs must be >= 0");
  if (cfg.negatives_per_positive <= 0) throw ConfigError("transe negatives_per_positive must be positive");
}

struct GraphEmbeddingTable {
  int dim = 0;
  std::size_t entity_count = 0;
  std::size_t relation_count = 0;  // all relation ids, reverses included
  std::vector<float> entity;       // row-major entity_count x dim
  std::vector<float> relation;     // row-major relation_count x dim

  const float* entity_row(EntityId v) const {
    if (v >= entity_count) throw ValidationError("entity id out of range for embedding table");
    return entity.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(dim);
  }
  const float* relation_row(RelationId r) const {
    if (r >= relation_count) throw ValidationError("relation id out of range for embedding table");
    return relation.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(dim);
  }

  friend bool operator==(const GraphEmbeddingTable&, const GraphEmbeddingTable&) = default;
};

// -||e_h + e_r - e_t||_2; zero is the maximum.
inline double transe_score(const GraphEmbeddingTable& t, EntityId h, RelationId r, EntityId v) {
  const float* eh = t.entity_row(h);
  const float* er = t.relation_row(r);
  const float* ev = t.entity_row(v);
  double sq = 0;
  for (int d = 0; d < t.dim; ++d) {
    double diff = static_cast<double>(eh[d]) + er[d] - ev[d];
    sq += diff * diff;
  }
  return -std::sqrt(sq);
}

namespace detail {

inline void normalize_rows(std::vector<float>& data, std::size_t rows, int dim) {
  for (std::size_t i = 0; i < rows; ++i) {
    float* row = data.data() + i * static_cast<std::size_t>(dim);
    double norm = 0;
    for (int d = 0; d < dim; ++d) norm += static_cast<double>(row[d]) * row[d];
    norm = std::sqrt(norm);
    if (norm < 1e-12) continue;
    for (int d = 0; d < dim; ++d) row[d] = static_cast<float>(row[d] / norm);
  }
}

}  // namespace detail

inline GraphEmbeddingTable init_transe_table(const KnowledgeGraph& g, const TransEConfig& cfg) {
  validate(cfg);
  GraphEmbeddingTable t;
  t.dim = cfg.dim;
  t.entity_count = g.entity_count();
  t.relation_count = g.relation_count();
  t.entity.resize(t.entity_count * static_cast<std::size_t>(cfg.dim));
  t.relation.resize(t.relation_count * static_cast<std::size_t>(cfg.dim));
  SplitMix64 rng(cfg.seed);
  const double limit = std::sqrt(3.0 / cfg.dim);
  for (float& v : t.entity) v = static_cast<float>(rng.uniform(-limit, limit));
  for (float& v : t.relation) v = static_cast<float>(rng.uniform(-limit, limit));
  detail::normalize_rows(t.entity, t.entity_count, cfg.dim);
  return t;
}

struct TransETrainLog {
  // Margin loss on a fixed corrupted-pair evaluation set, measured after
  // each epoch. Negatives are frozen once per run so the series reflects the
  // embeddings, not sampling noise.
  std::vector<double> epoch_mean_loss;
  // Running loss over the pairs actually stepped on during the epoch.
  std::vector<double> online_mean_loss;
};

// Margin ranking over corrupted edges: L = max(0, margin + d(pos) - d(neg)),
// d the L2 distance. Head or tail is corrupted uniformly. Deterministic for
// a fixed seed. epochs = 0 returns the initialized table unchanged.
inline GraphEmbeddingTable train_transe(const KnowledgeGraph& g, const TransEConfig& cfg,
                                        TransETrainLog* log = nullptr) {
  validate(cfg);
  if (g.triple_count() == 0) throw ValidationError("cannot train TransE on an empty graph");
  GraphEmbeddingTable t = init_transe_table(g, cfg);

  std::vector<Triple> edges;
  edges.reserve(g.triple_count() * 2);
  for (const Triple& tr : g.forward_triples()) {
    edges.push_back(tr);
    edges.push_back({tr.tail, reverse_of(tr.relation), tr.head});
  }

  const int dim = cfg.dim;
  const std::size_t n_entities = t.entity_count;
  SplitMix64 rng(cfg.seed ^ 0xabcdef1234567890ULL);
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  auto row_e = [&](EntityId v) { return t.entity.data() + static_cast<std::size_t>(v) * dim; };
  auto row_r = [&](RelationId r) { return t.relation.data() + static_cast<std::size_t>(r) * dim; };

  auto distance = [&](EntityId h, RelationId r, EntityId v) {
    const float* eh = row_e(h);
    const float* er = row_r(r);
    const float* ev = row_e(v);
    double sq = 0;
    for (int d = 0; d < dim; ++d) {
      double diff = static_cast<double>(eh[d]) + er[d] - ev[d];
      sq += diff * diff;
    }
    return std::sqrt(sq);
  };

  // SGD step on one (positive, negative) pair that violates the margin.
  auto sgd_pair = [&](const Triple& pos, const Triple& neg) -> double {
    double dp = distance(pos.head, pos.relation, pos.tail);
    double dn = distance(neg.head, neg.relation, neg.tail);
    double loss = cfg.margin + dp - dn;
    if (loss <= 0) return 0.0;
    const double lr = cfg.learning_rate;
    float* ph = row_e(pos.head);
    float* pt = row_e(pos.tail);
    float* pr = row_r(pos.relation);
    float* nh = row_e(neg.head);
    float* nt = row_e(neg.tail);
    float* nr = row_r(neg.relation);
    double inv_dp = dp > 1e-12 ? 1.0 / dp : 0.0;
    double inv_dn = dn > 1e-12 ? 1.0 / dn : 0.0;
    for (int d = 0; d < dim; ++d) {
      // gradient of dp wrt (h + r - t) direction, pushed down
      double gp = (static_cast<double>(ph[d]) + pr[d] - pt[d]) * inv_dp;
      double gn = (static_cast<double>(nh[d]) + nr[d] - nt[d]) * inv_dn;
      ph[d] -= static_cast<float>(lr * gp);
      pr[d] -= static_cast<float>(lr * gp);
      pt[d] += static_cast<float>(lr * gp);
      // negative distance is maximized
      nh[d] += static_cast<float>(lr * gn);
      nr[d] += static_cast<float>(lr * gn);
      nt[d] -= static_cast<float>(lr * gn);
    }
    return loss;
  };

  // Frozen evaluation pairs for the per-epoch loss curve.
  std::vector<std::pair<Triple, Triple>> eval_pairs;
  {
    SplitMix64 eval_rng(cfg.seed ^ 0x5ca1ab1e5ca1ab1eULL);
    eval_pairs.reserve(edges.size());
    for (const Triple& pos : edges) {
      Triple neg = pos;
      EntityId candidate = static_cast<EntityId>(eval_rng.below(n_entities));
      if (eval_rng.coin())
        neg.head = candidate;
      else
        neg.tail = candidate;
      eval_pairs.emplace_back(pos, neg);
    }
  }
  auto eval_loss = [&]() {
    double sum = 0;
    for (const auto& [pos, neg] : eval_pairs) {
      double l = cfg.margin + distance(pos.head, pos.relation, pos.tail) -
                 distance(neg.head, neg.relation, neg.tail);
      if (l > 0) sum += l;
    }
    return sum / static_cast<double>(eval_pairs.size());
  };

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order, rng);
    double loss_sum = 0;
    std::size_t pairs = 0;
    for (std::size_t idx : order) {
      const Triple& pos = edges[idx];
      for (int neg_i = 0; neg_i < cfg.negatives_per_positive; ++neg_i) {
        Triple neg = pos;
        EntityId candidate = static_cast<EntityId>(rng.below(n_entities));
        if (rng.coin())
          neg.head = candidate;
        else
          neg.tail = candidate;
        loss_sum += sgd_pair(pos, neg);
        ++pairs;
      }
    }
    detail::normalize_rows(t.entity, t.entity_count, dim);
    if (log) {
      log->epoch_mean_loss.push_back(eval_loss());
      log->online_mean_loss.push_back(pairs ? loss_sum / static_cast<double>(pairs) : 0.0);
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Checkpoint IO (shared container format)
// ---------------------------------------------------------------------------

inline void save_embedding_table(const std::string& path, const GraphEmbeddingTable& t,
                                 const nlohmann::json& extra_config = {}) {
  Container c;
  c.config = {{"kind", "transe_table"}, {"dim", t.dim}, {"entity_count", t.entity_count},
              {"relation_count", t.relation_count}};
  if (!extra_config.is_null() && !extra_config.empty()) c.config["train"] = extra_config;
  c.arrays.push_back(make_f32_array("entity", {t.entity_count, static_cast<std::size_t>(t.dim)}, t.entity));
  c.arrays.push_back(
      make_f32_array("relation", {t.relation_count, static_cast<std::size_t>(t.dim)}, t.relation));
  write_container(path, c);
}

inline GraphEmbeddingTable load_embedding_table(const std::string& path) {
  Container c = read_container(path);
  if (c.config.value("kind", "") != "transe_table")
    throw ValidationError("container at " + path + " is not a transe_table");
  GraphEmbeddingTable t;
  t.dim = c.config.at("dim").get<int>();
  t.entity_count = c.config.at("entity_count").get<std::size_t>();
  t.relation_count = c.config.at("relation_count").get<std::size_t>();
  t.entity = c.at("entity").f32;
  t.relation = c.at("relation").f32;
  if (t.entity.size() != t.entity_count * static_cast<std::size_t>(t.dim) ||
      t.relation.size() != t.relation_count * static_cast<std::size_t>(t.dim))
    throw ValidationError("embedding table arrays do not match recorded shapes");
  return t;
}

}  // namespace kgqa
