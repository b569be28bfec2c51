#pragma once

// Remote text-embedding provider speaking the OpenAI embeddings wire format.
// Consumed through the TextEmbedder interface; wrap in CachingTextEmbedder
// for anything beyond one-off calls.

#include <string>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "kgqa/embeddings.hpp"
#include "kgqa/errors.hpp"
#include "kgqa/llm.hpp"
#include "kgqa/llm_http.hpp"

namespace kgqa {

struct EmbeddingProviderConfig {
  std::string base_url;  // e.g. https://api.openai.com/v1
  std::string model_name = "text-embedding-3-small";
  std::string api_key_env = "OPENAI_API_KEY";
  int dim = 1536;
  double timeout_s = 60.0;
  int max_retries = 2;
};

class RemoteTextEmbedder : public TextEmbedder {
 public:
  explicit RemoteTextEmbedder(EmbeddingProviderConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.dim <= 0) throw ConfigError("embedding dim must be positive");
  }

  std::string id() const override { return "remote-" + cfg_.model_name; }
  int dim() const override { return cfg_.dim; }

  std::vector<float> embed(const std::string& text) override {
    TransportError last("unreached");
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      try {
        return attempt_once(text);
      } catch (const TransportError& e) {
        last = e;
      } catch (const EndpointError& e) {
        if (!retryable(e)) throw;
        last = TransportError(e.what());
      }
    }
    throw last;
  }

 private:
  std::vector<float> attempt_once(const std::string& text) {
    auto [root, prefix] = detail::split_base_url(cfg_.base_url);
    httplib::Client client(root);
    client.set_connection_timeout(std::chrono::duration<double>(cfg_.timeout_s));
    client.set_read_timeout(std::chrono::duration<double>(cfg_.timeout_s));

    httplib::Headers headers;
    if (!cfg_.api_key_env.empty()) {
      if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }
    nlohmann::json body{{"model", cfg_.model_name}, {"input", text}};
    auto res = client.Post(prefix + "/embeddings", headers, body.dump(), "application/json");
    if (!res) throw TransportError("embedding request failed: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300) throw EndpointError(res->status, res->body);

    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(res->body);
      const auto& vec = doc.at("data").at(0).at("embedding");
      std::vector<float> out;
      out.reserve(vec.size());
      for (const auto& v : vec) out.push_back(v.get<float>());
      if (static_cast<int>(out.size()) != cfg_.dim)
        throw ValidationError("endpoint returned dim " + std::to_string(out.size()) + ", expected " +
                              std::to_string(cfg_.dim));
      return out;
    } catch (const nlohmann::json::exception& e) {
      throw EndpointError(res->status, std::string("unparseable embeddings body: ") + e.what());
    }
  }

  EmbeddingProviderConfig cfg_;
};

}  // namespace kgqa
