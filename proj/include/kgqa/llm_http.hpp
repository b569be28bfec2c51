#pragma once

// HTTP transport speaking the OpenAI chat-completions wire format. Kept out
// of llm.hpp so offline builds and tests do not pay for the httplib include.

#include <memory>
#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "kgqa/errors.hpp"
#include "kgqa/llm.hpp"

namespace kgqa {

namespace detail {

// Splits "http://host:port/prefix" into client root and path prefix.
inline std::pair<std::string, std::string> split_base_url(const std::string& base_url) {
  auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("base_url must include a scheme: " + base_url);
  auto path_start = base_url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {base_url, ""};
  std::string prefix = base_url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {base_url.substr(0, path_start), prefix};
}

}  // namespace detail

class HttpLlmTransport : public LlmTransport {
 public:
  LlmResponse attempt(const LlmConfig& cfg, const std::string& system_prompt,
                      const std::string& user_prompt) override {
    auto [root, prefix] = detail::split_base_url(cfg.base_url);
    httplib::Client client(root);
    client.set_connection_timeout(std::chrono::duration<double>(cfg.timeout_s));
    client.set_read_timeout(std::chrono::duration<double>(cfg.timeout_s));
    client.set_write_timeout(std::chrono::duration<double>(cfg.timeout_s));

    nlohmann::json messages = nlohmann::json::array();
    if (!system_prompt.empty()) messages.push_back({{"role", "system"}, {"content", system_prompt}});
    messages.push_back({{"role", "user"}, {"content", user_prompt}});
    nlohmann::json body{{"model", cfg.model_name}, {"messages", std::move(messages)}};

    httplib::Headers headers;
    std::string key = read_api_key(cfg);
    if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);

    auto res = client.Post(prefix + "/chat/completions", headers, body.dump(), "application/json");
    if (!res) throw TransportError("request to " + cfg.base_url + " failed: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300) throw EndpointError(res->status, res->body);

    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw EndpointError(res->status, std::string("unparseable response body: ") + e.what());
    }

    LlmResponse out;
    try {
      out.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw EndpointError(res->status, std::string("response missing choices[0].message.content: ") + e.what());
    }
    if (doc.contains("usage")) {
      out.input_tokens = doc["usage"].value("prompt_tokens", std::int64_t{0});
      out.output_tokens = doc["usage"].value("completion_tokens", std::int64_t{0});
    }
    return out;
  }
};

inline LlmClient make_http_llm_client(LlmConfig cfg) {
  return LlmClient(std::move(cfg), std::make_shared<HttpLlmTransport>());
}

}  // namespace kgqa
