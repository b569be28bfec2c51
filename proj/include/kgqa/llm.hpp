#pragma once

// Minimal chat-completion client for an OpenAI-compatible endpoint: retries
// with exponential backoff, token accounting, per-call cost estimation. The
// transport is abstract so tests and offline runs can script completions.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "kgqa/errors.hpp"
#include "kgqa/rng.hpp"

namespace kgqa {

struct LlmConfig {
  std::string base_url;                       // e.g. http://localhost:8000/v1
  std::string model_name;
  std::string api_key_env = "OPENAI_API_KEY";  // env var holding the key; never stored in reports
  double timeout_s = 60.0;
  int max_retries = 2;
  double price_per_input_token = 0.0;   // USD
  double price_per_output_token = 0.0;  // USD
  double retry_initial_backoff_s = 0.5;
};

inline void validate(const LlmConfig& cfg) {
  if (cfg.timeout_s <= 0) throw ConfigError("llm timeout must be > 0");
  if (cfg.max_retries < 0) throw ConfigError("llm max_retries must be >= 0");
  if (cfg.price_per_input_token < 0 || cfg.price_per_output_token < 0)
    throw ConfigError("llm token prices must be >= 0");
  if (cfg.retry_initial_backoff_s < 0) throw ConfigError("llm retry backoff must be >= 0");
}

struct LlmResponse {
  std::string text;
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
  double latency_s = 0.0;
  double estimated_cost = 0.0;  // input_tokens * price_in + output_tokens * price_out
};

inline double estimate_cost(const LlmConfig& cfg, std::int64_t input_tokens, std::int64_t output_tokens) {
  return static_cast<double>(input_tokens) * cfg.price_per_input_token +
         static_cast<double>(output_tokens) * cfg.price_per_output_token;
}

// One completion attempt. Implementations throw TransportError on network
// failure and EndpointError on non-2xx statuses.
class LlmTransport {
 public:
  virtual ~LlmTransport() = default;
  virtual LlmResponse attempt(const LlmConfig& cfg, const std::string& system_prompt,
                              const std::string& user_prompt) = 0;
};

inline bool retryable(const EndpointError& e) { return e.status == 429 || e.status >= 500; }

class LlmClient {
 public:
  LlmClient(LlmConfig cfg, std::shared_ptr<LlmTransport> transport)
      : cfg_(std::move(cfg)), transport_(std::move(transport)) {
    validate(cfg_);
  }

  const LlmConfig& config() const { return cfg_; }

  // Retries transient failures (transport errors, 429/5xx) up to
  // max_retries times: max_retries + 1 attempts total, backoff doubling
  // from retry_initial_backoff_s with +-20% jitter.
  LlmResponse complete(const std::string& system_prompt, const std::string& user_prompt) const {
    double backoff = cfg_.retry_initial_backoff_s;
    for (int attempt = 0;; ++attempt) {
      auto t0 = std::chrono::steady_clock::now();
      try {
        LlmResponse r = transport_->attempt(cfg_, system_prompt, user_prompt);
        r.latency_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.estimated_cost = estimate_cost(cfg_, r.input_tokens, r.output_tokens);
        return r;
      } catch (const EndpointError& e) {
        if (!retryable(e) || attempt >= cfg_.max_retries) throw;
      } catch (const TransportError&) {
        if (attempt >= cfg_.max_retries) throw;
      }
      sleep_with_jitter(backoff);
      backoff *= 2;
    }
  }

 private:
  static void sleep_with_jitter(double seconds) {
    if (seconds <= 0) return;
    thread_local SplitMix64 rng{0x5eedULL ^ std::hash<std::thread::id>{}(std::this_thread::get_id())};
    double jittered = seconds * rng.uniform(0.8, 1.2);
    std::this_thread::sleep_for(std::chrono::duration<double>(jittered));
  }

  LlmConfig cfg_;
  std::shared_ptr<LlmTransport> transport_;
};

inline std::int64_t approx_token_count(std::string_view text) {
  std::int64_t n = 0;
  bool in_token = false;
  for (char c : text) {
    bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r';
    if (!ws && !in_token) ++n;
    in_token = !ws;
  }
  return n;
}

// Scripted transport for tests and offline CLI runs. Serves responses from a
// queue (or a responder function), optionally failing the first N attempts,
// and counts every attempt it sees.
class FakeLlmTransport : public LlmTransport {
 public:
  FakeLlmTransport() = default;
  explicit FakeLlmTransport(std::vector<std::string> scripted) {
    for (auto& s : scripted) script_.push_back(std::move(s));
  }

  void push(std::string response) {
    std::lock_guard lock(mu_);
    script_.push_back(std::move(response));
  }
  void fail_next(int n) {
    std::lock_guard lock(mu_);
    failures_remaining_ = n;
  }
  void respond_with(std::function<std::string(const std::string&, const std::string&)> fn) {
    std::lock_guard lock(mu_);
    responder_ = std::move(fn);
  }
  int attempts() const {
    std::lock_guard lock(mu_);
    return attempts_;
  }

  LlmResponse attempt(const LlmConfig& cfg, const std::string& system_prompt,
                      const std::string& user_prompt) override {
    std::lock_guard lock(mu_);
    ++attempts_;
    if (failures_remaining_ != 0) {
      if (failures_remaining_ > 0) --failures_remaining_;
      throw TransportError("scripted transport failure");
    }
    std::string text;
    if (responder_) {
      text = responder_(system_prompt, user_prompt);
    } else {
      if (script_.empty()) throw TransportError("fake llm script exhausted");
      text = std::move(script_.front());
      script_.pop_front();
    }
    LlmResponse r;
    r.text = std::move(text);
    r.input_tokens = approx_token_count(system_prompt) + approx_token_count(user_prompt);
    r.output_tokens = approx_token_count(r.text);
    r.estimated_cost = estimate_cost(cfg, r.input_tokens, r.output_tokens);
    return r;
  }

 private:
  mutable std::mutex mu_;
  std::deque<std::string> script_;
  std::function<std::string(const std::string&, const std::string&)> responder_;
  int failures_remaining_ = 0;  // -1 = fail forever
  int attempts_ = 0;
};

inline std::string read_api_key(const LlmConfig& cfg) {
  if (cfg.api_key_env.empty()) return {};
  const char* v = std::getenv(cfg.api_key_env.c_str());
  return v ? std::string(v) : std::string{};
}

}  // namespace kgqa
